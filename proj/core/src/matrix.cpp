#include "qdesign/matrix.hpp"

#include <nlohmann/json.hpp>

#include "qdesign/error.hpp"

namespace qdesign {

namespace {

nlohmann::json number(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

}  // namespace

nlohmann::json to_json(const IncidenceBlockMatrix& m) {
  nlohmann::json rows = nlohmann::json::array(), cols = nlohmann::json::array();
  for (std::size_t i = 0; i < m.row_names.size(); ++i)
    rows.push_back({{"block", m.row_blocks[i]}, {"label", m.row_names[i]}});
  for (std::size_t j = 0; j < m.col_names.size(); ++j)
    cols.push_back({{"block", m.col_blocks[j]}, {"label", m.col_names[j]}});
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& row : m.entries) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& x : row) r.push_back(number(x));
    entries.push_back(std::move(r));
  }
  return {{"rows", rows}, {"columns", cols}, {"entries", entries}};
}

std::string to_csv(const IncidenceBlockMatrix& m) {
  std::string out = "row";
  for (const auto& c : m.col_names) out += "," + c;
  out += '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += m.row_names[i];
    for (const auto& x : m.entries[i]) out += "," + x.str();
    out += '\n';
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> differences(const IncidenceBlockMatrix& a,
                                                              const IncidenceBlockMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix shapes differ");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.at(i, j) != b.at(i, j)) out.emplace_back(i, j);
  return out;
}

}  // namespace qdesign
