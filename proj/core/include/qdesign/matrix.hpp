#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qdesign/bigint.hpp"

namespace qdesign {

/// Exact integer matrix whose rows and columns are orbits, grouped in named
/// blocks (for example "F2^1" or "Fk,2^{k-1}").
struct IncidenceBlockMatrix {
  std::vector<std::string> row_names, col_names;
  std::vector<std::string> row_blocks, col_blocks;
  std::vector<std::vector<BigInt>> entries;

  std::size_t rows() const { return entries.size(); }
  std::size_t cols() const { return col_names.size(); }
  const BigInt& at(std::size_t i, std::size_t j) const { return entries[i][j]; }
};

nlohmann::json to_json(const IncidenceBlockMatrix& m);
std::string to_csv(const IncidenceBlockMatrix& m);
/// Entries that differ, as (row, col) pairs; shapes must agree.
std::vector<std::pair<std::size_t, std::size_t>> differences(const IncidenceBlockMatrix& a,
                                                              const IncidenceBlockMatrix& b);

}  // namespace qdesign
