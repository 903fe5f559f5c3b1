#include "qdesign/incidence.hpp"

#include <algorithm>

#include "qdesign/error.hpp"
#include "qdesign/parallel.hpp"

namespace qdesign {

namespace {

BigInt qp(std::uint64_t q, int e) { return ipow(q, static_cast<unsigned>(e)); }

void check_k(const OrbitAtlas& atlas, int k) {
  const FieldTower& t = atlas.tower();
  require(k >= 3 && k <= std::min(t.m() + 1, t.l()), "A_k requires 3 <= k <= min(m+1, l)");
}

IncidenceBlockMatrix frame(const OrbitAtlas& atlas, const std::vector<OrbitLabel>& rows,
                           const std::vector<OrbitLabel>& cols) {
  IncidenceBlockMatrix m;
  for (const auto& r : rows) {
    m.row_names.push_back(atlas.describe(r));
    m.row_blocks.push_back(block_name(r));
  }
  for (const auto& c : cols) {
    m.col_names.push_back(atlas.describe(c));
    m.col_blocks.push_back(block_name(c));
  }
  m.entries.assign(rows.size(), std::vector<BigInt>(cols.size(), 0));
  return m;
}

}  // namespace

std::string block_name(const OrbitLabel& label) {
  const std::string i = std::to_string(label.omega.i), j = std::to_string(label.omega.j);
  if (label.spread_class() || label.full_class()) return "F" + i + "^" + j;
  return "F" + i + "," + std::to_string(label.r) + "^" + j;
}

std::map<std::uint64_t, std::uint64_t> superspace_label_counts(const OrbitAtlas& atlas, const Subspace& t, int k,
                                                               unsigned threads) {
  const SuperspaceRange range(atlas.tower().space(), t, k);
  const unsigned workers = worker_count(range.size(), threads);
  std::vector<std::map<std::uint64_t, std::uint64_t>> partial(workers);
  parallel_for(range.size(), workers, [&](std::size_t begin, std::size_t end, unsigned w) {
    auto& tally = partial[w];
    range.for_range(begin, end, [&](std::uint64_t, const Subspace& s) {
      const auto label = atlas.try_label(s);
      ++tally[label ? label->key() : 0];
    });
  });
  std::map<std::uint64_t, std::uint64_t> out;
  for (const auto& p : partial)
    for (const auto& [key, n] : p) out[key] += n;
  return out;
}

BigInt incidence_entry_at(const OrbitAtlas& atlas, const Subspace& t, const OrbitLabel& col) {
  const auto tally = superspace_label_counts(atlas, t, col.omega.i);
  const auto it = tally.find(col.key());
  return it == tally.end() ? BigInt(0) : BigInt(it->second);
}

BigInt incidence_entry(const OrbitAtlas& atlas, const OrbitLabel& row, const OrbitLabel& col) {
  require(row.omega.i == 2, "rows of the incidence matrix are 2-subspace orbits");
  require(col.omega.i >= 2, "columns of the incidence matrix are k-subspace orbits");
  return incidence_entry_at(atlas, atlas.realize(row), col);
}

AtlasMatrix closed_form_A_k(const OrbitAtlas& atlas, int k) {
  check_k(atlas, k);
  const FieldTower& t = atlas.tower();
  const int m = t.m(), l = t.l();
  const std::uint64_t q = t.q();
  AtlasMatrix out{k, {}, atlas.row_labels(), atlas.column_labels(k)};
  out.matrix = frame(atlas, out.row_labels, out.col_labels);

  const BigInt qml = qp(q, m * l), qk = qp(q, k);
  BigInt e_num = 1, e_den = 1;
  for (int i = 1; i <= k - 2; ++i) e_num *= qml - qp(q, i * l);
  for (int i = 2; i <= k - 1; ++i) e_den *= qk - qp(q, i);
  const BigInt e = exact_div(e_num, e_den, "diagonal entry e");

  BigInt tail = 1;  // prod_{i=2}^{k-2} (q^{ml} - q^{il})
  for (int i = 2; i <= k - 2; ++i) tail *= qml - qp(q, i * l);
  const BigInt p_num = ((qk - 1) * (qk - q) - (qp(q, 2) - 1) * (qp(q, 2) - q)) * tail;
  const BigInt q_num = (qk - 1) * (qk - q) * tail;
  const auto q_entry = [&](int r, int u) {
    BigInt den = qp(q, u) - 1;
    for (int j = r + 1; j <= k - 1; ++j) den *= qk - qp(q, j);
    return exact_div(r == 1 ? p_num : q_num, den, r == 1 ? "row P entry" : "row Q entry");
  };
  BigInt R = 0;
  if (k <= m) {
    BigInt num = qp(q, (l - 1) * (k * (k - 1) / 2 - 1)), den = 1;
    for (int i = 2; i <= k - 1; ++i) {
      num *= qp(q, (m - i) * l) - 1;
      den *= qp(q, k - i) - 1;
    }
    R = exact_div(num, den, "entry R");
  }

  // H-incidence block from GF(q)^l.
  const SingerOrbitTable& cols_k = atlas.h_table(k);
  for (std::size_t i = 0; i < out.row_labels.size(); ++i) {
    const OrbitLabel& row = out.row_labels[i];
    std::vector<std::uint64_t> h_counts;
    if (row.spread_class()) {
      h_counts.assign(cols_k.orbits().size(), 0);
      SuperspaceRange(t.line_space(), atlas.label_rep(row), k).for_each([&](std::uint64_t, const Subspace& s) {
        ++h_counts[cols_k.orbit_index(s)];
      });
    }
    for (std::size_t j = 0; j < out.col_labels.size(); ++j) {
      const OrbitLabel& col = out.col_labels[j];
      BigInt v = 0;
      if (row.spread_class()) {
        if (col.spread_class()) v = h_counts[col.orbit];
        else if (!col.full_class() && col.r == 1 && col.orbit == row.orbit) v = e;
      } else if (!col.spread_class()) {
        v = col.full_class() ? R : q_entry(col.r, atlas.label_u(col));
      }
      out.matrix.entries[i][j] = v;
    }
  }
  return out;
}

namespace {

AtlasMatrix brute_rows(const OrbitAtlas& atlas, int k, std::size_t row_limit, unsigned threads) {
  AtlasMatrix out{k, {}, atlas.row_labels(), atlas.column_labels(k)};
  out.matrix = frame(atlas, out.row_labels, out.col_labels);
  for (std::size_t i = 0; i < out.row_labels.size() && i < row_limit; ++i) {
    const auto tally = superspace_label_counts(atlas, atlas.realize(out.row_labels[i]), k, threads);
    for (std::size_t j = 0; j < out.col_labels.size(); ++j) {
      const auto it = tally.find(out.col_labels[j].key());
      out.matrix.entries[i][j] = it == tally.end() ? 0 : it->second;
    }
  }
  return out;
}

}  // namespace

AtlasMatrix brute_A_k(const OrbitAtlas& atlas, int k, unsigned threads) {
  check_k(atlas, k);
  return brute_rows(atlas, k, static_cast<std::size_t>(-1), threads);
}

ClosedFormReport verify_closed_form(const OrbitAtlas& atlas, int k, std::uint64_t budget, unsigned threads) {
  check_k(atlas, k);
  const FieldTower& t = atlas.tower();
  ClosedFormReport rep;
  rep.closed = closed_form_A_k(atlas, k);
  const BigInt per_row = gaussian_binomial(t.v() - 2, k - 2, t.q());
  const std::size_t rows = rep.closed.row_labels.size();
  std::size_t fit = rows;
  if (per_row * rows > budget) {
    fit = static_cast<std::size_t>(BigInt(budget) / per_row);
    rep.complete = false;
  }
  rep.rows_checked = fit;
  rep.flags_checked = static_cast<std::uint64_t>(per_row * fit);
  rep.brute = brute_rows(atlas, k, fit, threads);
  for (std::size_t i = 0; i < fit; ++i)
    for (std::size_t j = 0; j < rep.closed.col_labels.size(); ++j)
      if (rep.closed.matrix.at(i, j) != rep.brute.matrix.at(i, j))
        rep.discrepancies.push_back({i, j, rep.closed.matrix.at(i, j), rep.brute.matrix.at(i, j)});
  return rep;
}

}  // namespace qdesign
