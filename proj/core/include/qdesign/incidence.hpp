#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qdesign/atlas.hpp"
#include "qdesign/bigint.hpp"
#include "qdesign/matrix.hpp"

namespace qdesign {

/// A_k with the orbit labels behind its rows and columns.
struct AtlasMatrix {
  int k = 0;
  IncidenceBlockMatrix matrix;
  std::vector<OrbitLabel> row_labels, col_labels;
};

/// Label-key tally of the k-superspaces of t; unclassified superspaces are
/// counted under key 0 (no real label has key 0 for k >= 1).
std::map<std::uint64_t, std::uint64_t> superspace_label_counts(const OrbitAtlas& atlas, const Subspace& t, int k,
                                                               unsigned threads = 1);

/// |{K' in K^G : T <= K'}| for a realized member T of the row orbit.
BigInt incidence_entry(const OrbitAtlas& atlas, const OrbitLabel& row, const OrbitLabel& col);
/// Same count, with the row orbit realized by `t`.
BigInt incidence_entry_at(const OrbitAtlas& atlas, const Subspace& t, const OrbitLabel& col);

AtlasMatrix closed_form_A_k(const OrbitAtlas& atlas, int k);
AtlasMatrix brute_A_k(const OrbitAtlas& atlas, int k, unsigned threads = 1);

struct Discrepancy {
  std::size_t row, col;
  BigInt closed, brute;
};

struct ClosedFormReport {
  bool complete = true;  // false: only the first rows fit the budget
  std::uint64_t flags_checked = 0;
  std::size_t rows_checked = 0;
  std::vector<Discrepancy> discrepancies;
  AtlasMatrix closed, brute;
  bool match() const { return discrepancies.empty(); }
};

/// Compares the closed form with brute-force entries. Each checked row costs
/// [v-2 k-2]_q superspace classifications; rows beyond `budget` flags are
/// skipped and the report is marked partial.
ClosedFormReport verify_closed_form(const OrbitAtlas& atlas, int k, std::uint64_t budget = 50'000'000,
                                    unsigned threads = 1);

/// Names for the blocks of A_k ("F2^1", "F3,2^2", ...).
std::string block_name(const OrbitLabel& label);

}  // namespace qdesign
