#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdesign/bigint.hpp"
#include "qdesign/singer.hpp"
#include "qdesign/subspace.hpp"
#include "qdesign/tower.hpp"

namespace qdesign {

/// i = GF(q)-dimension, j = GF(q^l)-dimension of the span.
struct OmegaClass {
  int i = 0, j = 0;
  friend auto operator<=>(const OmegaClass&, const OmegaClass&) = default;
};

/// G-orbit label. Class (k,1): `orbit` indexes the H-orbits of k-subspaces
/// of GF(q^l) and r = 0. Class (k,k-1), k >= 3: `orbit` indexes the H-orbits
/// of (r+1)-subspaces. Class (k,k): r = 0, orbit = 0.
struct OrbitLabel {
  OmegaClass omega;
  int r = 0;
  std::uint32_t orbit = 0;

  friend auto operator<=>(const OrbitLabel&, const OrbitLabel&) = default;
  bool spread_class() const { return omega.j == 1; }
  bool full_class() const { return omega.j == omega.i && omega.i >= 2; }
  /// Dimension of the GF(q^l)-subspace whose H-orbit names the label.
  int h_dim() const { return spread_class() ? omega.i : full_class() ? 0 : r + 1; }
  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(omega.i) << 56) | (static_cast<std::uint64_t>(omega.j) << 48) |
           (static_cast<std::uint64_t>(r) << 40) | orbit;
  }
};

struct TRepresentative {
  int k = 0, r = 0;
  std::vector<Word> u;
  Subspace realized;
};

BigInt stabilizer_order_T(int k, int r, int u, int m, int l, std::uint64_t q);
BigInt orbit_size_T(int k, int r, int u, int m, int l, std::uint64_t q);

/// Orbit classification of subspaces of GF(q)^{ml} under GL(m, q^l).
class OrbitAtlas {
 public:
  explicit OrbitAtlas(const FieldTower& tower);
  OrbitAtlas(const OrbitAtlas&) = delete;
  OrbitAtlas& operator=(const OrbitAtlas&) = delete;

  const FieldTower& tower() const { return tower_; }
  const SingerAction& singer() const { return singer_; }
  /// H-orbits on d-subspaces of GF(q^l), built on first use.
  const SingerOrbitTable& h_table(int d) const;

  OmegaClass classify(const Subspace& w) const;
  /// nullopt for the unclassified classes (k,j) with 2 <= j <= k-2.
  std::optional<OrbitLabel> try_label(const Subspace& w) const;
  OrbitLabel orbit_label(const Subspace& w) const;

  /// Stabilizer parameter u of the H-orbit behind the label (0 for (k,k)).
  int label_u(const OrbitLabel& label) const;
  const Subspace& label_rep(const OrbitLabel& label) const;
  /// A concrete member of the orbit.
  Subspace realize(const OrbitLabel& label) const;
  BigInt orbit_size(const OrbitLabel& label) const;
  BigInt stabilizer_order(const OrbitLabel& label) const;
  std::string describe(const OrbitLabel& label) const;
  /// Label for the H-orbit `rep` of (r+1)-subspaces, class (k,k-1).
  OrbitLabel t_label(int k, int r, std::uint32_t orbit) const;

  TRepresentative t_representative(int k, int r, std::span<const Word> u) const;
  /// One representative per G-orbit on Omega_{k,r}^{k-1}, in H-table order.
  std::vector<TRepresentative> f_k_r_reps(int k, int r) const;
  /// The H-orbit rep of (r+1)-subspaces rescaled by the least scalar that
  /// makes it contain 1; returns u_1..u_r (its rows after the first).
  std::vector<Word> normalized_u(int r, std::uint32_t orbit) const;

  /// Columns of A_k: (k,1) labels, then (k,k-1) labels for r = 1..k-1, then
  /// (k,k) when k <= m.
  std::vector<OrbitLabel> column_labels(int k) const;
  /// Rows of A_k: (2,1) labels then the (2,2) label.
  std::vector<OrbitLabel> row_labels() const;

 private:
  FieldTower tower_;
  SingerAction singer_;
  mutable std::array<std::once_flag, 65> table_once_;
  mutable std::array<std::unique_ptr<SingerOrbitTable>, 65> tables_;
};

/// Whether the columns (a_{ij} + b_j u_i) are GF(q^l)-independent, decided
/// by GF(q)-independence of the vectors (b_j, a_{1j}, ..., a_{rj}).
bool column_independence_criterion(const FieldTower& tower, std::span<const Word> u,
                                   const std::vector<std::vector<Elem>>& a, std::span<const Elem> b);

}  // namespace qdesign
