#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qdesign/bigint.hpp"
#include "qdesign/field.hpp"
#include "qdesign/matrix.hpp"
#include "qdesign/subspace.hpp"

namespace qdesign {

/// The Singer cycle H = <T_w> acting on GF(q)^l = GF(q^l).
class SingerAction {
 public:
  SingerAction(std::uint64_t q, int l);
  explicit SingerAction(std::shared_ptr<const ExtensionField> field);

  const ExtensionField& field() const { return *field_; }
  const VectorSpace& space() const { return space_; }
  int l() const { return field_->degree(); }
  std::uint64_t q() const { return field_->base().order(); }
  std::uint64_t group_order() const { return field_->order() - 1; }

  /// Matrix of T_w over GF(q); column i holds the coordinates of w * x_{i+1}.
  std::vector<std::vector<Elem>> matrix() const;
  Row apply(Row x, std::uint64_t power = 1) const { return field_->mul(field_->exp(power), x); }
  Subspace apply(const Subspace& s, std::uint64_t power = 1) const;

 private:
  std::shared_ptr<const ExtensionField> field_;
  VectorSpace space_;
};

struct HOrbit {
  int d = 0;
  Subspace rep;
  std::uint64_t length = 0;
  int u = 0;  // stabilizer is GF(q^u)^*
};

/// Orbit of W under H by explicit cycling; rep is the least member.
HOrbit h_orbit_of(const Subspace& w, const SingerAction& h);

/// Every H-orbit on d-subspaces of GF(q)^l, sorted by (u, rep), together
/// with a rank -> orbit lookup.
class SingerOrbitTable {
 public:
  SingerOrbitTable(const SingerAction& h, int d);

  int d() const { return grassmannian_.d(); }
  const std::vector<HOrbit>& orbits() const { return orbits_; }
  const Grassmannian& grassmannian() const { return grassmannian_; }
  std::size_t orbit_index(const Subspace& s) const {
    return static_cast<std::size_t>(orbit_of_rank_[grassmannian_.rank(s)]);
  }

 private:
  Grassmannian grassmannian_;
  std::vector<HOrbit> orbits_;
  std::vector<std::int32_t> orbit_of_rank_;
};

std::vector<HOrbit> h_orbit_reps(int l, int d, std::uint64_t q);

int moebius(std::uint64_t n);
/// Number of H-orbits on d-subspaces of GF(q)^v, by the Moebius-sum formula.
BigInt n_d_v(int d, int v, std::uint64_t q);
/// Number of those orbits with stabilizer GF(q^u)^*.
BigInt n_d_u_v(int d, int u, int v, std::uint64_t q);

/// Rows: H-orbits on t-subspaces; columns: H-orbits on k-subspaces;
/// entry = number of members of the column orbit containing the row rep.
IncidenceBlockMatrix h_incidence_matrix(int l, int t, int k, std::uint64_t q);

enum class SearchStatus { exhausted, budget_exceeded, solution_limit };

struct KmSolution {
  std::vector<int> columns;   // selected column indices
  BigInt blocks;              // sum of the weights of selected columns
};

struct KmResult {
  std::vector<KmSolution> solutions;
  SearchStatus status = SearchStatus::exhausted;
  std::uint64_t nodes = 0;
};

/// Depth-first search for 0-1 vectors x with M x = lambda * 1.
KmResult km_solve_binary(const IncidenceBlockMatrix& m, const BigInt& lambda,
                         const std::vector<BigInt>& weights, std::uint64_t budget = 10'000'000,
                         std::size_t max_solutions = 1000);

}  // namespace qdesign
