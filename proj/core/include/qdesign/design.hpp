#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qdesign/atlas.hpp"
#include "qdesign/bigint.hpp"
#include "qdesign/subspace.hpp"

namespace qdesign {

enum class DesignKind { gdd, design, pbd, mixed };

std::string to_string(DesignKind kind);
DesignKind parse_design_kind(const std::string& text);

struct ExplicitBlock {
  Subspace basis;
  std::uint64_t multiplicity = 1;
};

/// A G-orbit of blocks over the (m,l)-structure. r = 0 marks a spread-class
/// orbit (dim, 1) named by an H-orbit of dim-subspaces of GF(q)^l; r >= 1
/// marks class (dim, dim-1) named by an H-orbit of (r+1)-subspaces.
struct ImplicitLabel {
  int r = 0;
  int u = 0;
  int dim = 0;
  Subspace rep;
  std::uint64_t multiplicity = 1;
};

struct ImplicitBlocks {
  int m = 0, l = 0, k = 0;
  std::vector<ImplicitLabel> labels;
  bool omega_kk = false;  // the (k,k) orbit, multiplicity 1
};

struct DesignInstance {
  std::uint64_t q = 2;
  int v = 0;
  DesignKind kind = DesignKind::design;
  std::vector<int> K;
  std::optional<BigInt> claimed_lambda;
  /// Per-class claims for pbd/mixed instances over a group set.
  std::optional<BigInt> lambda_inside_groups, lambda_across_groups;
  std::optional<std::vector<Subspace>> groups;
  std::variant<std::vector<ExplicitBlock>, ImplicitBlocks> blocks;

  bool is_implicit() const { return std::holds_alternative<ImplicitBlocks>(blocks); }
  const ImplicitBlocks& implicit() const { return std::get<ImplicitBlocks>(blocks); }
  const std::vector<ExplicitBlock>& explicit_blocks() const { return std::get<std::vector<ExplicitBlock>>(blocks); }
};

/// Shared atlas for GF(q)^{ml} viewed over GF(q^l).
std::shared_ptr<const OrbitAtlas> atlas_for(std::uint64_t q, int m, int l);

OrbitLabel to_orbit_label(const OrbitAtlas& atlas, const ImplicitLabel& label);
ImplicitLabel to_implicit_label(const OrbitAtlas& atlas, const OrbitLabel& label, std::uint64_t multiplicity = 1);

/// The blocks of one orbit (or one explicit block) as Grassmannian ranks.
struct BlockSet {
  int dim = 0;
  std::vector<std::uint64_t> ranks;
  std::uint64_t multiplicity = 1;
};

/// Expands every block; implicit orbits by breadth-first search under GL(m, q^l).
std::vector<BlockSet> expand_blocks(const DesignInstance& d);
BigInt block_count(const DesignInstance& d);
bool is_simple(const DesignInstance& d);

// ---- q-GDDs --------------------------------------------------------------

struct GddSelection {
  /// (r, u) -> w_{r,u}
  std::map<std::pair<int, int>, std::uint64_t> w;
  bool omega_kk = false;
  /// Optional explicit choice of H-orbit indices (into the (r+1)-table) per
  /// (r, u); must have exactly w_{r,u} entries when present.
  std::map<std::pair<int, int>, std::vector<std::uint32_t>> picks;
};

/// Parses "r,u=w[,r,u=w...]" or "r,u=w;r,u=w".
GddSelection parse_selection(const std::string& text);
std::string format_selection(const GddSelection& s);
void validate_selection(const GddSelection& s, int m, int l, int k, std::uint64_t q);

std::vector<Subspace> desarguesian_spread(int m, int l, std::uint64_t q);
BigInt gdd_lambda(const GddSelection& s, int m, int l, int k, std::uint64_t q);
DesignInstance build_gdd(int m, int l, int k, std::uint64_t q, const GddSelection& s);

// ---- other constructions ---------------------------------------------------

DesignInstance build_pbd(int m, int k, const DesignInstance& seed, const GddSelection& s);
DesignInstance break_blocks(const DesignInstance& pbd, const std::map<int, DesignInstance>& ingredients);
DesignInstance supplementary(const DesignInstance& d);

// ---- verification -----------------------------------------------------------

struct VerifyOptions {
  bool sampled = false;
  std::uint64_t samples = 10'000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t max_witnesses = 20;
};

struct ClassCoverage {
  std::string name;                            // "all", "inside_groups", "across_groups"
  std::optional<BigInt> expected;
  std::map<std::uint64_t, std::uint64_t> histogram;  // coverage -> number of 2-subspaces
  std::uint64_t pairs = 0;
  std::optional<std::uint64_t> observed() const {
    if (histogram.size() == 1) return histogram.begin()->first;
    return std::nullopt;
  }
};

struct Witness {
  Subspace pair;
  std::string cls;
  std::uint64_t count = 0;
  BigInt expected;
};

struct GroupViolation {
  Subspace block;
  std::size_t group = 0;
  int intersection_dim = 0;
};

struct VerifyReport {
  bool pass = false;
  bool sampled = false;
  std::uint64_t samples = 0, seed = 0;
  BigInt blocks;
  bool simple = true;
  std::vector<ClassCoverage> classes;
  std::uint64_t bad_pairs = 0;
  std::vector<Witness> witnesses;
  std::uint64_t group_violation_count = 0;
  std::vector<GroupViolation> group_violations;
  std::vector<std::string> problems;  // failed checks other than coverage
};

VerifyReport verify_design(const DesignInstance& d, const VerifyOptions& opt = {});
/// verify_design restricted to gdd instances.
VerifyReport verify_gdd(const DesignInstance& d, const VerifyOptions& opt = {});
/// Coverage of every 2-subspace, indexed by Grassmannian(v, 2) rank.
std::vector<std::uint64_t> coverage_counts(const DesignInstance& d, unsigned threads = 1);

// ---- hole filling --------------------------------------------------------------

struct FillResult {
  DesignInstance design;
  VerifyReport report;
};

/// GDD on GF(q)^v with groups of dimension g, master 2-(g+n, k, q^{n(k-2)} lambda)
/// design with the n-dimensional hole `hole`; output lives on GF(q)^{v+n}
/// with the hole placed on the last n coordinates.
FillResult fill_holes(const DesignInstance& gdd, const DesignInstance& master, const Subspace& hole,
                      unsigned threads = 1);
/// Hole = span of the last n coordinates of the master space.
Subspace trailing_hole(std::uint64_t q, int dim, int n);

// ---- files -----------------------------------------------------------------

nlohmann::json design_to_json(const DesignInstance& d);
DesignInstance design_from_json(const nlohmann::json& j);
std::string design_dump(const DesignInstance& d);
DesignInstance read_design_file(const std::string& path);
void write_design_file(const std::string& path, const DesignInstance& d);
nlohmann::json report_to_json(const VerifyReport& r, const DesignInstance& d);

}  // namespace qdesign
