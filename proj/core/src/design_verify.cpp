#include <algorithm>
#include <atomic>
#include <set>
#include <unordered_map>

#include "qdesign/design.hpp"
#include "qdesign/error.hpp"
#include "qdesign/parallel.hpp"
#include "qdesign/random.hpp"

namespace qdesign {

namespace {

constexpr std::uint64_t kMaxFullPairs = std::uint64_t{1} << 28;

struct PointIndex {
  const VectorSpace& space;
  Grassmannian points;
  std::vector<std::int32_t> group_of;  // by point rank; -1 outside every group

  PointIndex(const VectorSpace& s) : space(s), points(s, 1) {}

  std::uint64_t point_rank(Row x) const {
    const Elem lead = space.get(x, space.leading(x));
    const Row y = lead == 1 ? x : space.scale(space.field().inv(lead), x);
    return points.rank(Subspace{space.dim(), {y}});
  }
  std::int32_t group(Row x) const { return group_of.empty() ? -1 : group_of[point_rank(x)]; }
};

// Maps points to groups and records partition failures.
void index_groups(PointIndex& idx, const std::vector<Subspace>& groups, std::vector<std::string>& problems) {
  const VectorSpace& space = idx.space;
  idx.group_of.assign(idx.points.size(), -1);
  std::uint64_t covered = 0;
  bool overlap = false;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const Subspace& G = groups[gi];
    if (G.ambient != space.dim() || !space.is_canonical(G)) {
      problems.push_back("group " + std::to_string(gi) + " is not a reduced basis in GF(q)^" +
                         std::to_string(space.dim()));
      continue;
    }
    for (const Subspace& p : subspaces_of(space, G, 1)) {
      auto& slot = idx.group_of[idx.points.rank(p)];
      if (slot >= 0) overlap = true;
      else ++covered;
      slot = static_cast<std::int32_t>(gi);
    }
  }
  if (overlap) problems.push_back("groups intersect nontrivially");
  if (covered != idx.points.size())
    problems.push_back("groups cover " + std::to_string(covered) + " of " + std::to_string(idx.points.size()) +
                       " points");
}

struct Expectation {
  bool grouped = false;
  std::optional<BigInt> inside, across, all;
};

Expectation expectation(const DesignInstance& d) {
  Expectation e;
  e.grouped = d.groups.has_value();
  switch (d.kind) {
    case DesignKind::gdd:
      e.inside = BigInt(0);
      e.across = d.claimed_lambda;
      break;
    case DesignKind::design:
      e.grouped = false;
      e.all = d.claimed_lambda;
      break;
    case DesignKind::pbd:
    case DesignKind::mixed:
      if (e.grouped && (d.kind == DesignKind::mixed || d.lambda_inside_groups || d.lambda_across_groups)) {
        e.inside = d.lambda_inside_groups ? d.lambda_inside_groups : d.claimed_lambda;
        e.across = d.lambda_across_groups ? d.lambda_across_groups : d.claimed_lambda;
      } else {
        e.grouped = false;
        e.all = d.claimed_lambda;
      }
      break;
  }
  return e;
}

// The 2-subspaces of GF(q)^d as coefficient pairs.
std::vector<std::pair<Row, Row>> coefficient_pairs(std::uint64_t q, int d) {
  std::vector<std::pair<Row, Row>> out;
  if (d < 2) return out;
  const VectorSpace local(q, d);
  Grassmannian(local, 2).for_each([&](std::uint64_t, const Subspace& s) { out.emplace_back(s.rows[0], s.rows[1]); });
  return out;
}

std::vector<Row> coefficient_points(std::uint64_t q, int d) {
  std::vector<Row> out;
  if (d < 1) return out;
  const VectorSpace local(q, d);
  Grassmannian(local, 1).for_each([&](std::uint64_t, const Subspace& s) { out.push_back(s.rows[0]); });
  return out;
}

Row combine(const VectorSpace& space, const VectorSpace& local, Row coeffs, const Subspace& block) {
  Row x = 0;
  for (int i = 0; i < block.dim(); ++i) {
    const Elem c = local.get(coeffs, i);
    if (c) x = space.axpy(c, block.rows[i], x);
  }
  return x;
}

// First group met in dimension >= 2, or -1.
std::int32_t bad_group(const PointIndex& idx, const VectorSpace& local, const std::vector<Row>& pts,
                       const Subspace& block) {
  std::vector<std::int32_t> seen;
  for (Row c : pts) {
    const std::int32_t g = idx.group(combine(idx.space, local, c, block));
    if (g < 0) continue;
    if (std::find(seen.begin(), seen.end(), g) != seen.end()) return g;
    seen.push_back(g);
  }
  return -1;
}

struct ClassTable {
  std::vector<ClassCoverage> classes;
  std::size_t index(bool inside) const { return classes.size() == 1 ? 0 : (inside ? 0 : 1); }
};

ClassTable make_classes(const Expectation& e) {
  ClassTable t;
  if (e.grouped) {
    t.classes.push_back({"inside_groups", e.inside, {}, 0});
    t.classes.push_back({"across_groups", e.across, {}, 0});
  } else {
    t.classes.push_back({"all", e.all, {}, 0});
  }
  return t;
}

void record(ClassCoverage& c, std::uint64_t count, const Subspace& pair, VerifyReport& rep, std::size_t max_witnesses) {
  ++c.histogram[count];
  ++c.pairs;
  if (c.expected && BigInt(count) != *c.expected) {
    ++rep.bad_pairs;
    if (rep.witnesses.size() < max_witnesses) rep.witnesses.push_back({pair, c.name, count, *c.expected});
  }
}

void finish(VerifyReport& rep, std::size_t max_witnesses, std::vector<GroupViolation> violations) {
  std::sort(violations.begin(), violations.end(), [](const GroupViolation& a, const GroupViolation& b) {
    return std::tie(a.block, a.group) < std::tie(b.block, b.group);
  });
  violations.erase(std::unique(violations.begin(), violations.end(),
                               [](const GroupViolation& a, const GroupViolation& b) {
                                 return a.block == b.block && a.group == b.group;
                               }),
                   violations.end());
  rep.group_violation_count = violations.size();
  if (violations.size() > max_witnesses) violations.resize(max_witnesses);
  rep.group_violations = std::move(violations);
  bool coverage_ok = rep.bad_pairs == 0;
  for (const auto& c : rep.classes) {
    if (c.expected) continue;
    // Without a claim a class passes only when coverage is uniform and positive.
    const auto obs = c.observed();
    if (c.pairs > 0 && (!obs || *obs == 0)) coverage_ok = false;
  }
  rep.pass = coverage_ok && rep.problems.empty() && rep.group_violation_count == 0;
}

void check_header(const DesignInstance& d, VerifyReport& rep) {
  if (d.kind == DesignKind::gdd && !d.groups) rep.problems.push_back("gdd instance without groups");
  const std::set<int> K(d.K.begin(), d.K.end());
  if (!d.is_implicit()) {
    for (const auto& b : d.explicit_blocks()) {
      if (b.basis.ambient != d.v) {
        rep.problems.push_back("block outside GF(q)^" + std::to_string(d.v));
        break;
      }
      if (!K.count(b.basis.dim())) {
        rep.problems.push_back("block of dimension " + std::to_string(b.basis.dim()) + " not in K");
        break;
      }
    }
  } else {
    const auto& ib = d.implicit();
    if (ib.m * ib.l != d.v) rep.problems.push_back("implicit structure m*l differs from v");
    for (const auto& il : ib.labels)
      if (!K.count(il.dim)) {
        rep.problems.push_back("orbit of dimension " + std::to_string(il.dim) + " not in K");
        break;
      }
    if (ib.omega_kk && !K.count(ib.k)) rep.problems.push_back("(k,k) orbit dimension not in K");
  }
}

VerifyReport verify_full(const DesignInstance& d, const VerifyOptions& opt) {
  VerifyReport rep;
  rep.blocks = block_count(d);
  rep.simple = is_simple(d);
  check_header(d, rep);
  const VectorSpace space(d.q, d.v);
  const Grassmannian lines(space, 2);
  if (lines.size() > kMaxFullPairs)
    throw BudgetError("full verification would track " + std::to_string(lines.size()) +
                      " 2-subspaces; use sampled mode");
  const Expectation e = expectation(d);
  PointIndex idx(space);
  if (d.groups) index_groups(idx, *d.groups, rep.problems);

  const std::vector<BlockSet> sets = expand_blocks(d);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> flat;
  for (std::uint32_t s = 0; s < sets.size(); ++s)
    for (std::uint32_t i = 0; i < sets[s].ranks.size(); ++i) flat.emplace_back(s, i);

  std::map<int, std::vector<std::pair<Row, Row>>> pairs;
  std::map<int, std::vector<Row>> pts;
  std::map<int, std::unique_ptr<Grassmannian>> grass;
  for (const auto& bs : sets)
    if (!grass.count(bs.dim)) {
      pairs[bs.dim] = coefficient_pairs(d.q, bs.dim);
      pts[bs.dim] = coefficient_points(d.q, bs.dim);
      grass[bs.dim] = std::make_unique<Grassmannian>(space, bs.dim);
    }

  std::vector<std::uint64_t> counts(lines.size(), 0);
  const bool check_groups = d.groups && e.grouped && d.kind == DesignKind::gdd;
  const unsigned workers = worker_count(flat.size(), opt.threads);
  std::vector<std::vector<GroupViolation>> viol(workers);
  parallel_for(flat.size(), workers, [&](std::size_t begin, std::size_t end, unsigned w) {
    for (std::size_t f = begin; f < end; ++f) {
      const BlockSet& bs = sets[flat[f].first];
      const Subspace block = grass.at(bs.dim)->unrank(bs.ranks[flat[f].second]);
      const VectorSpace local(space.field_ptr(), bs.dim);
      for (const auto& [c1, c2] : pairs.at(bs.dim)) {
        const Row rows[2] = {combine(space, local, c1, block), combine(space, local, c2, block)};
        const std::uint64_t r = lines.rank(space.canonicalize(rows));
        std::atomic_ref<std::uint64_t>(counts[r]).fetch_add(bs.multiplicity, std::memory_order_relaxed);
      }
      if (check_groups) {
        const std::int32_t g = bad_group(idx, local, pts.at(bs.dim), block);
        if (g >= 0)
          viol[w].push_back({block, static_cast<std::size_t>(g), space.intersection_dim(block, (*d.groups)[g])});
      }
    }
  });

  ClassTable table = make_classes(e);
  lines.for_each([&](std::uint64_t r, const Subspace& pair) {
    bool inside = false;
    if (e.grouped) {
      const std::int32_t g = idx.group(pair.rows[0]);
      inside = g >= 0 && g == idx.group(pair.rows[1]);
    }
    record(table.classes[table.index(inside)], counts[r], pair, rep, opt.max_witnesses);
  });
  rep.classes = std::move(table.classes);
  std::vector<GroupViolation> all;
  for (auto& v : viol) all.insert(all.end(), v.begin(), v.end());
  finish(rep, opt.max_witnesses, std::move(all));
  return rep;
}

VerifyReport verify_sampled(const DesignInstance& d, const VerifyOptions& opt) {
  VerifyReport rep;
  rep.sampled = true;
  rep.samples = opt.samples;
  rep.seed = opt.seed;
  rep.blocks = block_count(d);
  rep.simple = is_simple(d);
  check_header(d, rep);
  const VectorSpace space(d.q, d.v);
  const Expectation e = expectation(d);
  PointIndex idx(space);
  if (d.groups) {
    if (idx.points.size() > kMaxFullPairs) throw BudgetError("too many points to index the groups");
    index_groups(idx, *d.groups, rep.problems);
  }
  const bool gdd = d.kind == DesignKind::gdd;

  // Draw the sample; a gdd is only sampled on pairs across groups.
  Rng rng(opt.seed);
  const std::uint64_t vectors = static_cast<std::uint64_t>(ipow(d.q, static_cast<unsigned>(d.v)));
  const auto draw = [&] {
    for (;;) {
      Row x = 0;
      std::uint64_t n = uniform_below(rng, vectors);
      for (int c = d.v - 1; c >= 0; --c, n /= d.q) x = space.set(x, c, static_cast<Elem>(n % d.q));
      if (x) return x;
    }
  };
  std::vector<Subspace> sample;
  std::vector<char> inside;
  while (sample.size() < opt.samples) {
    const Row rows[2] = {draw(), draw()};
    const Subspace p = space.canonicalize(rows);
    if (p.dim() != 2) continue;
    bool in = false;
    if (e.grouped) {
      const std::int32_t g = idx.group(p.rows[0]);
      in = g >= 0 && g == idx.group(p.rows[1]);
    }
    if (gdd && in) continue;
    sample.push_back(p);
    inside.push_back(in);
  }

  std::vector<std::uint64_t> counts(sample.size(), 0);
  const unsigned workers = worker_count(sample.size(), opt.threads);
  std::vector<std::vector<GroupViolation>> viol(workers);
  const bool check_groups = d.groups && gdd;

  const auto group_check = [&](const Subspace& block, std::vector<GroupViolation>& out) {
    if (!check_groups) return;
    const VectorSpace local(space.field_ptr(), block.dim());
    const std::int32_t g = bad_group(idx, local, coefficient_points(d.q, block.dim()), block);
    if (g >= 0) out.push_back({block, static_cast<std::size_t>(g), space.intersection_dim(block, (*d.groups)[g])});
  };

  if (d.is_implicit()) {
    const ImplicitBlocks& ib = d.implicit();
    const auto atlas = atlas_for(d.q, ib.m, ib.l);
    std::unordered_map<std::uint64_t, std::uint64_t> mult;
    std::set<int> dims;
    for (const auto& il : ib.labels) {
      mult[to_orbit_label(*atlas, il).key()] += il.multiplicity;
      dims.insert(il.dim);
    }
    if (ib.omega_kk) {
      mult[OrbitLabel{{ib.k, ib.k}, 0, 0}.key()] += 1;
      dims.insert(ib.k);
    }
    for (int k : dims) atlas->h_table(k);
    parallel_for(sample.size(), workers, [&](std::size_t begin, std::size_t end, unsigned w) {
      for (std::size_t i = begin; i < end; ++i)
        for (int k : dims)
          SuperspaceRange(space, sample[i], k).for_each([&](std::uint64_t, const Subspace& s) {
            const auto label = atlas->try_label(s);
            if (!label) return;
            const auto it = mult.find(label->key());
            if (it == mult.end()) return;
            counts[i] += it->second;
            group_check(s, viol[w]);
          });
    });
  } else {
    const auto& blocks = d.explicit_blocks();
    parallel_for(sample.size(), workers, [&](std::size_t begin, std::size_t end, unsigned w) {
      for (std::size_t i = begin; i < end; ++i)
        for (const auto& b : blocks)
          if (space.contains(b.basis, sample[i].rows[0]) && space.contains(b.basis, sample[i].rows[1])) {
            counts[i] += b.multiplicity;
            group_check(b.basis, viol[w]);
          }
    });
  }

  ClassTable table = make_classes(e);
  for (std::size_t i = 0; i < sample.size(); ++i)
    record(table.classes[table.index(inside[i])], counts[i], sample[i], rep, opt.max_witnesses);
  rep.classes = std::move(table.classes);
  std::vector<GroupViolation> all;
  for (auto& v : viol) all.insert(all.end(), v.begin(), v.end());
  finish(rep, opt.max_witnesses, std::move(all));
  return rep;
}

}  // namespace

VerifyReport verify_design(const DesignInstance& d, const VerifyOptions& opt) {
  return opt.sampled ? verify_sampled(d, opt) : verify_full(d, opt);
}

VerifyReport verify_gdd(const DesignInstance& d, const VerifyOptions& opt) {
  require(d.kind == DesignKind::gdd, "verify_gdd needs a gdd instance");
  return verify_design(d, opt);
}

std::vector<std::uint64_t> coverage_counts(const DesignInstance& d, unsigned threads) {
  const VectorSpace space(d.q, d.v);
  const Grassmannian lines(space, 2);
  if (lines.size() > kMaxFullPairs) throw BudgetError("too many 2-subspaces for a coverage table");
  std::vector<std::uint64_t> counts(lines.size(), 0);
  const std::vector<BlockSet> sets = expand_blocks(d);
  for (const auto& bs : sets) {
    const Grassmannian g(space, bs.dim);
    const VectorSpace local(space.field_ptr(), bs.dim);
    const auto pairs = coefficient_pairs(d.q, bs.dim);
    parallel_for(bs.ranks.size(), worker_count(bs.ranks.size(), threads),
                 [&](std::size_t begin, std::size_t end, unsigned) {
                   for (std::size_t i = begin; i < end; ++i) {
                     const Subspace block = g.unrank(bs.ranks[i]);
                     for (const auto& [c1, c2] : pairs) {
                       const Row rows[2] = {combine(space, local, c1, block), combine(space, local, c2, block)};
                       std::atomic_ref<std::uint64_t>(counts[lines.rank(space.canonicalize(rows))])
                           .fetch_add(bs.multiplicity, std::memory_order_relaxed);
                     }
                   }
                 });
  }
  return counts;
}

}  // namespace qdesign
