#include "qdesign/design.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <regex>
#include <set>
#include <tuple>

#include "qdesign/error.hpp"
#include "qdesign/linear_group.hpp"

namespace qdesign {

namespace {

BigInt qp(std::uint64_t q, int e) { return ipow(q, static_cast<unsigned>(e)); }

std::uint64_t q_to_u64(std::uint64_t q, int e) {
  const auto x = to_u64(qp(q, e));
  require(x.has_value(), "q^e overflows");
  return *x;
}

}  // namespace

std::string to_string(DesignKind kind) {
  switch (kind) {
    case DesignKind::gdd: return "gdd";
    case DesignKind::design: return "design";
    case DesignKind::pbd: return "pbd";
    case DesignKind::mixed: return "mixed";
  }
  return "design";
}

DesignKind parse_design_kind(const std::string& text) {
  if (text == "gdd") return DesignKind::gdd;
  if (text == "design") return DesignKind::design;
  if (text == "pbd") return DesignKind::pbd;
  if (text == "mixed") return DesignKind::mixed;
  throw FormatError("unknown design kind '" + text + "'");
}

std::shared_ptr<const OrbitAtlas> atlas_for(std::uint64_t q, int m, int l) {
  static std::mutex mutex;
  static std::map<std::tuple<std::uint64_t, int, int>, std::shared_ptr<const OrbitAtlas>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{q, m, l}];
  if (!slot) {
    const auto pp = prime_power(q);
    require(pp.has_value(), std::to_string(q) + " is not a prime power");
    slot = std::make_shared<const OrbitAtlas>(FieldTower::build(pp->first, pp->second, l, m));
  }
  return slot;
}

OrbitLabel to_orbit_label(const OrbitAtlas& atlas, const ImplicitLabel& label) {
  const FieldTower& t = atlas.tower();
  require(label.multiplicity >= 1, "label multiplicity must be positive");
  require(label.rep.ambient == t.l(), "label representative must live in GF(q)^" + std::to_string(t.l()));
  require(t.line_space().is_canonical(label.rep), "label representative is not in reduced echelon form");
  const int h_dim = label.r == 0 ? label.dim : label.r + 1;
  require(label.rep.dim() == h_dim, "label representative has dimension " + std::to_string(label.rep.dim()) +
                                        ", expected " + std::to_string(h_dim));
  if (label.r != 0)
    require(label.dim >= 3 && label.r <= label.dim - 1, "label r must satisfy 1 <= r <= dim-1 with dim >= 3");
  else
    require(label.dim >= 1 && label.dim <= t.l(), "spread-class label dimension out of range");
  const SingerOrbitTable& table = atlas.h_table(h_dim);
  const auto idx = static_cast<std::uint32_t>(table.orbit_index(label.rep));
  const HOrbit& orbit = table.orbits()[idx];
  require(orbit.rep == label.rep, "label representative is not the least member of its H-orbit");
  require(orbit.u == label.u, "label u = " + std::to_string(label.u) + " but the H-orbit has u = " +
                                  std::to_string(orbit.u));
  if (label.r == 0) return OrbitLabel{{label.dim, 1}, 0, idx};
  return atlas.t_label(label.dim, label.r, idx);
}

ImplicitLabel to_implicit_label(const OrbitAtlas& atlas, const OrbitLabel& label, std::uint64_t multiplicity) {
  require(!label.full_class(), "class (k,k) is stored as the omega_kk flag");
  ImplicitLabel out;
  out.r = label.spread_class() ? 0 : label.r;
  out.u = atlas.label_u(label);
  out.dim = label.omega.i;
  out.rep = atlas.label_rep(label);
  out.multiplicity = multiplicity;
  return out;
}

std::vector<BlockSet> expand_blocks(const DesignInstance& d) {
  std::vector<BlockSet> out;
  const VectorSpace space(d.q, d.v);
  std::map<int, std::unique_ptr<Grassmannian>> grass;
  const auto grassmannian = [&](int dim) -> const Grassmannian& {
    auto& g = grass[dim];
    if (!g) g = std::make_unique<Grassmannian>(space, dim);
    return *g;
  };
  if (!d.is_implicit()) {
    for (const ExplicitBlock& b : d.explicit_blocks())
      out.push_back({b.basis.dim(), {grassmannian(b.basis.dim()).rank(b.basis)}, b.multiplicity});
    return out;
  }
  const ImplicitBlocks& ib = d.implicit();
  const auto atlas = atlas_for(d.q, ib.m, ib.l);
  const LinearGroup group(atlas->tower());
  const auto expand = [&](const OrbitLabel& label, std::uint64_t mult) {
    const Subspace rep = atlas->realize(label);
    BlockSet bs{label.omega.i, group.orbit_ranks(rep, grassmannian(label.omega.i)), mult};
    ensure(BigInt(bs.ranks.size()) == atlas->orbit_size(label),
           "expanded orbit size differs from the orbit-stabilizer count for " + atlas->describe(label));
    out.push_back(std::move(bs));
  };
  for (const ImplicitLabel& il : ib.labels) expand(to_orbit_label(*atlas, il), il.multiplicity);
  if (ib.omega_kk) expand(OrbitLabel{{ib.k, ib.k}, 0, 0}, 1);
  return out;
}

BigInt block_count(const DesignInstance& d) {
  BigInt n = 0;
  if (!d.is_implicit()) {
    for (const auto& b : d.explicit_blocks()) n += b.multiplicity;
    return n;
  }
  const ImplicitBlocks& ib = d.implicit();
  const auto atlas = atlas_for(d.q, ib.m, ib.l);
  for (const auto& il : ib.labels) n += atlas->orbit_size(to_orbit_label(*atlas, il)) * il.multiplicity;
  if (ib.omega_kk) n += atlas->orbit_size(OrbitLabel{{ib.k, ib.k}, 0, 0});
  return n;
}

bool is_simple(const DesignInstance& d) {
  if (!d.is_implicit()) {
    std::set<Subspace> seen;
    for (const auto& b : d.explicit_blocks())
      if (b.multiplicity != 1 || !seen.insert(b.basis).second) return false;
    return true;
  }
  const ImplicitBlocks& ib = d.implicit();
  std::set<std::tuple<int, int, Subspace>> seen;
  for (const auto& il : ib.labels)
    if (il.multiplicity != 1 || !seen.insert({il.dim, il.r, il.rep}).second) return false;
  return true;
}

// ---- selections --------------------------------------------------------------

GddSelection parse_selection(const std::string& text) {
  static const std::regex whole(R"(^\s*\d+\s*,\s*\d+\s*=\s*\d+\s*([,;]\s*\d+\s*,\s*\d+\s*=\s*\d+\s*)*$)");
  static const std::regex item(R"((\d+)\s*,\s*(\d+)\s*=\s*(\d+))");
  require(std::regex_match(text, whole), "selection '" + text + "' is not of the form r,u=w[,r,u=w...]");
  GddSelection s;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), item); it != std::sregex_iterator(); ++it) {
    const int r = std::stoi((*it)[1]), u = std::stoi((*it)[2]);
    const std::uint64_t w = std::stoull((*it)[3]);
    require(!s.w.count({r, u}), "selection repeats (r,u) = (" + std::to_string(r) + "," + std::to_string(u) + ")");
    s.w[{r, u}] = w;
  }
  return s;
}

std::string format_selection(const GddSelection& s) {
  std::string out;
  for (const auto& [ru, w] : s.w) {
    if (!out.empty()) out += ',';
    out += std::to_string(ru.first) + "," + std::to_string(ru.second) + "=" + std::to_string(w);
  }
  return out;
}

void validate_selection(const GddSelection& s, int m, int l, int k, std::uint64_t q) {
  require(m >= 1 && l >= 1, "m and l must be positive");
  require(k >= 3 && k <= std::min(m + 1, l), "GDD construction requires 3 <= k <= min(m+1, l)");
  for (const auto& [ru, w] : s.w) {
    const auto [r, u] = ru;
    const std::string tag = "w_{" + std::to_string(r) + "," + std::to_string(u) + "}";
    require(r != 1, tag + ": r = 1 orbits meet the groups in dimension 2 and cannot be selected");
    require(r >= 2 && r <= k - 1, tag + ": r must lie in [2, k-1]");
    require(u >= 1 && std::gcd(r + 1, l) % u == 0, tag + ": u must divide gcd(r+1, l)");
    const BigInt bound = n_d_u_v(r + 1, u, l, q);
    require(BigInt(w) <= bound, tag + " = " + std::to_string(w) + " exceeds n_{" + std::to_string(r + 1) + "," +
                                    std::to_string(u) + "}^" + std::to_string(l) + " = " + to_string(bound));
  }
  require(!s.omega_kk || k <= m, "w = 1 needs the (k,k) orbit, which exists only for k <= m");
  for (const auto& [ru, picks] : s.picks) {
    const auto it = s.w.find(ru);
    require(it != s.w.end() && it->second == picks.size(), "explicit picks must list exactly w_{r,u} orbits");
  }
}

std::vector<Subspace> desarguesian_spread(int m, int l, std::uint64_t q) {
  const auto atlas = atlas_for(q, m, l);
  const FieldTower& t = atlas->tower();
  const ExtensionField& f = t.middle();
  std::vector<Subspace> out;
  for (int p = 0; p < m; ++p) {
    const std::uint64_t tails = q_to_u64(f.order(), m - 1 - p);
    for (std::uint64_t idx = 0; idx < tails; ++idx) {
      Row y = t.place(f.one(), p);
      std::uint64_t rest = idx;
      for (int j = m - 1; j > p; --j, rest /= f.order()) y |= t.place(f.word_at(rest % f.order()), j);
      std::vector<Row> rows;
      for (int i = 0; i < l; ++i) rows.push_back(t.scale_middle(t.line_space().unit(i), y));
      out.push_back(t.space().canonicalize(rows));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BigInt gdd_lambda(const GddSelection& s, int m, int l, int k, std::uint64_t q) {
  validate_selection(s, m, l, k, q);
  const BigInt qk = qp(q, k), qml = qp(q, m * l);
  BigInt tail = 1;
  for (int j = 2; j <= k - 2; ++j) tail *= qml - qp(q, j * l);
  BigInt lambda = 0;
  for (const auto& [ru, w] : s.w) {
    const auto [r, u] = ru;
    BigInt den = qp(q, u) - 1;
    for (int j = r + 1; j <= k - 1; ++j) den *= qk - qp(q, j);
    lambda += w * exact_div((qk - 1) * (qk - q) * tail, den, "gdd_lambda term");
  }
  if (s.omega_kk) {
    BigInt num = qp(q, (l - 1) * (k * (k - 1) / 2 - 1)), den = 1;
    for (int j = 2; j <= k - 1; ++j) {
      num *= qp(q, (m - j) * l) - 1;
      den *= qp(q, k - j) - 1;
    }
    lambda += exact_div(num, den, "gdd_lambda (k,k) term");
  }
  return lambda;
}

DesignInstance build_gdd(int m, int l, int k, std::uint64_t q, const GddSelection& s) {
  validate_selection(s, m, l, k, q);
  const auto atlas = atlas_for(q, m, l);
  ImplicitBlocks ib{m, l, k, {}, s.omega_kk};
  for (const auto& [ru, w] : s.w) {
    const auto [r, u] = ru;
    const auto& orbits = atlas->h_table(r + 1).orbits();
    std::vector<std::uint32_t> chosen;
    if (auto it = s.picks.find(ru); it != s.picks.end()) {
      chosen = it->second;
      std::set<std::uint32_t> distinct(chosen.begin(), chosen.end());
      require(distinct.size() == chosen.size(), "explicit picks must be distinct orbits");
      for (auto o : chosen)
        require(o < orbits.size() && orbits[o].u == u, "picked orbit " + std::to_string(o) + " does not have u = " +
                                                           std::to_string(u));
    } else {
      for (std::uint32_t o = 0; o < orbits.size() && chosen.size() < w; ++o)
        if (orbits[o].u == u) chosen.push_back(o);
    }
    ensure(chosen.size() == w, "fewer H-orbits than n_{r+1,u}^l promises");
    for (auto o : chosen) ib.labels.push_back(to_implicit_label(*atlas, atlas->t_label(k, r, o)));
  }
  DesignInstance d;
  d.q = q;
  d.v = m * l;
  d.kind = DesignKind::gdd;
  d.K = {k};
  d.claimed_lambda = gdd_lambda(s, m, l, k, q);
  d.groups = desarguesian_spread(m, l, q);
  d.blocks = std::move(ib);
  return d;
}

// ---- PBD -----------------------------------------------------------------------

namespace {

BigInt observed_lambda(const DesignInstance& d, const std::string& what) {
  const VerifyReport rep = verify_design(d);
  require(rep.classes.size() == 1 && rep.classes[0].observed().has_value(),
          what + " is not a 2-design (coverage is not uniform)");
  const BigInt lambda = *rep.classes[0].observed();
  if (d.claimed_lambda)
    require(*d.claimed_lambda == lambda, what + " claims lambda = " + to_string(*d.claimed_lambda) +
                                             " but covers pairs " + to_string(lambda) + " times");
  return lambda;
}

}  // namespace

DesignInstance build_pbd(int m, int k, const DesignInstance& seed, const GddSelection& s) {
  require(seed.kind == DesignKind::design || seed.kind == DesignKind::pbd, "seed must be a design or pbd");
  require(!seed.is_implicit(), "seed blocks must be explicit");
  const int l = seed.v;
  const std::uint64_t q = seed.q;
  DesignInstance gdd = build_gdd(m, l, k, q, s);
  DesignInstance seed_plain = seed;
  seed_plain.groups.reset();
  seed_plain.kind = DesignKind::design;
  seed_plain.claimed_lambda = seed.claimed_lambda;
  const BigInt seed_lambda = observed_lambda(seed_plain, "seed");

  const auto atlas = atlas_for(q, m, l);
  struct OrbitTally {
    std::uint64_t members = 0;
    std::set<std::uint64_t> multiplicities;
  };
  std::map<std::pair<int, std::uint32_t>, OrbitTally> tally;
  std::set<Subspace> seen;
  for (const auto& b : seed.explicit_blocks()) {
    require(seen.insert(b.basis).second, "seed lists a block twice; use multiplicities");
    require(b.basis.dim() >= 1, "seed blocks must be nonzero");
    const auto idx = static_cast<std::uint32_t>(atlas->h_table(b.basis.dim()).orbit_index(b.basis));
    auto& t = tally[{b.basis.dim(), idx}];
    ++t.members;
    t.multiplicities.insert(b.multiplicity);
  }
  ImplicitBlocks ib = gdd.implicit();
  for (const auto& [key, t] : tally) {
    const HOrbit& orbit = atlas->h_table(key.first).orbits()[key.second];
    require(t.members == orbit.length && t.multiplicities.size() == 1,
            "seed is not H-invariant: the H-orbit of " + format_subspace(atlas->tower().line_space(), orbit.rep) +
                " has " + std::to_string(t.members) + " of " + std::to_string(orbit.length) +
                " members with uniform multiplicity");
    ib.labels.push_back(to_implicit_label(*atlas, OrbitLabel{{key.first, 1}, 0, key.second}, *t.multiplicities.begin()));
  }
  DesignInstance out;
  out.q = q;
  out.v = m * l;
  std::set<int> dims(seed.K.begin(), seed.K.end());
  dims.insert(k);
  out.K.assign(dims.begin(), dims.end());
  out.lambda_inside_groups = seed_lambda;
  out.lambda_across_groups = *gdd.claimed_lambda;
  if (seed_lambda == *gdd.claimed_lambda) {
    out.kind = DesignKind::pbd;
    out.claimed_lambda = seed_lambda;
  } else {
    out.kind = DesignKind::mixed;
  }
  out.groups = gdd.groups;
  out.blocks = std::move(ib);
  return out;
}

// ---- block breaking ---------------------------------------------------------------

namespace {

Subspace transplant(const VectorSpace& space, const VectorSpace& local, const Subspace& block, const Subspace& c) {
  std::vector<Row> rows;
  for (Row cr : c.rows) {
    Row x = 0;
    for (int i = 0; i < block.dim(); ++i) {
      const Elem a = local.get(cr, i);
      if (a) x = space.add(x, space.scale(a, block.rows[i]));
    }
    rows.push_back(x);
  }
  return space.canonicalize(rows);
}

DesignInstance explicit_design(std::uint64_t q, int v, const std::map<Subspace, std::uint64_t>& blocks) {
  DesignInstance d;
  d.q = q;
  d.v = v;
  d.kind = DesignKind::design;
  std::set<int> dims;
  std::vector<ExplicitBlock> list;
  for (const auto& [s, mult] : blocks) {
    list.push_back({s, mult});
    dims.insert(s.dim());
  }
  d.K.assign(dims.begin(), dims.end());
  d.blocks = std::move(list);
  return d;
}

}  // namespace

DesignInstance break_blocks(const DesignInstance& pbd, const std::map<int, DesignInstance>& ingredients) {
  require(pbd.claimed_lambda.has_value(), "block breaking needs a pbd with a claimed lambda");
  require(pbd.kind == DesignKind::pbd || pbd.kind == DesignKind::design, "block breaking needs a pbd or design");
  std::optional<BigInt> mu;
  std::optional<int> k;
  std::map<int, std::vector<BlockSet>> ingredient_blocks;
  for (const auto& [u, ing] : ingredients) {
    const std::string tag = "ingredient for u = " + std::to_string(u);
    require(ing.v == u, tag + " lives in dimension " + std::to_string(ing.v));
    require(ing.q == pbd.q, tag + " is over a different field");
    require(ing.K.size() == 1, tag + " must have a single block dimension");
    require(ing.K[0] <= u, tag + " has block dimension above u");
    DesignInstance plain = ing;
    plain.kind = DesignKind::design;
    plain.groups.reset();
    const BigInt lambda = observed_lambda(plain, tag);
    require(!mu || *mu == lambda, "ingredients disagree on mu");
    require(!k || *k == ing.K[0], "ingredients disagree on the block dimension");
    mu = lambda;
    k = ing.K[0];
    ingredient_blocks[u] = expand_blocks(ing);
  }
  require(mu.has_value(), "no ingredients supplied");
  const VectorSpace space(pbd.q, pbd.v);
  std::map<Subspace, std::uint64_t> out;
  for (const BlockSet& bs : expand_blocks(pbd)) {
    const auto it = ingredient_blocks.find(bs.dim);
    require(it != ingredient_blocks.end(), "no ingredient for blocks of dimension " + std::to_string(bs.dim));
    const VectorSpace local(pbd.q, bs.dim);
    const Grassmannian g(space, bs.dim);
    std::vector<std::pair<Subspace, std::uint64_t>> ing;
    for (const BlockSet& c : it->second) {
      const Grassmannian gl(local, c.dim);
      for (auto r : c.ranks) ing.emplace_back(gl.unrank(r), c.multiplicity);
    }
    for (auto rank : bs.ranks) {
      const Subspace block = g.unrank(rank);
      for (const auto& [c, mult] : ing) out[transplant(space, local, block, c)] += bs.multiplicity * mult;
    }
  }
  DesignInstance d = explicit_design(pbd.q, pbd.v, out);
  d.K = {*k};
  d.claimed_lambda = *pbd.claimed_lambda * *mu;
  return d;
}

// ---- supplementary ------------------------------------------------------------------

DesignInstance supplementary(const DesignInstance& d) {
  require(is_simple(d), "supplementary design needs a simple design");
  const VectorSpace space(d.q, d.v);
  std::set<std::pair<int, std::uint64_t>> present;
  for (const BlockSet& bs : expand_blocks(d))
    for (auto r : bs.ranks) present.insert({bs.dim, r});
  std::vector<ExplicitBlock> blocks;
  BigInt total = 0;
  for (int k : d.K) {
    const Grassmannian g(space, k);
    g.for_each([&](std::uint64_t i, const Subspace& s) {
      if (!present.count({k, i})) blocks.push_back({s, 1});
    });
    total += gaussian_binomial(d.v - 2, k - 2, d.q);
  }
  DesignInstance out;
  out.q = d.q;
  out.v = d.v;
  out.K = d.K;
  out.kind = d.K.size() > 1 ? DesignKind::pbd : DesignKind::design;
  if (d.claimed_lambda && (d.kind == DesignKind::design || d.kind == DesignKind::pbd))
    out.claimed_lambda = total - *d.claimed_lambda;
  out.blocks = std::move(blocks);
  return out;
}

// ---- hole filling --------------------------------------------------------------------

Subspace trailing_hole(std::uint64_t q, int dim, int n) {
  require(n >= 0 && n <= dim, "hole dimension out of range");
  const VectorSpace space(q, dim);
  Subspace h{dim, {}};
  for (int c = dim - n; c < dim; ++c) h.rows.push_back(space.unit(c));
  return h;
}

FillResult fill_holes(const DesignInstance& gdd, const DesignInstance& master, const Subspace& hole, unsigned threads) {
  require(gdd.kind == DesignKind::gdd && gdd.groups.has_value(), "first input must be a gdd with groups");
  require(gdd.claimed_lambda.has_value(), "gdd must claim its lambda");
  require(gdd.K.size() == 1 && master.K.size() == 1 && gdd.K[0] == master.K[0],
          "gdd and master must share a single block dimension");
  require(gdd.q == master.q, "gdd and master are over different fields");
  const std::uint64_t q = gdd.q;
  const int k = gdd.K[0];
  const int n = hole.dim();
  const auto& groups = *gdd.groups;
  require(!groups.empty(), "gdd has no groups");
  const int g = groups.front().dim();
  for (const auto& G : groups) require(G.dim() == g, "gdd groups must share one dimension");
  require(master.v == g + n, "master must live in dimension group_dim + n = " + std::to_string(g + n));
  require(hole.ambient == master.v, "hole is not a subspace of the master space");
  const VectorSpace mspace(q, master.v);
  require(mspace.is_canonical(hole), "hole basis is not in reduced echelon form");

  const BigInt target = qp(q, n * (k - 2)) * *gdd.claimed_lambda;
  DesignInstance master_plain = master;
  master_plain.kind = DesignKind::design;
  master_plain.groups.reset();
  const BigInt master_lambda = observed_lambda(master_plain, "master");
  require(master_lambda == target, "master lambda " + to_string(master_lambda) + " differs from q^{n(k-2)} * lambda = " +
                                       to_string(target));

  // Blocks of the master, split by whether they lie in the hole.
  std::vector<std::pair<Subspace, std::uint64_t>> outside, inside;
  for (const BlockSet& bs : expand_blocks(master)) {
    const Grassmannian gm(mspace, bs.dim);
    for (auto r : bs.ranks) {
      Subspace b = gm.unrank(r);
      (mspace.is_subspace_of(b, hole) ? inside : outside).emplace_back(std::move(b), bs.multiplicity);
    }
  }
  if (n >= 2) {
    // (U, D_U) must be a 2-(n, k, target) design in hole coordinates.
    const VectorSpace hs(q, n);
    std::vector<ExplicitBlock> local;
    for (const auto& [b, mult] : inside) {
      std::vector<Row> rows;
      for (Row x : b.rows) {
        Row y = 0;
        Row rest = x;
        for (int j = 0; j < n; ++j) {
          const Elem c = mspace.get(rest, mspace.leading(hole.rows[j]));
          if (c) {
            y = hs.set(y, j, c);
            rest = mspace.sub(rest, mspace.scale(c, hole.rows[j]));
          }
        }
        ensure(rest == 0, "block inside the hole has a component outside it");
        rows.push_back(y);
      }
      local.push_back({hs.canonicalize(rows), mult});
    }
    std::map<Subspace, std::uint64_t> merged;
    for (auto& b : local) merged[b.basis] += b.multiplicity;
    DesignInstance du = explicit_design(q, n, merged);
    du.K = {k};
    const VerifyReport rep = verify_design(du);
    require(rep.classes.size() == 1 && rep.classes[0].observed() == std::optional<std::uint64_t>(
                                                                        static_cast<std::uint64_t>(target)),
            "master restricted to the hole is not a 2-(" + std::to_string(n) + "," + std::to_string(k) + "," +
                to_string(target) + ") design");
  }

  const int V = gdd.v + n;
  const VectorSpace out_space(q, V);
  const VectorSpace gspace(q, gdd.v);
  const int bits = out_space.bits();
  std::map<Subspace, std::uint64_t> out;

  // Every GDD block lifted along each linear map into the hole.
  const std::uint64_t lifts_per_row = q_to_u64(q, n);
  for (const BlockSet& bs : expand_blocks(gdd)) {
    const Grassmannian gg(gspace, bs.dim);
    const std::uint64_t lifts = q_to_u64(q, n * bs.dim);
    for (auto r : bs.ranks) {
      const Subspace b = gg.unrank(r);
      for (std::uint64_t phi = 0; phi < lifts; ++phi) {
        Subspace lifted{V, {}};
        std::uint64_t rest = phi;
        for (Row x : b.rows) {
          const std::uint64_t tail = rest % lifts_per_row;
          rest /= lifts_per_row;
          Row t = 0;
          std::uint64_t digits = tail;
          for (int j = n - 1; j >= 0; --j, digits /= q) t |= static_cast<Row>(digits % q) << (bits * (n - 1 - j));
          lifted.rows.push_back((x << (bits * n)) | t);
        }
        out[lifted] += bs.multiplicity;
      }
    }
  }

  // Change of basis of the master space: complement vectors then hole basis.
  std::vector<Row> basis;
  {
    Subspace acc = hole;
    for (int c = 0; c < master.v && static_cast<int>(basis.size()) < g; ++c) {
      const Row e = mspace.unit(c);
      if (mspace.contains(acc, e)) continue;
      basis.push_back(e);
      acc = mspace.sum(acc, Subspace{master.v, {e}});
    }
    ensure(static_cast<int>(basis.size()) == g, "hole complement has the wrong dimension");
    basis.insert(basis.end(), hole.rows.begin(), hole.rows.end());
  }
  // coords[t] = coordinates of unit vector e_t in `basis`.
  std::vector<std::vector<Elem>> coords(master.v, std::vector<Elem>(master.v, 0));
  {
    const int mv = master.v;
    require(2 * mv * mspace.bits() <= 64, "master space too large for the change of basis");
    const VectorSpace aug(mspace.field_ptr(), 2 * mv);
    std::vector<Row> rows;
    for (int j = 0; j < mv; ++j) rows.push_back((basis[j] << (mv * mspace.bits())) | mspace.unit(j));
    const Subspace red = aug.canonicalize(rows);
    ensure(red.dim() == mv, "change of basis is singular");
    // red row t reads [e_t | c] with e_t = sum_j c_j basis_j
    for (int t = 0; t < mv; ++t)
      for (int j = 0; j < mv; ++j) coords[t][j] = aug.get(red.rows[t], mv + j);
  }
  const auto map_into = [&](const Subspace& G, const Subspace& b) {
    std::vector<Row> rows;
    for (Row x : b.rows) {
      Row y = 0;
      for (int t = 0; t < master.v; ++t) {
        const Elem xt = mspace.get(x, t);
        if (!xt) continue;
        for (int j = 0; j < master.v; ++j) {
          const Elem c = mspace.field().mul(xt, coords[t][j]);
          if (!c) continue;
          const Row image = j < g ? (G.rows[j] << (bits * n)) : out_space.unit(gdd.v + (j - g));
          y = out_space.add(y, out_space.scale(c, image));
        }
      }
      rows.push_back(y);
    }
    return out_space.canonicalize(rows);
  };
  for (const Subspace& G : groups)
    for (const auto& [b, mult] : outside) out[map_into(G, b)] += mult;
  for (const auto& [b, mult] : inside) out[map_into(groups.front(), b)] += mult;

  FillResult res;
  res.design = explicit_design(q, V, out);
  res.design.K = {k};
  res.design.claimed_lambda = target;
  VerifyOptions opt;
  opt.threads = threads;
  if (gaussian_binomial(V, 2, q) > BigInt(1) << 26) opt.sampled = true;
  res.report = verify_design(res.design, opt);
  return res;
}

}  // namespace qdesign
