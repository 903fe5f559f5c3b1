#include "cli.hpp"

#include <algorithm>
#include <functional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "qdesign/atlas.hpp"
#include "qdesign/design.hpp"
#include "qdesign/error.hpp"
#include "qdesign/incidence.hpp"
#include "qdesign/linear_group.hpp"
#include "qdesign/matrix.hpp"
#include "qdesign/singer.hpp"

namespace qdesign::cli {

using nlohmann::json;

namespace {

json num(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return to_string(x);
}

// Left-aligned columns separated by two spaces.
std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], r[i].size());
    }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += r[i];
      if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
    }
    out += line + "\n";
  }
  return out;
}

std::string matrix_text(const IncidenceBlockMatrix& m) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{""};
  for (std::size_t j = 0; j < m.cols(); ++j) head.push_back("c" + std::to_string(j));
  rows.push_back(head);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<std::string> r{m.row_names[i]};
    for (const auto& x : m.entries[i]) r.push_back(to_string(x));
    rows.push_back(r);
  }
  std::string out = table(rows);
  for (std::size_t j = 0; j < m.cols(); ++j) out += "  c" + std::to_string(j) + " = " + m.col_names[j] + "\n";
  return out;
}

struct Globals {
  unsigned threads = 1;
  bool json = false;
};

std::shared_ptr<const OrbitAtlas> atlas_checked(std::uint64_t q, int m, int l) {
  require(m >= 1 && l >= 1, "m and l must be positive");
  return atlas_for(q, m, l);
}

// ---- gbinom ----------------------------------------------------------------------

struct GbinomArgs {
  int v = 0, k = 0;
  std::uint64_t q = 2;
};

CommandResult cmd_gbinom(const GbinomArgs& a) {
  require(prime_power(a.q).has_value(), "q must be a prime power");
  require(a.v >= 0, "v must be non-negative");
  const BigInt value = gaussian_binomial(a.v, a.k, a.q);
  CommandResult r;
  r.text = to_string(value) + "\n";
  r.json = json{{"v", a.v}, {"k", a.k}, {"q", a.q}, {"value", num(value)}};
  return r;
}

// ---- singer-orbits -----------------------------------------------------------------

struct SingerArgs {
  int l = 0, d = 0;
  std::uint64_t q = 2;
  bool counts_only = false;
};

CommandResult cmd_singer(const SingerArgs& a) {
  require(a.l >= 1 && a.d >= 0 && a.d <= a.l, "need 0 <= d <= l");
  const SingerAction h(a.q, a.l);
  CommandResult r;
  std::map<int, std::uint64_t> observed;
  std::vector<HOrbit> orbits;
  if (!a.counts_only) {
    orbits = SingerOrbitTable(h, a.d).orbits();
    for (const auto& o : orbits) ++observed[o.u];
  }
  const BigInt total = n_d_v(a.d, a.l, a.q);
  json by_u = json::array();
  std::vector<std::vector<std::string>> rows{{"u", "formula", a.counts_only ? "" : "enumerated"}};
  bool agree = a.counts_only || BigInt(orbits.size()) == total;
  for (int u = 1; u <= a.l; ++u) {
    if (std::gcd(a.d, a.l) % u != 0) continue;
    const BigInt f = n_d_u_v(a.d, u, a.l, a.q);
    json e{{"u", u}, {"formula", num(f)}};
    std::vector<std::string> row{std::to_string(u), to_string(f)};
    if (!a.counts_only) {
      e["enumerated"] = observed[u];
      row.push_back(std::to_string(observed[u]));
      agree = agree && f == observed[u];
    }
    by_u.push_back(e);
    rows.push_back(row);
  }
  std::ostringstream text;
  text << "H-orbits on " << a.d << "-subspaces of GF(" << a.q << ")^" << a.l << ": " << total;
  if (!a.counts_only) text << " (enumerated " << orbits.size() << ")";
  text << "\n" << table(rows);
  json body{{"l", a.l}, {"d", a.d}, {"q", a.q}, {"count", num(total)}, {"counts_by_u", by_u}};
  if (!a.counts_only) {
    json list = json::array();
    text << "\n";
    std::vector<std::vector<std::string>> orows{{"#", "u", "length", "representative"}};
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      const auto& o = orbits[i];
      const std::string rep = format_subspace(h.space(), o.rep);
      list.push_back({{"u", o.u}, {"length", o.length}, {"representative", rep}});
      orows.push_back({std::to_string(i), std::to_string(o.u), std::to_string(o.length), rep});
    }
    text << table(orows);
    body["orbits"] = list;
    body["agree"] = agree;
  }
  if (!agree) {
    text << "MISMATCH between formula and enumeration\n";
    r.exit_status = 1;
  }
  r.text = text.str();
  r.json = body;
  return r;
}

// ---- orbit-atlas -----------------------------------------------------------------------

struct AtlasArgs {
  int m = 0, l = 0, k = 0;
  std::uint64_t q = 2;
  std::uint64_t max_enumerate = 5'000'000;
};

CommandResult cmd_atlas(const AtlasArgs& a, const Globals& g) {
  const auto atlas = atlas_checked(a.q, a.m, a.l);
  const FieldTower& t = atlas->tower();
  require(a.k >= 2 && a.k <= t.v(), "need 2 <= k <= ml");
  const std::vector<OrbitLabel> labels = a.k == 2 ? atlas->row_labels() : atlas->column_labels(a.k);
  const BigInt subspaces = gaussian_binomial(t.v(), a.k, a.q);
  const bool enumerate = subspaces <= a.max_enumerate;
  std::map<std::uint64_t, std::uint64_t> tally;
  if (enumerate) {
    // Superspaces of the zero space are all k-subspaces.
    tally = superspace_label_counts(*atlas, t.space().zero(), a.k, g.threads);
  }
  CommandResult r;
  json list = json::array();
  std::vector<std::vector<std::string>> rows{{"label", "stabilizer", "orbit size", enumerate ? "enumerated" : ""}};
  BigInt covered = 0;
  bool agree = true;
  for (const auto& lab : labels) {
    const BigInt size = atlas->orbit_size(lab);
    covered += size;
    json e{{"class", {lab.omega.i, lab.omega.j}},
           {"r", lab.r},
           {"u", atlas->label_u(lab)},
           {"label", atlas->describe(lab)},
           {"stabilizer_order", num(atlas->stabilizer_order(lab))},
           {"orbit_size", num(size)}};
    if (!lab.full_class()) e["representative"] = format_subspace(t.line_space(), atlas->label_rep(lab));
    std::vector<std::string> row{atlas->describe(lab), to_string(atlas->stabilizer_order(lab)), to_string(size)};
    if (enumerate) {
      const auto it = tally.find(lab.key());
      const std::uint64_t n = it == tally.end() ? 0 : it->second;
      e["enumerated"] = n;
      row.push_back(std::to_string(n));
      agree = agree && size == n;
    }
    list.push_back(e);
    rows.push_back(row);
  }
  std::ostringstream text;
  text << "GL(" << a.m << "," << ipow(a.q, a.l) << ") on " << a.k << "-subspaces of GF(" << a.q << ")^" << t.v()
       << ": " << labels.size() << " labelled orbits covering " << covered << " of " << subspaces << "\n"
       << table(rows);
  json body{{"m", a.m}, {"l", a.l}, {"k", a.k}, {"q", a.q}, {"subspaces", num(subspaces)},
            {"labelled", num(covered)}, {"labels", list}};
  if (enumerate) {
    const auto it = tally.find(0);
    const std::uint64_t unclassified = it == tally.end() ? 0 : it->second;
    agree = agree && covered + unclassified == subspaces;
    body["unclassified"] = unclassified;
    body["agree"] = agree;
    text << "unclassified (outside the atlas): " << unclassified << "\n";
  } else {
    text << "exhaustive enumeration skipped (" << subspaces << " subspaces)\n";
  }
  if (!agree) {
    text << "MISMATCH between orbit sizes and enumeration\n";
    r.exit_status = 1;
  }
  r.text = text.str();
  r.json = body;
  return r;
}

// ---- stabilizer -------------------------------------------------------------------------

struct StabArgs {
  int m = 0, l = 0, k = 0, r = 0, u = 0;
  std::uint64_t q = 2;
  bool brute = false;
};

CommandResult cmd_stabilizer(const StabArgs& a) {
  const BigInt stab = stabilizer_order_T(a.k, a.r, a.u, a.m, a.l, a.q);
  const BigInt size = orbit_size_T(a.k, a.r, a.u, a.m, a.l, a.q);
  CommandResult res;
  std::ostringstream text;
  text << "T(k=" << a.k << ", r=" << a.r << ", u=" << a.u << ") in GF(" << a.q << ")^" << a.m * a.l
       << ": stabilizer " << stab << ", orbit size " << size << "\n";
  json body{{"m", a.m}, {"l", a.l}, {"k", a.k}, {"q", a.q}, {"r", a.r}, {"u", a.u},
            {"stabilizer_order", num(stab)}, {"orbit_size", num(size)}};
  if (a.brute) {
    const auto atlas = atlas_checked(a.q, a.m, a.l);
    const auto& orbits = atlas->h_table(a.r + 1).orbits();
    const auto it = std::find_if(orbits.begin(), orbits.end(), [&](const HOrbit& o) { return o.u == a.u; });
    require(it != orbits.end(), "no H-orbit of " + std::to_string(a.r + 1) + "-subspaces has u = " +
                                    std::to_string(a.u));
    const OrbitLabel lab = atlas->t_label(a.k, a.r, static_cast<std::uint32_t>(it - orbits.begin()));
    const LinearGroup group(atlas->tower());
    const BigInt brute = group.stabilizer_order_brute(atlas->realize(lab));
    text << "brute force over " << group.order() << " elements (" << atlas->describe(lab) << "): " << brute << "\n";
    body["brute_force"] = num(brute);
    body["agree"] = brute == stab;
    if (brute != stab) {
      text << "MISMATCH\n";
      res.exit_status = 1;
    }
  }
  res.text = text.str();
  res.json = body;
  return res;
}

// ---- incidence -----------------------------------------------------------------------------

struct IncidenceArgs {
  int m = 0, l = 0, k = 0;
  std::uint64_t q = 2;
  std::string mode = "closed";
  std::uint64_t budget = 50'000'000;
};

CommandResult cmd_incidence(const IncidenceArgs& a, const Globals& g) {
  const auto atlas = atlas_checked(a.q, a.m, a.l);
  CommandResult r;
  std::ostringstream text;
  json body{{"m", a.m}, {"l", a.l}, {"k", a.k}, {"q", a.q}, {"mode", a.mode}};
  if (a.mode == "closed") {
    const AtlasMatrix cf = closed_form_A_k(*atlas, a.k);
    text << "A_" << a.k << " (closed form)\n" << matrix_text(cf.matrix);
    body["closed"] = to_json(cf.matrix);
  } else if (a.mode == "brute") {
    const AtlasMatrix bf = brute_A_k(*atlas, a.k, g.threads);
    text << "A_" << a.k << " (brute force)\n" << matrix_text(bf.matrix);
    body["brute"] = to_json(bf.matrix);
  } else {
    const ClosedFormReport rep = verify_closed_form(*atlas, a.k, a.budget, g.threads);
    text << "A_" << a.k << " (closed form)\n" << matrix_text(rep.closed.matrix);
    body["closed"] = to_json(rep.closed.matrix);
    body["brute"] = to_json(rep.brute.matrix);
    body["complete"] = rep.complete;
    body["rows_checked"] = rep.rows_checked;
    body["flags_checked"] = rep.flags_checked;
    json disc = json::array();
    for (const auto& d : rep.discrepancies)
      disc.push_back({{"row", d.row}, {"col", d.col}, {"closed", num(d.closed)}, {"brute", num(d.brute)}});
    body["discrepancies"] = disc;
    body["agree"] = rep.match();
    if (!rep.complete)
      text << "PARTIAL: only " << rep.rows_checked << " of " << rep.closed.row_labels.size()
           << " rows fit the flag budget\n";
    if (rep.match()) {
      text << "closed form and brute force agree on " << rep.rows_checked * rep.closed.col_labels.size()
           << " entries (" << rep.flags_checked << " superspaces classified)\n";
    } else {
      r.exit_status = 1;
      for (const auto& d : rep.discrepancies)
        text << "DISAGREE at (" << rep.closed.matrix.row_names[d.row] << ", " << rep.closed.matrix.col_names[d.col]
             << "): closed " << d.closed << ", brute " << d.brute << "\n";
    }
  }
  r.text = text.str();
  r.json = body;
  return r;
}

// ---- design files --------------------------------------------------------------------------

std::string class_summary(const VerifyReport& rep) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : rep.classes) {
    const auto obs = c.observed();
    std::string hist;
    for (const auto& [count, n] : c.histogram) hist += (hist.empty() ? "" : " ") + std::to_string(count) + "x" +
                                                       std::to_string(n);
    rows.push_back({"  " + c.name, "pairs=" + std::to_string(c.pairs),
                    "expected=" + (c.expected ? to_string(*c.expected) : std::string("-")),
                    "observed=" + (obs ? std::to_string(*obs) : std::string("non-uniform")), "[" + hist + "]"});
  }
  return table(rows);
}

std::string report_text(const VerifyReport& rep, const DesignInstance& d) {
  const VectorSpace space(d.q, d.v);
  std::ostringstream out;
  out << (rep.pass ? "PASS" : "FAIL") << "  " << to_string(d.kind) << "  v=" << d.v << " q=" << d.q
      << "  blocks=" << rep.blocks << "  simple=" << (rep.simple ? "yes" : "no") << "  mode="
      << (rep.sampled ? "sampled(" + std::to_string(rep.samples) + ", seed " + std::to_string(rep.seed) + ")"
                      : std::string("full"))
      << "\n";
  out << class_summary(rep);
  for (const auto& p : rep.problems) out << "  problem: " << p << "\n";
  if (rep.bad_pairs) out << "  " << rep.bad_pairs << " pairs off the expected coverage\n";
  for (const auto& w : rep.witnesses)
    out << "  witness " << format_subspace(space, w.pair) << " (" << w.cls << ") covered " << w.count
        << " times, expected " << w.expected << "\n";
  if (rep.group_violation_count) {
    out << "  " << rep.group_violation_count << " blocks meet a group in dimension >= 2\n";
    for (const auto& gv : rep.group_violations)
      out << "  block " << format_subspace(space, gv.block) << " meets group " << gv.group << " in dimension "
          << gv.intersection_dim << "\n";
  }
  return out.str();
}

struct VerifyArgs {
  std::string in;
  std::uint64_t sample = 0, seed = 1;
  std::size_t witnesses = 20;
};

CommandResult cmd_verify(const VerifyArgs& a, const Globals& g) {
  const DesignInstance d = read_design_file(a.in);
  VerifyOptions opt;
  opt.sampled = a.sample > 0;
  opt.samples = a.sample;
  opt.seed = a.seed;
  opt.threads = g.threads;
  opt.max_witnesses = a.witnesses;
  const VerifyReport rep = verify_design(d, opt);
  CommandResult r;
  r.exit_status = rep.pass ? 0 : 1;
  r.text = report_text(rep, d);
  r.json = report_to_json(rep, d);
  return r;
}

json design_summary(const DesignInstance& d, const std::string& out) {
  json j{{"out", out}, {"kind", to_string(d.kind)}, {"q", d.q}, {"v", d.v}, {"K", d.K},
         {"blocks", num(block_count(d))}, {"simple", is_simple(d)}};
  j["claimed_lambda"] = d.claimed_lambda ? num(*d.claimed_lambda) : json(nullptr);
  if (d.lambda_inside_groups) j["lambda_inside_groups"] = num(*d.lambda_inside_groups);
  if (d.lambda_across_groups) j["lambda_across_groups"] = num(*d.lambda_across_groups);
  if (d.groups) j["groups"] = d.groups->size();
  return j;
}

std::string summary_text(const DesignInstance& d, const std::string& out) {
  std::ostringstream s;
  s << to_string(d.kind) << " on GF(" << d.q << ")^" << d.v << ": " << block_count(d) << " blocks, K = {";
  for (std::size_t i = 0; i < d.K.size(); ++i) s << (i ? "," : "") << d.K[i];
  s << "}";
  if (d.claimed_lambda) s << ", lambda " << *d.claimed_lambda;
  if (d.lambda_inside_groups) s << ", inside groups " << *d.lambda_inside_groups;
  if (d.lambda_across_groups) s << ", across groups " << *d.lambda_across_groups;
  if (d.groups) s << ", " << d.groups->size() << " groups";
  s << (is_simple(d) ? ", simple" : ", not simple") << "\nwrote " << out << "\n";
  return s.str();
}

struct BuildGddArgs {
  int m = 0, l = 0, k = 0;
  std::uint64_t q = 2;
  std::string select, out;
  bool omega_kk = false;
};

GddSelection selection_from(const std::string& text, bool omega_kk) {
  GddSelection s = text.empty() ? GddSelection{} : parse_selection(text);
  s.omega_kk = omega_kk;
  return s;
}

CommandResult cmd_build_gdd(const BuildGddArgs& a) {
  const DesignInstance d = build_gdd(a.m, a.l, a.k, a.q, selection_from(a.select, a.omega_kk));
  write_design_file(a.out, d);
  CommandResult r;
  r.text = summary_text(d, a.out);
  r.json = design_summary(d, a.out);
  return r;
}

struct BuildPbdArgs {
  std::string seed, select, out;
  int m = 0, k = 0;
  bool omega_kk = false;
};

CommandResult cmd_build_pbd(const BuildPbdArgs& a) {
  const DesignInstance seed = read_design_file(a.seed);
  const DesignInstance d = build_pbd(a.m, a.k, seed, selection_from(a.select, a.omega_kk));
  write_design_file(a.out, d);
  CommandResult r;
  r.text = summary_text(d, a.out);
  r.json = design_summary(d, a.out);
  return r;
}

// Writes `d` after a verification pass; a failing design is not written.
CommandResult verified_write(const DesignInstance& d, const VerifyReport& rep, const std::string& out) {
  CommandResult r;
  json body = design_summary(d, out);
  body["verification"] = report_to_json(rep, d);
  if (rep.pass) {
    write_design_file(out, d);
    r.text = summary_text(d, out) + report_text(rep, d);
  } else {
    body["out"] = nullptr;
    r.text = report_text(rep, d) + "not written: verification failed\n";
    r.exit_status = 1;
  }
  r.json = body;
  return r;
}

VerifyReport check(const DesignInstance& d, const Globals& g) {
  VerifyOptions opt;
  opt.threads = g.threads;
  if (gaussian_binomial(d.v, 2, d.q) > BigInt(1) << 26) opt.sampled = true;
  return verify_design(d, opt);
}

struct BreakArgs {
  std::string pbd, ingredients, out;
};

CommandResult cmd_break(const BreakArgs& a, const Globals& g) {
  const DesignInstance pbd = read_design_file(a.pbd);
  std::map<int, DesignInstance> ing;
  static const std::regex item(R"(^\s*(\d+)\s*=\s*(.+?)\s*$)");
  std::stringstream ss(a.ingredients);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::smatch mm;
    require(std::regex_match(part, mm, item), "ingredient '" + part + "' is not of the form u=FILE");
    const int u = std::stoi(mm[1]);
    require(!ing.count(u), "two ingredients for u = " + std::to_string(u));
    ing.emplace(u, read_design_file(mm[2]));
  }
  const DesignInstance d = break_blocks(pbd, ing);
  return verified_write(d, check(d, g), a.out);
}

struct FillArgs {
  std::string gdd, master, out;
  int hole_dim = 0;
};

CommandResult cmd_fill(const FillArgs& a, const Globals& g) {
  const DesignInstance gdd = read_design_file(a.gdd);
  const DesignInstance master = read_design_file(a.master);
  const FillResult res = fill_holes(gdd, master, trailing_hole(master.q, master.v, a.hole_dim), g.threads);
  return verified_write(res.design, res.report, a.out);
}

struct SupplementArgs {
  std::string in, out;
};

CommandResult cmd_supplement(const SupplementArgs& a) {
  const DesignInstance d = supplementary(read_design_file(a.in));
  write_design_file(a.out, d);
  CommandResult r;
  r.text = summary_text(d, a.out);
  r.json = design_summary(d, a.out);
  return r;
}

// ---- km-solve ---------------------------------------------------------------------------------

struct KmArgs {
  int l = 0, k = 0;
  std::uint64_t q = 2;
  std::string lambda;
  std::uint64_t budget = 10'000'000;
  std::size_t max_solutions = 100;
};

std::string status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::exhausted: return "exhausted";
    case SearchStatus::budget_exceeded: return "budget_exceeded";
    case SearchStatus::solution_limit: return "solution_limit";
  }
  return "exhausted";
}

CommandResult cmd_km(const KmArgs& a, const Globals& g) {
  require(a.k >= 2 && a.k <= a.l, "need 2 <= k <= l");
  const BigInt lambda = parse_bigint(a.lambda);
  const SingerAction h(a.q, a.l);
  const SingerOrbitTable cols(h, a.k);
  const IncidenceBlockMatrix m = h_incidence_matrix(a.l, 2, a.k, a.q);
  std::vector<BigInt> weights;
  for (const auto& o : cols.orbits()) weights.push_back(o.length);
  const KmResult res = km_solve_binary(m, lambda, weights, a.budget, a.max_solutions);

  CommandResult r;
  std::ostringstream text;
  text << "Kramer-Mesner search for 2-(" << a.l << "," << a.k << "," << lambda << ")_" << a.q
       << " designs invariant under the Singer cycle: " << m.rows() << " x " << m.cols() << " system, "
       << res.solutions.size() << " solutions, " << res.nodes << " nodes, " << status_name(res.status) << "\n";
  json sols = json::array();
  bool all_verified = true;
  for (const auto& s : res.solutions) {
    // Expand the chosen orbits and check coverage directly.
    std::vector<ExplicitBlock> blocks;
    json reps = json::array();
    for (int c : s.columns) {
      const HOrbit& o = cols.orbits()[c];
      reps.push_back(format_subspace(h.space(), o.rep));
      for (std::uint64_t p = 0; p < o.length; ++p) blocks.push_back({h.space().canonicalize(h.apply(o.rep, p).rows), 1});
    }
    DesignInstance d;
    d.q = a.q;
    d.v = a.l;
    d.K = {a.k};
    d.claimed_lambda = lambda;
    d.blocks = std::move(blocks);
    VerifyOptions opt;
    opt.threads = g.threads;
    const bool ok = verify_design(d, opt).pass;
    all_verified = all_verified && ok;
    text << "  " << (ok ? "verified" : "FAILED") << "  " << s.blocks << " blocks:";
    for (const auto& x : reps) text << " " << x.get<std::string>();
    text << "\n";
    sols.push_back({{"columns", s.columns}, {"blocks", num(s.blocks)}, {"representatives", reps}, {"verified", ok}});
  }
  if (res.solutions.empty())
    text << (res.status == SearchStatus::exhausted ? "no solution exists among 0-1 orbit selections\n"
                                                   : "none found within the node budget\n");
  r.exit_status = all_verified ? 0 : 1;
  r.text = text.str();
  r.json = json{{"l", a.l}, {"k", a.k}, {"q", a.q}, {"lambda", num(lambda)}, {"status", status_name(res.status)},
                {"nodes", res.nodes}, {"solutions", sols}};
  return r;
}

}  // namespace

CommandResult run(const std::vector<std::string>& args) {
  CLI::App app{"Construction and verification of subspace designs, q-GDDs and q-PBDs", "qdesign"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--threads", g.threads, "worker threads for sweeps")->check(CLI::Range(1u, 256u));
  app.add_flag("--json", g.json, "print the JSON body instead of the table");

  CommandResult result;
  std::function<CommandResult()> action;

  GbinomArgs gb;
  auto* c = app.add_subcommand("gbinom", "Gaussian binomial [v k]_q");
  c->add_option("--v", gb.v)->required();
  c->add_option("--k", gb.k)->required();
  c->add_option("--q", gb.q)->required();
  c->callback([&] { action = [&] { return cmd_gbinom(gb); }; });

  SingerArgs so;
  c = app.add_subcommand("singer-orbits", "Singer-cycle orbits on d-subspaces of GF(q)^l");
  c->add_option("--l", so.l)->required();
  c->add_option("--d", so.d)->required();
  c->add_option("--q", so.q)->required();
  c->add_flag("--counts-only", so.counts_only, "formula counts only");
  c->callback([&] { action = [&] { return cmd_singer(so); }; });

  AtlasArgs oa;
  c = app.add_subcommand("orbit-atlas", "GL(m,q^l)-orbit labels on k-subspaces of GF(q)^{ml}");
  c->add_option("--m", oa.m)->required();
  c->add_option("--l", oa.l)->required();
  c->add_option("--k", oa.k)->required();
  c->add_option("--q", oa.q)->required();
  c->add_option("--max-enumerate", oa.max_enumerate, "skip the exhaustive check above this many subspaces");
  c->callback([&] { action = [&] { return cmd_atlas(oa, g); }; });

  StabArgs st;
  c = app.add_subcommand("stabilizer", "stabilizer order and orbit size of T(u_1,...,u_r)");
  c->add_option("--m", st.m)->required();
  c->add_option("--l", st.l)->required();
  c->add_option("--k", st.k)->required();
  c->add_option("--q", st.q)->required();
  c->add_option("--r", st.r)->required();
  c->add_option("--u", st.u)->required();
  c->add_flag("--brute-force", st.brute, "count the stabilizer over the whole group");
  c->callback([&] { action = [&] { return cmd_stabilizer(st); }; });

  IncidenceArgs inc;
  c = app.add_subcommand("incidence", "the incidence matrix A_k");
  c->add_option("--m", inc.m)->required();
  c->add_option("--l", inc.l)->required();
  c->add_option("--k", inc.k)->required();
  c->add_option("--q", inc.q)->required();
  c->add_option("--mode", inc.mode)->check(CLI::IsMember({"closed", "brute", "both"}));
  c->add_option("--budget", inc.budget, "superspace classifications allowed in mode both");
  c->callback([&] { action = [&] { return cmd_incidence(inc, g); }; });

  BuildGddArgs bg;
  c = app.add_subcommand("build-gdd", "build a q-GDD over the Desarguesian spread");
  c->add_option("--m", bg.m)->required();
  c->add_option("--l", bg.l)->required();
  c->add_option("--k", bg.k)->required();
  c->add_option("--q", bg.q)->required();
  c->add_option("--select", bg.select, "r,u=w[,r,u=w...]");
  c->add_flag("--omega-kk", bg.omega_kk, "include the (k,k) orbit");
  c->add_option("--out", bg.out)->required();
  c->callback([&] { action = [&] { return cmd_build_gdd(bg); }; });

  BuildPbdArgs bp;
  c = app.add_subcommand("build-pbd", "extend an H-invariant seed design to a q-PBD");
  c->add_option("--seed", bp.seed)->required();
  c->add_option("--m", bp.m)->required();
  c->add_option("--k", bp.k)->required();
  c->add_option("--select", bp.select, "r,u=w[,r,u=w...]");
  c->add_flag("--omega-kk", bp.omega_kk, "include the (k,k) orbit");
  c->add_option("--out", bp.out)->required();
  c->callback([&] { action = [&] { return cmd_build_pbd(bp); }; });

  VerifyArgs va;
  c = app.add_subcommand("verify", "check the coverage of a design file");
  c->add_option("--in", va.in)->required();
  c->add_option("--sample", va.sample, "number of random 2-subspaces (0 = full sweep)");
  c->add_option("--seed", va.seed, "seed for sampled mode");
  c->add_option("--witnesses", va.witnesses, "witnesses to print");
  c->callback([&] { action = [&] { return cmd_verify(va, g); }; });

  BreakArgs ba;
  c = app.add_subcommand("break-blocks", "replace every block of a pbd by an ingredient design");
  c->add_option("--pbd", ba.pbd)->required();
  c->add_option("--ingredient", ba.ingredients, "u=FILE[,u=FILE...]")->required();
  c->add_option("--out", ba.out)->required();
  c->callback([&] { action = [&] { return cmd_break(ba, g); }; });

  FillArgs fa;
  c = app.add_subcommand("fill-holes", "fill the groups of a gdd with a master design");
  c->add_option("--gdd", fa.gdd)->required();
  c->add_option("--master", fa.master)->required();
  c->add_option("--hole-dim", fa.hole_dim)->required();
  c->add_option("--out", fa.out)->required();
  c->callback([&] { action = [&] { return cmd_fill(fa, g); }; });

  SupplementArgs sa;
  c = app.add_subcommand("supplement", "supplementary design of a simple design");
  c->add_option("--in", sa.in)->required();
  c->add_option("--out", sa.out)->required();
  c->callback([&] { action = [&] { return cmd_supplement(sa); }; });

  KmArgs km;
  c = app.add_subcommand("km-solve", "0-1 Kramer-Mesner search with the Singer cycle");
  c->add_option("--l", km.l)->required();
  c->add_option("--k", km.k)->required();
  c->add_option("--q", km.q)->required();
  c->add_option("--lambda", km.lambda)->required();
  c->add_option("--budget", km.budget, "search node budget");
  c->add_option("--max-solutions", km.max_solutions);
  c->callback([&] { action = [&] { return cmd_km(km, g); }; });

  std::vector<std::string> argv_store{"qdesign"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    result.text = app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    result.text = app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_status = 2;
    result.log = std::string("usage error: ") + e.what() + "\n";
    return result;
  }

  try {
    result = action();
  } catch (const PreconditionError& e) {
    result = {};
    result.exit_status = 2;
    result.log = std::string("error: ") + e.what() + "\n";
  } catch (const FormatError& e) {
    result = {};
    result.exit_status = 2;
    result.log = std::string("error: ") + e.what() + "\n";
  } catch (const BudgetError& e) {
    result = {};
    result.exit_status = 3;
    result.log = std::string("budget exceeded: ") + e.what() + "\n";
  } catch (const std::exception& e) {
    result = {};
    result.exit_status = 4;
    result.log = std::string("internal error: ") + e.what() + "\n";
  }
  result.json_requested = g.json;
  return result;
}

std::string render(const CommandResult& r) {
  if (r.json_requested && r.json) return r.json->dump(1) + "\n";
  return r.text;
}

}  // namespace qdesign::cli
