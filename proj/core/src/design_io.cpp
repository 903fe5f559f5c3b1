#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qdesign/design.hpp"
#include "qdesign/error.hpp"

namespace qdesign {

using nlohmann::json;

namespace {

json big_to_json(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return to_string(x);
}

BigInt big_from_json(const json& j, const std::string& what) {
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return parse_bigint(j.get<std::string>());
  throw FormatError(what + " must be an integer or a decimal string");
}

std::uint64_t u64_from_json(const json& j, const std::string& what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw FormatError(what + " must be a non-negative integer");
  return j.get<std::uint64_t>();
}

int int_from_json(const json& j, const std::string& what) {
  const auto x = u64_from_json(j, what);
  if (x > 64) throw FormatError(what + " is out of range");
  return static_cast<int>(x);
}

json row_to_json(const VectorSpace& space, Row x) {
  const auto digits = space.digits(x);
  if (space.q() <= 10) {
    std::string s;
    for (Elem e : digits) s += static_cast<char>('0' + e);
    return s;
  }
  return digits;
}

Row row_from_json(const VectorSpace& space, const json& j, const std::string& what) {
  std::vector<Elem> digits;
  if (j.is_string()) {
    for (char c : j.get<std::string>()) {
      if (c < '0' || c > '9') throw FormatError(what + ": row '" + j.get<std::string>() + "' has a non-digit");
      digits.push_back(static_cast<Elem>(c - '0'));
    }
  } else if (j.is_array()) {
    for (const auto& e : j) digits.push_back(static_cast<Elem>(u64_from_json(e, what)));
  } else {
    throw FormatError(what + ": rows are digit strings or arrays");
  }
  if (static_cast<int>(digits.size()) != space.dim())
    throw FormatError(what + ": row length " + std::to_string(digits.size()) + ", expected " +
                      std::to_string(space.dim()));
  for (Elem e : digits)
    if (e >= space.q()) throw FormatError(what + ": digit " + std::to_string(e) + " is not in GF(q)");
  return space.from_digits(digits);
}

json subspace_to_json(const VectorSpace& space, const Subspace& s) {
  json rows = json::array();
  for (Row x : s.rows) rows.push_back(row_to_json(space, x));
  return rows;
}

Subspace subspace_from_json(const VectorSpace& space, const json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + " must be a list of rows");
  Subspace s{space.dim(), {}};
  for (const auto& r : j) s.rows.push_back(row_from_json(space, r, what));
  if (!space.is_canonical(s)) throw FormatError(what + " is not a reduced echelon basis");
  return s;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) throw FormatError(what + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw FormatError(what + ": unknown key '" + key + "'");
}

const json& field(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw FormatError(what + ": missing '" + key + "'");
  return j.at(key);
}

}  // namespace

json design_to_json(const DesignInstance& d) {
  const VectorSpace space(d.q, d.v);
  json j = json::object();
  j["format_version"] = 1;
  j["q"] = d.q;
  j["v"] = d.v;
  j["kind"] = to_string(d.kind);
  j["K"] = d.K;
  j["claimed_lambda"] = d.claimed_lambda ? big_to_json(*d.claimed_lambda) : json(nullptr);
  if (d.lambda_inside_groups || d.lambda_across_groups) {
    json c = json::object();
    c["inside_groups"] = d.lambda_inside_groups ? big_to_json(*d.lambda_inside_groups) : json(nullptr);
    c["across_groups"] = d.lambda_across_groups ? big_to_json(*d.lambda_across_groups) : json(nullptr);
    j["claimed_class_lambda"] = c;
  }
  if (d.groups) {
    json g = json::array();
    for (const auto& s : *d.groups) g.push_back(subspace_to_json(space, s));
    j["groups"] = g;
  }
  if (d.is_implicit()) {
    const auto& ib = d.implicit();
    const VectorSpace line(d.q, ib.l);
    json labels = json::array();
    for (const auto& il : ib.labels)
      labels.push_back({{"r", il.r},
                        {"u", il.u},
                        {"dim", il.dim},
                        {"rep", subspace_to_json(line, il.rep)},
                        {"multiplicity", il.multiplicity}});
    j["blocks"] = {{"implicit",
                    {{"m", ib.m}, {"l", ib.l}, {"k", ib.k}, {"labels", labels}, {"omega_kk", ib.omega_kk}}}};
  } else {
    json blocks = json::array();
    for (const auto& b : d.explicit_blocks())
      blocks.push_back({{"basis", subspace_to_json(space, b.basis)}, {"multiplicity", b.multiplicity}});
    j["blocks"] = {{"explicit", blocks}};
  }
  return j;
}

DesignInstance design_from_json(const json& j) {
  const std::string top = "design file";
  check_keys(j, {"format_version", "q", "v", "kind", "K", "claimed_lambda", "claimed_class_lambda", "groups", "blocks"},
             top);
  if (u64_from_json(field(j, "format_version", top), "format_version") != 1)
    throw FormatError("unsupported format_version");
  DesignInstance d;
  d.q = u64_from_json(field(j, "q", top), "q");
  if (!prime_power(d.q) || d.q > 256) throw FormatError("q must be a prime power up to 256");
  d.v = int_from_json(field(j, "v", top), "v");
  if (d.v < 1) throw FormatError("v must be positive");
  if (!field(j, "kind", top).is_string()) throw FormatError("kind must be a string");
  d.kind = parse_design_kind(j.at("kind").get<std::string>());
  const json& K = field(j, "K", top);
  if (!K.is_array() || K.empty()) throw FormatError("K must be a non-empty list");
  for (const auto& k : K) d.K.push_back(int_from_json(k, "K entry"));
  for (std::size_t i = 0; i < d.K.size(); ++i) {
    if (d.K[i] < 1 || d.K[i] > d.v) throw FormatError("K entries must lie in [1, v]");
    if (i && d.K[i] <= d.K[i - 1]) throw FormatError("K must be strictly increasing");
  }
  if (j.contains("claimed_lambda") && !j.at("claimed_lambda").is_null())
    d.claimed_lambda = big_from_json(j.at("claimed_lambda"), "claimed_lambda");
  if (j.contains("claimed_class_lambda")) {
    const json& c = j.at("claimed_class_lambda");
    check_keys(c, {"inside_groups", "across_groups"}, "claimed_class_lambda");
    if (c.contains("inside_groups") && !c.at("inside_groups").is_null())
      d.lambda_inside_groups = big_from_json(c.at("inside_groups"), "inside_groups");
    if (c.contains("across_groups") && !c.at("across_groups").is_null())
      d.lambda_across_groups = big_from_json(c.at("across_groups"), "across_groups");
  }
  const VectorSpace space(d.q, d.v);
  if (j.contains("groups")) {
    std::vector<Subspace> groups;
    for (const auto& g : j.at("groups")) groups.push_back(subspace_from_json(space, g, "group"));
    if (groups.empty()) throw FormatError("groups must not be empty");
    const BigInt points = gaussian_binomial(d.v, 1, d.q);
    BigInt total = 0;
    for (const auto& g : groups) total += gaussian_binomial(g.dim(), 1, d.q);
    if (total != points) throw FormatError("groups do not partition the points");
    if (points <= BigInt(1) << 22) {
      const Grassmannian pts(space, 1);
      std::vector<char> seen(pts.size(), 0);
      for (const auto& g : groups)
        for (const auto& p : subspaces_of(space, g, 1))
          if (seen[pts.rank(p)]++) throw FormatError("groups intersect nontrivially");
    }
    d.groups = std::move(groups);
  }
  if (d.kind == DesignKind::gdd && !d.groups) throw FormatError("a gdd needs groups");
  const std::set<int> Kset(d.K.begin(), d.K.end());
  const json& blocks = field(j, "blocks", top);
  check_keys(blocks, {"explicit", "implicit"}, "blocks");
  if (blocks.size() != 1) throw FormatError("blocks must hold exactly one of explicit / implicit");
  if (blocks.contains("explicit")) {
    std::vector<ExplicitBlock> list;
    for (const auto& b : blocks.at("explicit")) {
      check_keys(b, {"basis", "multiplicity"}, "block");
      ExplicitBlock eb{subspace_from_json(space, field(b, "basis", "block"), "block"), 1};
      if (b.contains("multiplicity")) eb.multiplicity = u64_from_json(b.at("multiplicity"), "multiplicity");
      if (eb.multiplicity == 0) throw FormatError("block multiplicity must be positive");
      if (!Kset.count(eb.basis.dim()))
        throw FormatError("block of dimension " + std::to_string(eb.basis.dim()) + " not in K");
      list.push_back(std::move(eb));
    }
    d.blocks = std::move(list);
  } else {
    const json& im = blocks.at("implicit");
    check_keys(im, {"m", "l", "k", "labels", "omega_kk"}, "implicit blocks");
    ImplicitBlocks ib;
    ib.m = int_from_json(field(im, "m", "implicit"), "m");
    ib.l = int_from_json(field(im, "l", "implicit"), "l");
    ib.k = int_from_json(field(im, "k", "implicit"), "k");
    if (ib.m < 1 || ib.l < 1 || ib.m * ib.l != d.v) throw FormatError("implicit m*l must equal v");
    if (im.contains("omega_kk")) {
      if (!im.at("omega_kk").is_boolean()) throw FormatError("omega_kk must be a boolean");
      ib.omega_kk = im.at("omega_kk").get<bool>();
    }
    if (ib.omega_kk && (ib.k < 2 || ib.k > ib.m || !Kset.count(ib.k)))
      throw FormatError("omega_kk needs 2 <= k <= m with k in K");
    const VectorSpace line(d.q, ib.l);
    const auto atlas = atlas_for(d.q, ib.m, ib.l);
    std::set<std::tuple<int, int, Subspace>> seen;
    for (const auto& lj : field(im, "labels", "implicit")) {
      check_keys(lj, {"r", "u", "dim", "rep", "multiplicity"}, "label");
      ImplicitLabel il;
      il.r = int_from_json(field(lj, "r", "label"), "r");
      il.u = int_from_json(field(lj, "u", "label"), "u");
      il.dim = int_from_json(field(lj, "dim", "label"), "dim");
      il.rep = subspace_from_json(line, field(lj, "rep", "label"), "label rep");
      if (lj.contains("multiplicity")) il.multiplicity = u64_from_json(lj.at("multiplicity"), "multiplicity");
      if (!Kset.count(il.dim)) throw FormatError("label dimension " + std::to_string(il.dim) + " not in K");
      try {
        to_orbit_label(*atlas, il);
      } catch (const PreconditionError& e) {
        throw FormatError(std::string("invalid orbit label: ") + e.what());
      }
      if (!seen.insert({il.dim, il.r, il.rep}).second) throw FormatError("orbit label listed twice");
      ib.labels.push_back(std::move(il));
    }
    d.blocks = std::move(ib);
  }
  return d;
}

std::string design_dump(const DesignInstance& d) { return design_to_json(d).dump(1) + "\n"; }

DesignInstance read_design_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  try {
    return design_from_json(j);
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_design_file(const std::string& path, const DesignInstance& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << design_dump(d);
  if (!out) throw FormatError("write to " + path + " failed");
}

json report_to_json(const VerifyReport& r, const DesignInstance& d) {
  const VectorSpace space(d.q, d.v);
  json j = json::object();
  j["pass"] = r.pass;
  j["mode"] = r.sampled ? "sampled" : "full";
  if (r.sampled) {
    j["samples"] = r.samples;
    j["seed"] = r.seed;
  }
  j["kind"] = to_string(d.kind);
  j["blocks"] = big_to_json(r.blocks);
  j["simple"] = r.simple;
  json classes = json::array();
  for (const auto& c : r.classes) {
    json h = json::array();
    for (const auto& [count, n] : c.histogram) h.push_back({count, n});
    const auto obs = c.observed();
    classes.push_back({{"class", c.name},
                       {"expected", c.expected ? big_to_json(*c.expected) : json(nullptr)},
                       {"observed", obs ? json(*obs) : json(nullptr)},
                       {"pairs", c.pairs},
                       {"histogram", h}});
  }
  j["classes"] = classes;
  j["bad_pairs"] = r.bad_pairs;
  json w = json::array();
  for (const auto& x : r.witnesses)
    w.push_back({{"pair", subspace_to_json(space, x.pair)},
                 {"class", x.cls},
                 {"count", x.count},
                 {"expected", big_to_json(x.expected)}});
  j["witnesses"] = w;
  json gv = json::array();
  for (const auto& x : r.group_violations)
    gv.push_back({{"block", subspace_to_json(space, x.block)},
                  {"group", x.group},
                  {"intersection_dim", x.intersection_dim}});
  j["group_violations"] = {{"count", r.group_violation_count}, {"examples", gv}};
  j["problems"] = r.problems;
  return j;
}

}  // namespace qdesign
