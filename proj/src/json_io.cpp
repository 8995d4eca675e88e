#include "freiman/json_io.hpp"

#include "freiman/errors.hpp"

#include <charconv>
#include <fstream>
#include <limits>

namespace freiman::json_io {

namespace {

std::int64_t as_int(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw InputError("field '" + field + "': expected an integer");
  return j.get<std::int64_t>();
}

std::vector<PairRelation::IndexPair> parse_pairs(const Json& j, std::size_t rows, std::size_t cols,
                                                 const std::string& field) {
  if (!j.is_array()) throw InputError("field '" + field + "': expected an array of [i, j] pairs");
  std::vector<PairRelation::IndexPair> pairs;
  pairs.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto& p = j[k];
    const auto name = field + "[" + std::to_string(k) + "]";
    if (!p.is_array() || p.size() != 2) throw InputError("field '" + name + "': expected [i, j]");
    const auto i = as_int(p[0], name);
    const auto c = as_int(p[1], name);
    if (i < 0 || c < 0 || static_cast<std::size_t>(i) >= rows || static_cast<std::size_t>(c) >= cols) {
      throw InputError("field '" + name + "': index outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    pairs.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(c));
  }
  return pairs;
}

Json exact_part(const boost::multiprecision::mpz_int& z) {
  if (z >= std::numeric_limits<std::int64_t>::min() && z <= std::numeric_limits<std::int64_t>::max()) {
    return z.convert_to<std::int64_t>();
  }
  return z.str();
}

Json checks_to_json(const std::vector<Check>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) {
    const char* cmp = "<=";
    switch (c.cmp) {
      case Comparison::less: cmp = "<"; break;
      case Comparison::less_equal: cmp = "<="; break;
      case Comparison::greater_equal: cmp = ">="; break;
      case Comparison::equal: cmp = "=="; break;
    }
    out.push_back({{"name", c.name}, {"measured", c.measured}, {"bound", c.bound}, {"cmp", cmp}, {"holds", c.holds}});
  }
  return out;
}

}  // namespace

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("input file '" + path + "' is not valid JSON: " + e.what());
  }
}

IntSet parse_int_set(const Json& j, const std::string& field) {
  if (!j.is_array()) throw InputError("field '" + field + "': expected an array of integers");
  std::vector<std::int64_t> v;
  v.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(as_int(j[k], field + "[" + std::to_string(k) + "]"));
  const auto size = v.size();
  auto s = IntSet::from_unsorted(std::move(v));
  if (s.size() != size) throw InputError("field '" + field + "': repeated element");
  return s;
}

PairRelation parse_relation(const Json& j, std::size_t rows, std::size_t cols, const std::string& field) {
  if (j.is_string()) {
    if (j.get<std::string>() == "full") return PairRelation::full(rows, cols);
    throw InputError("field '" + field + "': expected \"full\" or a pair list");
  }
  if (j.is_array()) return PairRelation::excluding(rows, cols, parse_pairs(j, rows, cols, field));
  if (j.is_object()) {
    if (j.contains("excluded")) {
      return PairRelation::excluding(rows, cols, parse_pairs(j["excluded"], rows, cols, field + ".excluded"));
    }
    if (j.contains("included")) {
      return PairRelation::including(rows, cols, parse_pairs(j["included"], rows, cols, field + ".included"));
    }
  }
  throw InputError("field '" + field + "': expected \"full\", a pair list, or {excluded|included: [...]}");
}

Exact parse_exact(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Exact(j.get<std::int64_t>());
  if (j.is_array() && j.size() == 2) {
    const auto num = parse_exact(j[0], field + ".numerator");
    const auto den = parse_exact(j[1], field + ".denominator");
    if (den == 0) throw InputError("field '" + field + "': zero denominator");
    return num / den;
  }
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    try {
      if (text.find_first_of(".eE") == std::string::npos) return Exact(text);
    } catch (const std::exception&) {
      throw InputError("field '" + field + "': malformed number '" + text + "'");
    }
    return to_exact(parse_rational(text));
  }
  if (j.is_number_float()) throw InputError("field '" + field + "': use an integer, \"p/q\" or [p, q], not a float");
  throw InputError("field '" + field + "': expected a rational");
}

IntervalUnion parse_interval_union(const Json& j, const std::string& field) {
  if (!j.is_array()) throw InputError("field '" + field + "': expected an array of [lo, hi] intervals");
  std::vector<Interval> spans;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto name = field + "[" + std::to_string(k) + "]";
    if (!j[k].is_array() || j[k].size() != 2) throw InputError("field '" + name + "': expected [lo, hi]");
    auto lo = parse_exact(j[k][0], name + ".lo");
    auto hi = parse_exact(j[k][1], name + ".hi");
    if (hi < lo) throw InputError("field '" + name + "': hi below lo");
    spans.push_back({std::move(lo), std::move(hi)});
  }
  return IntervalUnion(std::move(spans));
}

PairInput parse_pair_input(const Json& j) {
  PairInput in;
  if (j.is_array()) {
    in.a = parse_int_set(j, "A");
    return in;
  }
  if (!j.is_object() || !j.contains("A")) throw InputError("field 'A': missing");
  in.a = parse_int_set(j["A"], "A");
  if (j.contains("B")) in.b = parse_int_set(j["B"], "B");
  if (j.contains("gamma")) {
    const auto cols = in.b ? in.b->size() : in.a.size();
    in.gamma = parse_relation(j["gamma"], in.a.size(), cols, "gamma");
  }
  return in;
}

Json to_json(const IntSet& s) { return Json(s.values()); }

Json to_json(const PairRelation& gamma) {
  if (gamma.is_full()) return "full";
  auto pairs_json = [](const std::vector<PairRelation::IndexPair>& pairs) {
    Json out = Json::array();
    for (auto [i, j] : pairs) out.push_back({i, j});
    return out;
  };
  if (gamma.encoding() == PairRelation::Encoding::complement) return Json{{"excluded", pairs_json(gamma.excluded_pairs())}};
  return Json{{"included", pairs_json(gamma.included_pairs())}};
}

Json to_json(const ArithProgression& p) {
  return {{"start", p.start()}, {"difference", p.difference()}, {"count", p.count()}};
}

Json to_json(const Exact& x) {
  return Json::array({exact_part(boost::multiprecision::numerator(x)), exact_part(boost::multiprecision::denominator(x))});
}

Json to_json(const IntervalUnion& u) {
  Json out = Json::array();
  for (const auto& s : u.intervals()) out.push_back({to_json(s.lo), to_json(s.hi)});
  return out;
}

Json to_json(const RecoveryReport& r) {
  Json j;
  j["kind"] = r.kind;
  j["epsilon"] = to_string(r.epsilon);
  j["P"] = to_json(r.p);
  if (r.q) j["Q"] = to_json(*r.q);
  j["coverage_A"] = r.coverage_a;
  if (r.coverage_b) j["coverage_B"] = *r.coverage_b;
  j["hypothesis_certified"] = r.hypothesis_certified;
  j["conclusion_certified"] = r.conclusion_certified;
  j["hypothesis"] = checks_to_json(r.hypothesis);
  j["conclusion"] = checks_to_json(r.conclusion);
  Json diag = Json::object();
  for (const auto& q : r.diagnostics) diag[q.name] = q.value;
  j["diagnostics"] = diag;
  if (!r.parts.empty()) {
    Json parts = Json::array();
    for (const auto& p : r.parts) parts.push_back(to_json(p));
    j["parts"] = parts;
  }
  return j;
}

Json to_json(const BoundResult& r) {
  return {{"instance_key", r.instance_key}, {"measured", r.measured}, {"bound", r.bound}, {"slack", r.slack},
          {"pass", r.pass}};
}

Json to_json(const VerifySummary& s) {
  Json j = {{"instances", s.instances},   {"checked", s.checked},
            {"skipped", s.skipped},       {"samples", s.samples},
            {"rejected_samples", s.rejected_samples}, {"violations", s.violations}};
  if (s.worst) j["worst"] = to_json(*s.worst);
  return j;
}

Json to_json(const DiscretizationResult& d) {
  return {{"eta", to_json(d.eta)},
          {"delta", to_json(d.delta)},
          {"cells", to_json(d.cells)},
          {"approximation", to_json(d.approximation)},
          {"symmetric_difference", to_json(d.symmetric_difference)}};
}

Json to_json(const IntervalRecovery& r) {
  return {{"J", to_json(r.j)},
          {"length_ratio", to_json(r.length_ratio)},
          {"coverage_ratio", to_json(r.coverage_ratio)},
          {"discretization", to_json(r.discretization)},
          {"report", to_json(r.report)}};
}

Json counterexample_record(const BoundResult& result, const Json& header) {
  const auto inst = materialize_instance(result.instance_key);
  Json j;
  j["header"] = header;
  j["result"] = to_json(result);
  j["proposition"] = to_string(inst.prop);
  j[inst.mode == InstanceMode::integer_line ? "ell" : "modulus"] = inst.size;
  j["A"] = to_json(inst.a);
  j["B"] = to_json(inst.b);
  j["gamma"] = to_json(inst.gamma);
  j["K"] = to_string(inst.k);
  j["s"] = inst.s;
  if (inst.t) j["t"] = *inst.t;
  if (inst.sample_seed) j["sample_seed"] = *inst.sample_seed;
  j["recomputed"] = {{"measured", inst.measured}, {"bound", inst.bound}};
  return j;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv_row(std::ostream& out, const BoundResult& r) {
  out << r.instance_key << ',' << format_double(r.measured) << ',' << format_double(r.bound) << ','
      << format_double(r.slack) << ',' << (r.pass ? "true" : "false") << '\n';
}

}  // namespace freiman::json_io
