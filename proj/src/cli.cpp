#include "freiman/cli.hpp"

#include "freiman/continuous.hpp"
#include "freiman/errors.hpp"
#include "freiman/json_io.hpp"
#include "freiman/lab.hpp"
#include "freiman/recovery.hpp"
#include "freiman/regularity.hpp"
#include "freiman/sumset.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace freiman::cli {

namespace {

using json_io::Json;

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json params_json(const JobConfig& c) {
  Json p;
  p["command"] = c.command;
  p["mode"] = c.mode;
  p["input"] = c.input;
  p["output"] = c.output;
  p["format"] = c.format;
  p["epsilon"] = c.epsilon;
  p["eta"] = c.eta;
  p["delta"] = c.delta;
  p["t"] = c.t ? Json(*c.t) : Json(nullptr);
  p["k"] = c.k;
  p["s"] = c.s;
  p["seed"] = c.seed;
  p["budget"] = c.budget ? Json(*c.budget) : Json(nullptr);
  p["workers"] = c.workers;
  p["prop"] = c.prop;
  p["family"] = c.family;
  p["lmin"] = c.lmin;
  p["lmax"] = c.lmax;
  p["nmin"] = c.nmin;
  p["nmax"] = c.nmax;
  p["samples"] = c.samples;
  p["keep"] = c.keep;
  p["modulus"] = c.modulus ? Json(*c.modulus) : Json(nullptr);
  p["cex_dir"] = c.cex_dir;
  return p;
}

// Worker count changes nothing in the output, so it is left out of the header.
Json header_json(const JobConfig& c) {
  Json params = params_json(c);
  params.erase("workers");
  Json h;
  h["tool"] = kToolName;
  h["version"] = kToolVersion;
  h["params"] = params;
  return h;
}

Rational require_rational(const std::string& text, const std::string& flag) {
  if (text.empty()) throw InputError("missing required parameter " + flag);
  try {
    return parse_rational(text);
  } catch (const InputError& e) {
    throw InputError("parameter " + flag + ": " + e.what());
  }
}

Exact require_exact(const std::string& text, const std::string& flag) {
  if (text.empty()) throw InputError("missing required parameter " + flag);
  return json_io::parse_exact(Json(text), flag);
}

Json require_input(const JobConfig& c) {
  if (c.input.empty()) throw InputError("missing required parameter --input");
  return json_io::read_file(c.input);
}

std::vector<Rational> k_values(const JobConfig& c) {
  std::vector<Rational> out;
  for (const auto& k : c.k) out.push_back(require_rational(k, "--k"));
  return out;
}

Rational single_k(const JobConfig& c) {
  if (c.k.size() != 1) throw InputError("parameter --k: expected exactly one value");
  return require_rational(c.k.front(), "--k");
}

std::int64_t single_s(const JobConfig& c) {
  if (c.s.size() > 1) throw InputError("parameter --s: expected one value");
  return c.s.empty() ? 0 : c.s.front();
}

// Opens the report destination; `out` when no path is given.
class Destination {
 public:
  Destination(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw InputError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void emit_document(const JobConfig& c, Json result, std::ostream& out) {
  if (c.format != "json") throw InputError("parameter --format: '" + c.format + "' is only valid for verify and search");
  Json doc;
  doc["header"] = header_json(c);
  if (!c.no_timestamp) doc["header"]["generated"] = timestamp();
  doc["result"] = std::move(result);
  Destination dest(c.output, out);
  dest.get() << doc.dump(2) << '\n';
}

InstanceSpec lab_spec(const JobConfig& c) {
  if (c.prop.empty()) throw InputError("missing required parameter --prop");
  InstanceSpec spec;
  spec.prop = parse_proposition(c.prop);
  if (c.family == "intervals") {
    spec.family = InstanceFamily::intervals;
  } else if (c.family != "all") {
    throw InputError("parameter --family: expected all or intervals");
  }
  spec.size_min = c.lmin;
  spec.size_max = c.lmax;
  spec.n_min = c.nmin;
  spec.n_max = c.nmax;
  spec.k_values = k_values(c);
  spec.s_values = c.s.empty() ? std::vector<std::int64_t>{0} : c.s;
  spec.samples = c.samples;
  spec.seed = c.seed;
  return spec;
}

// Writes the stream header for verify/search reports.
void write_stream_header(const JobConfig& c, std::ostream& out) {
  const Json h = header_json(c);
  if (c.format == "csv") {
    out << "# tool=" << kToolName << " version=" << kToolVersion << '\n';
    out << "# params=" << h["params"].dump() << '\n';
    if (!c.no_timestamp) out << "# generated=" << timestamp() << '\n';
    out << json_io::kCsvHeader << '\n';
  } else if (c.format == "json") {
    out << Json{{"header", h}}.dump() << '\n';
    if (!c.no_timestamp) out << Json{{"generated", timestamp()}}.dump() << '\n';
  } else {
    throw InputError("parameter --format: expected json or csv");
  }
}

void write_result(const JobConfig& c, const BoundResult& r, std::ostream& out) {
  if (c.format == "csv") {
    json_io::write_csv_row(out, r);
  } else {
    out << json_io::to_json(r).dump() << '\n';
  }
}

void write_trailer(const JobConfig& c, const Json& summary, std::ostream& out) {
  if (c.format == "csv") {
    out << "# summary=" << summary.dump() << '\n';
  } else {
    out << Json{{"summary", summary}}.dump() << '\n';
  }
}

std::string file_name_for(const std::string& key) {
  std::string name;
  for (char ch : key) {
    const bool plain = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '.' || ch == '=';
    name += plain ? ch : (ch == '+' ? 'p' : '_');
  }
  return name + ".json";
}

int run_verify(const JobConfig& c, std::ostream& out, std::ostream& err) {
  const auto spec = lab_spec(c);
  Destination dest(c.output, out);
  auto& stream = dest.get();
  write_stream_header(c, stream);
  std::vector<BoundResult> violations;
  const auto summary = enumerate_and_verify(
      spec,
      [&](const BoundResult& r) {
        write_result(c, r, stream);
        if (!r.pass) violations.push_back(r);
      },
      c.workers, c.budget.value_or(2'000'000'000ULL));
  write_trailer(c, json_io::to_json(summary), stream);
  if (violations.empty()) return kExitOk;

  std::filesystem::create_directories(c.cex_dir);
  const Json header = header_json(c);
  for (const auto& v : violations) {
    const auto path = std::filesystem::path(c.cex_dir) / file_name_for(v.instance_key);
    std::ofstream f(path);
    f << json_io::counterexample_record(v, header).dump(2) << '\n';
  }
  err << "bound violated on " << violations.size() << " instance(s); records written to " << c.cex_dir << '\n';
  return kExitViolation;
}

int run_search(const JobConfig& c, std::ostream& out) {
  const auto spec = lab_spec(c);
  if (c.keep < 0) throw InputError("parameter --keep: must be non-negative");
  const auto budget = c.budget.value_or(100'000ULL);
  if (budget == 0) throw InputError("parameter --budget: must be positive");
  const auto ranked = extremal_search(spec, budget, static_cast<std::size_t>(c.keep), c.workers);
  Destination dest(c.output, out);
  auto& stream = dest.get();
  write_stream_header(c, stream);
  for (const auto& r : ranked) write_result(c, r, stream);
  write_trailer(c, Json{{"reported", ranked.size()}}, stream);
  return kExitOk;
}

int run_sumset(const JobConfig& c, std::ostream& out) {
  const auto in = json_io::parse_pair_input(require_input(c));
  const IntSet& a = in.a;
  const IntSet& b = in.b ? *in.b : in.a;
  const auto stats = sumset_stats(a, b);
  Json r;
  r["A_size"] = a.size();
  r["B_size"] = b.size();
  r["sumset"] = json_io::to_json(stats.sumset);
  r["sumset_size"] = stats.sumset.size();
  r["doubling"] = stats.doubling;
  Json hist = Json::array();
  for (const auto& e : stats.histogram.entries()) hist.push_back({e.x, e.r});
  r["histogram"] = hist;
  if (in.gamma) {
    const auto restricted = restricted_sumset(a, b, *in.gamma);
    r["restricted_sumset"] = json_io::to_json(restricted);
    r["restricted_size"] = restricted.size();
  }
  const auto triple = triple_count(a);
  r["triple_count"] = triple.count;
  r["C_A"] = to_string(triple.c);
  if (c.t) {
    r["pollard"] = {{"t", *c.t},
                    {"partial_sum", pollard_partial_sum(stats.histogram, *c.t)},
                    {"bound", a.size() == b.size() ? Json(*c.t * (2 * static_cast<std::int64_t>(a.size()) - *c.t))
                                                   : Json(nullptr)}};
  }
  if (!c.k.empty()) {
    Json popular = Json::array();
    for (const auto& k : k_values(c)) popular.push_back({{"K", to_string(k)}, {"count", popular_support(a, b, k)}});
    r["popular"] = popular;
  }
  emit_document(c, r, out);
  return kExitOk;
}

int run_recover(const JobConfig& c, std::ostream& out) {
  if (c.mode == "interval") {
    const Json j = require_input(c);
    const auto a = json_io::parse_interval_union(j.is_object() && j.contains("A") ? j["A"] : j, "A");
    const auto rec = recover_interval(a, require_rational(c.epsilon, "--epsilon"), require_exact(c.eta, "--eta"),
                                      require_exact(c.delta, "--delta"));
    emit_document(c, json_io::to_json(rec), out);
    return kExitOk;
  }
  const auto in = json_io::parse_pair_input(require_input(c));
  const auto eps = require_rational(c.epsilon, "--epsilon");
  RecoveryReport report;
  if (c.mode == "additive") {
    const IntSet& b = in.b ? *in.b : in.a;
    const auto gamma = in.gamma ? *in.gamma : PairRelation::full(in.a.size(), b.size());
    report = recover_additive(in.a, b, gamma, eps);
  } else if (c.mode == "difference") {
    const auto gamma = in.gamma ? *in.gamma : PairRelation::full(in.a.size(), in.a.size());
    report = recover_difference(in.a, gamma, eps);
  } else if (c.mode == "centred") {
    report = recover_centred(in.a, eps);
  } else if (c.mode == "positive") {
    report = recover_positive_part(in.a, eps);
  } else {
    throw InputError("recover: unknown mode '" + c.mode + "' (additive, difference, centred, positive, interval)");
  }
  emit_document(c, json_io::to_json(report), out);
  return kExitOk;
}

int run_gamma(const JobConfig& c, std::ostream& out) {
  const auto in = json_io::parse_pair_input(require_input(c));
  const IntSet& a = in.a;
  const IntSet& b = in.b ? *in.b : in.a;
  Json r;
  if (c.mode == "from-pollard") {
    if (!c.t) throw InputError("missing required parameter --t");
    r["gamma"] = json_io::to_json(gamma_from_pollard(a, b, *c.t));
  } else if (c.mode == "from-popular") {
    const auto pop = gamma_from_popular(a, b, require_rational(c.eta, "--eta"));
    r["K"] = to_string(pop.k);
    r["gamma"] = json_io::to_json(pop.gamma);
  } else if (c.mode == "sample-regular") {
    const auto k = single_k(c);
    const auto s = single_s(c);
    PairRelation gamma;
    RegularityResult check;
    if (c.modulus) {
      const auto sa = reduce_residues(a, *c.modulus);
      const auto sb = reduce_residues(b, *c.modulus);
      gamma = sample_regular_relation_cyclic(sa, sb, *c.modulus, k, s, c.seed);
      check = check_regular_cyclic(sa, sb, gamma, *c.modulus, k, s);
    } else {
      gamma = sample_regular_relation(a, b, k, s, c.seed);
      check = check_regular(a, b, gamma, k, s);
    }
    r["gamma"] = json_io::to_json(gamma);
    r["regular"] = check.regular;
    r["max_defect"] = gamma.max_defect();
  } else {
    throw InputError("gamma: unknown mode '" + c.mode + "' (from-pollard, from-popular, sample-regular)");
  }
  emit_document(c, r, out);
  return kExitOk;
}

}  // namespace

int run(const JobConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.command == "verify") return run_verify(config, out, err);
    if (config.command == "search") return run_search(config, out);
    if (config.command == "sumset") return run_sumset(config, out);
    if (config.command == "recover") return run_recover(config, out);
    if (config.command == "gamma") return run_gamma(config, out);
    throw InputError("unknown command '" + config.command + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Restricted sumsets, robust Freiman-type recovery and bound verification"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);
  JobConfig c;
  std::optional<std::int64_t> t;
  std::optional<std::uint64_t> budget;
  std::optional<std::int64_t> modulus;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", c.input, "input JSON file");
    sub->add_option("--output", c.output, "report path (default stdout)");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--epsilon", c.epsilon, "epsilon (p/q, decimal or 1e-4 form)");
    sub->add_option("--eta", c.eta, "cell width or popularity fraction");
    sub->add_option("--delta", c.delta, "cell fill threshold");
    sub->add_option("--t,--pollard-t", t, "Pollard threshold t");
    sub->add_option("--k", c.k, "K value(s), comma separated")->delimiter(',');
    sub->add_option("--s", c.s, "defect bound(s), comma separated")->delimiter(',');
    sub->add_option("--seed", c.seed, "64-bit seed");
    sub->add_option("--budget", budget, "work budget");
    sub->add_option("--workers", c.workers, "worker threads");
    sub->add_option("--prop", c.prop, "proposition id");
    sub->add_option("--family", c.family, "all or intervals");
    sub->add_option("--lmin", c.lmin, "smallest ell (or modulus)");
    sub->add_option("--lmax", c.lmax, "largest ell (or modulus)");
    sub->add_option("--nmin", c.nmin, "smallest |A| (0: 3 on the line, 1 cyclic)");
    sub->add_option("--nmax", c.nmax, "largest |A|");
    sub->add_option("--samples", c.samples, "Gamma samples per (A, B, K, s)");
    sub->add_option("--keep", c.keep, "results kept by search");
    sub->add_option("--modulus", modulus, "work in Z/mZ (gamma sample-regular)");
    sub->add_option("--cex-dir", c.cex_dir, "counterexample directory");
    sub->add_flag("--no-timestamp", c.no_timestamp, "omit the generated timestamp");
  };

  auto* sumset = app.add_subcommand("sumset", "sumsets, representation counts, C(A), Pollard sums");
  common(sumset);
  auto* recover = app.add_subcommand("recover", "structure recovery pipelines");
  recover->add_option("mode", c.mode, "additive | difference | centred | positive | interval")->required();
  common(recover);
  auto* verify = app.add_subcommand("verify", "exhaustive bound verification");
  common(verify);
  auto* search = app.add_subcommand("search", "minimum-slack instance search");
  common(search);
  auto* gamma = app.add_subcommand("gamma", "relation constructors");
  gamma->add_option("mode", c.mode, "from-pollard | from-popular | sample-regular")->required();
  common(gamma);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }
  c.command = app.get_subcommands().front()->get_name();
  c.t = t;
  c.budget = budget;
  c.modulus = modulus;
  return run(c, std::cout, std::cerr);
}

}  // namespace freiman::cli
