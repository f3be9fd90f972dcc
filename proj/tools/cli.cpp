#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "mrft/errors.hpp"
#include "mrft/multiplier.hpp"
#include "mrft/profiles.hpp"
#include "mrft/transforms.hpp"
#include "mrft/verify.hpp"

namespace mrft::cli {
namespace {

using json = nlohmann::json;

struct RunConfig {
  std::string subcommand;
  std::string profile = "gaussian";
  std::string profile_file;
  std::string dims = "1";
  double rmin = 0.1;
  double rmax = 4.0;
  int points = 50;
  std::string spacing = "linear";
  std::string method = "direct";
  std::optional<double> tol;
  double rel_tol = 0.0;
  std::string out;
  std::uint64_t seed = 0;
  std::string suite = "all";
  int k = 5;
  std::string symbol = "demo";
  int n = 3;
  int max_order = 1;
  std::string form = "printed";
  double grid_lo = 1e-2;
  double grid_hi = 1e2;
  int per_decade = 8;
  std::string config;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

json json_number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

// --- config file ---------------------------------------------------------

template <class T>
void take(const json& doc, const char* key, T& dst) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  try {
    dst = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

void apply_config_file(RunConfig& c) {
  std::ifstream in(c.config);
  if (!in) throw ConfigError("cannot open config " + c.config);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be an object");
  static const std::vector<std::string> keys = {
      "profile", "profile_file", "dims",  "rmin",   "rmax", "points",    "spacing",  "method",
      "tol",     "rel_tol",      "out",   "seed",   "suite", "k",        "symbol",   "n",
      "max_order", "form",       "grid_lo", "grid_hi", "per_decade"};
  for (const auto& [key, value] : doc.items())
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown config key '" + key + "'");
  take(doc, "profile", c.profile);
  take(doc, "profile_file", c.profile_file);
  if (auto it = doc.find("dims"); it != doc.end()) {
    if (it->is_array()) {
      std::string s;
      for (const auto& d : *it) {
        if (!d.is_number_integer()) throw ConfigError("config key 'dims' has the wrong type");
        s += (s.empty() ? "" : ",") + std::to_string(d.get<int>());
      }
      c.dims = s;
    } else if (it->is_number_integer()) {
      c.dims = std::to_string(it->get<int>());
    } else {
      take(doc, "dims", c.dims);
    }
  }
  take(doc, "rmin", c.rmin);
  take(doc, "rmax", c.rmax);
  take(doc, "points", c.points);
  take(doc, "spacing", c.spacing);
  take(doc, "method", c.method);
  if (doc.contains("tol")) {
    double t = 0;
    take(doc, "tol", t);
    c.tol = t;
  }
  take(doc, "rel_tol", c.rel_tol);
  take(doc, "out", c.out);
  take(doc, "seed", c.seed);
  take(doc, "suite", c.suite);
  take(doc, "k", c.k);
  take(doc, "symbol", c.symbol);
  take(doc, "n", c.n);
  take(doc, "max_order", c.max_order);
  take(doc, "form", c.form);
  take(doc, "grid_lo", c.grid_lo);
  take(doc, "grid_hi", c.grid_hi);
  take(doc, "per_decade", c.per_decade);
}

// --- validated job -------------------------------------------------------

struct TransformJob {
  RadialProfile profile;
  DimensionSignature sig{{1}};
  Eigen::ArrayXd grid;
  Method method = Method::direct;
  QuadratureSpec spec;
  EvenForm form = EvenForm::printed;
};

Method parse_method(const std::string& s) {
  for (Method m : {Method::direct, Method::recursion, Method::bandlimited, Method::reference})
    if (method_name(m) == s) return m;
  throw ConfigError("unknown method '" + s + "'");
}

TransformJob make_transform_job(const RunConfig& c) {
  TransformJob job;
  job.sig = DimensionSignature::parse(c.dims);
  if (!c.profile_file.empty()) {
    job.profile = load_sampled_profile_file(c.profile_file);
    if (job.profile.m != job.sig.m()) throw ConfigError("sampled profile has a different number of axes than dims");
  } else {
    job.profile = catalog_get(c.profile, job.sig.m());
  }
  job.method = parse_method(c.method);
  if (c.points < 1) throw ConfigError("points must be >= 1");
  if (!(c.rmin >= 0.0) || !(c.rmax >= c.rmin)) throw ConfigError("need 0 <= rmin <= rmax");
  if (c.spacing == "linear") {
    job.grid = Eigen::ArrayXd::LinSpaced(c.points, c.rmin, c.rmax);
  } else if (c.spacing == "log") {
    if (!(c.rmin > 0.0)) throw ConfigError("log spacing needs rmin > 0");
    job.grid = Eigen::ArrayXd::LinSpaced(c.points, std::log(c.rmin), std::log(c.rmax)).exp();
  } else {
    throw ConfigError("spacing must be linear or log");
  }
  if (c.points == 1) job.grid = Eigen::ArrayXd::Constant(1, c.rmin);
  if ((job.method == Method::recursion || job.method == Method::bandlimited) && !(c.rmin > 0.0))
    throw ConfigError(c.method + " needs rmin > 0");
  if (job.method == Method::bandlimited && !job.profile.band_limit)
    throw ConfigError("profile has no band limit");
  if (job.method == Method::reference && !c.profile_file.empty())
    throw ConfigError("sampled profiles have no reference values");
  if (c.form == "printed")
    job.form = EvenForm::printed;
  else if (c.form == "product_rule")
    job.form = EvenForm::product_rule;
  else
    throw ConfigError("form must be printed or product_rule");
  job.spec.tol = c.tol.value_or(1e-10);
  job.spec.rel_tol = c.rel_tol;
  job.spec.validate();
  return job;
}

// --- transform routes ----------------------------------------------------

std::vector<Eigen::ArrayXd> axis_grids(const TransformJob& job) {
  return std::vector<Eigen::ArrayXd>(job.sig.m(), job.grid);
}

SampledTransform empty_like(const TransformJob& job) {
  SampledTransform t;
  t.signature = job.sig;
  t.method = job.method;
  t.radii = axis_grids(job);
  Eigen::Index size = 1;
  for (const auto& g : t.radii) size *= g.size();
  t.values = Eigen::ArrayXd::Zero(size);
  t.errors = Eigen::ArrayXd::Constant(size, std::nan(""));
  t.converged = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(size, true);
  return t;
}

// Analytic partials of F_{1..1} (odd) or F_{2..2} (even), else differences of direct quadrature.
DerivativeProvider base_provider(const TransformJob& job, bool odd) {
  const RadialProfile& p = job.profile;
  const PartialField& analytic = odd ? p.phi_hat : p.f2;
  if (analytic) return DerivativeProvider::analytic(p.m, analytic);
  const DimensionSignature base(std::vector<int>(p.m, odd ? 1 : 2));
  QuadratureSpec spec = job.spec;
  spec.tol = std::min(spec.tol, 1e-12);
  ScalarField f = [profile = p, base, spec](std::span<const double> x) {
    std::vector<Eigen::ArrayXd> radii;
    for (double r : x) radii.push_back(Eigen::ArrayXd::Constant(1, r));
    return direct_transform(profile, base, radii, spec).values(0);
  };
  return DerivativeProvider::finite_difference(p.m, f);
}

SampledTransform run_recursion(const TransformJob& job) {
  const bool odd = job.sig.all_odd();
  if (!odd && !job.sig.all_even()) throw CapabilityError("recursion needs all-odd or all-even dims");
  const DerivativeProvider prov = base_provider(job, odd);
  std::vector<int> k(job.sig.m());
  for (int j = 0; j < job.sig.m(); ++j) k[j] = job.sig.k(j);
  SampledTransform t = empty_like(job);
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const std::vector<double> x = t.point(i);
    t.values(i) = odd ? recursion_odd(prov, k, x) : recursion_even(prov, k, x);
  }
  return t;
}

SampledTransform run_bandlimited(const TransformJob& job) {
  const bool odd = job.sig.all_odd();
  if (!odd && !job.sig.all_even()) throw CapabilityError("band-limited formulas need all-odd or all-even dims");
  const DerivativeProvider prov = base_provider(job, true);
  const double A = *job.profile.band_limit;
  std::vector<int> k(job.sig.m());
  for (int j = 0; j < job.sig.m(); ++j) k[j] = job.sig.k(j);
  SampledTransform t = empty_like(job);
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const std::vector<double> x = t.point(i);
    double v;
    if (job.sig.m() > 1) {
      v = bandlimited_multiradial(prov, A, k, odd ? Parity::odd : Parity::even, x, job.spec, job.form);
    } else if (odd) {
      v = bandlimited_odd_1d(prov, A, k[0], x[0]);
    } else if (k[0] == 0) {
      auto dphi = [&prov](double w) {
        const double pt[1] = {w};
        const int o[1] = {1};
        return prov(pt, o);
      };
      v = bandlimited_f2(dphi, A, x[0], job.spec);
    } else {
      v = bandlimited_even_1d(prov, A, k[0], x[0], job.spec, job.form);
    }
    t.values(i) = v;
  }
  return t;
}

SampledTransform run_reference(const TransformJob& job) {
  SampledTransform t = empty_like(job);
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const std::vector<double> x = t.point(i);
    t.values(i) = reference_value(job.profile.name, job.sig, x).candidates.at(0).value;
  }
  return t;
}

SampledTransform compute(const TransformJob& job) {
  switch (job.method) {
    case Method::direct: return direct_transform(job.profile, job.sig, axis_grids(job), job.spec);
    case Method::recursion: return run_recursion(job);
    case Method::bandlimited: return run_bandlimited(job);
    case Method::reference: return run_reference(job);
  }
  throw CapabilityError("unknown method");
}

// --- subcommands ---------------------------------------------------------

int cmd_transform(const RunConfig& c, const TransformJob& job, std::ostream& out) {
  const SampledTransform t = compute(job);
  for (int j = 0; j < job.sig.m(); ++j) out << "r_" << j + 1 << ",";
  out << "value,error_estimate,converged,method\n";
  const std::string method = method_name(job.method);
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    for (double r : t.point(i)) out << num(r) << ",";
    out << num(t.values(i)) << "," << num(t.errors(i)) << "," << (t.converged(i) ? "true" : "false") << ","
        << method << "\n";
  }
  (void)c;
  return t.all_converged() ? ok : partial;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  VerifyOptions o;
  o.seed = c.seed;
  if (c.tol) o.tol = *c.tol;
  const std::vector<CheckResult> results = run_suite(c.suite, o);
  out << "suite,check,status,measured,tolerance,detail\n";
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    out << r.suite << "," << csv_field(r.name) << "," << (r.passed ? "pass" : "fail") << "," << num(r.measured) << ","
        << num(r.tolerance) << "," << csv_field(r.detail) << "\n";
  }
  return all ? ok : partial;
}

int cmd_coeffs(const RunConfig& c, std::ostream& out) {
  const CoefficientTable table = coefficient_table(c.k);
  out << "k,l,c\n";
  for (int k = 1; k <= c.k; ++k)
    for (int l = 1; l <= k; ++l) out << k << "," << l << "," << format_rational(table.at(k, l)) << "\n";
  return ok;
}

int cmd_bench(const RunConfig& c, const TransformJob& base, std::ostream& out) {
  std::vector<Method> methods = {Method::direct, Method::recursion};
  if (base.profile.band_limit) methods.push_back(Method::bandlimited);
  out << "method,dims,points,wall_time_s,max_deviation\n";
  Eigen::ArrayXd reference;
  bool all = true;
  for (Method m : methods) {
    TransformJob job = base;
    job.method = m;
    const auto t0 = std::chrono::steady_clock::now();
    const SampledTransform t = compute(job);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (m == Method::direct) {
      reference = t.values;
      all = t.all_converged();
    }
    const double dev = (t.values - reference).abs().maxCoeff();
    out << method_name(m) << "," << csv_field(job.sig.str()) << "," << t.size() << "," << num(wall) << "," << num(dev)
        << "\n";
  }
  (void)c;
  return all ? ok : partial;
}

json grid_max_json(const GridMax& g) {
  return {{"value", json_number(g.value)}, {"xi", g.xi}, {"eta", g.eta}, {"converged", g.converged},
          {"skipped", g.skipped}};
}

std::string order_key(const std::pair<int, int>& o) {
  return std::to_string(o.first) + "," + std::to_string(o.second);
}

json seminorm_json(const SeminormReport& s) {
  json entries = json::object();
  for (const auto& [o, g] : s.entries) entries[order_key(o)] = grid_max_json(g);
  return {{"derivatives", s.derivatives},
          {"grid", {{"lo", s.grid.lo}, {"hi", s.grid.hi}, {"per_decade", s.grid.per_decade},
                    {"settle_tol", s.grid.settle_tol}}},
          {"entries", entries}};
}

int cmd_multiplier(const RunConfig& c, std::ostream& out) {
  const BilinearSymbol& symbol = symbol_get(c.symbol);
  LogGrid grid;
  grid.lo = c.grid_lo;
  grid.hi = c.grid_hi;
  grid.per_decade = c.per_decade;
  const PreservationReport r = preservation_report(symbol, c.n, c.max_order, grid);
  json mn = json::object(), ratios = json::object();
  for (const auto& [o, g] : r.mn_bounds) mn[order_key(o)] = grid_max_json(g);
  for (const auto& [o, v] : r.ratios) ratios[order_key(o)] = json_number(v);
  json doc = {{"symbol", r.symbol},        {"n", r.n},
              {"max_order", r.max_order},  {"base", seminorm_json(r.base)},
              {"lifted", seminorm_json(r.lifted)}, {"mn_bounds", mn},
              {"ratios", ratios},          {"preserved", r.preserved}};
  out << doc.dump(2) << "\n";
  return r.preserved ? ok : partial;
}

// --- error records -------------------------------------------------------

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "invalid_config";
  if (dynamic_cast<const FormatError*>(&e)) return "format";
  if (dynamic_cast<const LookupError*>(&e)) return "lookup";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const CapabilityError*>(&e)) return "capability";
  if (dynamic_cast<const BudgetError*>(&e)) return "budget";
  if (dynamic_cast<const EvaluationError*>(&e)) return "evaluation";
  return "internal";
}

int fail(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
  return code;
}

void validate(const RunConfig& c) {
  if (c.tol && !(*c.tol > 0.0)) throw ConfigError("tol must be positive");
  if (!(c.rel_tol >= 0.0)) throw ConfigError("rel_tol must be >= 0");
  if (c.subcommand == "verify" && c.suite != "all") {
    const auto names = suite_names();
    if (std::find(names.begin(), names.end(), c.suite) == names.end())
      throw ConfigError("unknown suite '" + c.suite + "'");
  }
  if (c.subcommand == "coeffs" && (c.k < 1 || c.k > 20)) throw ConfigError("k must be in 1..20");
  if (c.subcommand == "multiplier-check") {
    const BilinearSymbol& s = symbol_get(c.symbol);
    if (!s.bi_even) throw ConfigError("symbol '" + c.symbol + "' is not even in each variable");
    if (c.n != 3 && c.n != 5) throw ConfigError("n must be 3 or 5");
    if (c.max_order < 0 || c.max_order > 2) throw ConfigError("max_order must be in 0..2");
    if (!(c.grid_lo > 0.0) || !(c.grid_hi > c.grid_lo) || c.per_decade < 1)
      throw ConfigError("need 0 < grid_lo < grid_hi and per_decade >= 1");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Fourier transforms of multiradial functions", "mrft"};
  app.require_subcommand(1);
  app.add_option("--config", c.config, "JSON file whose keys override flags");
  app.add_option("--out", c.out, "output path (stdout when omitted)");
  app.add_option("--seed", c.seed, "seed for randomized checks");
  app.add_option("--tol", c.tol, "absolute quadrature tolerance");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config);
    sub->add_option("--out", c.out);
    sub->add_option("--seed", c.seed);
    sub->add_option("--tol", c.tol);
  };
  auto add_profile = [&](CLI::App* sub) {
    sub->add_option("--profile", c.profile, "catalog profile");
    sub->add_option("--profile-file", c.profile_file, "sampled-profile JSON");
    sub->add_option("--dims", c.dims, "dimensions, e.g. 3 or 3,1");
    sub->add_option("--rmin", c.rmin);
    sub->add_option("--rmax", c.rmax);
    sub->add_option("--points", c.points, "radii per axis");
    sub->add_option("--spacing", c.spacing, "linear or log");
    sub->add_option("--rel-tol", c.rel_tol);
    sub->add_option("--form", c.form, "even band-limited form: printed or product_rule");
  };

  CLI::App* transform = app.add_subcommand("transform", "tabulate a transform on a radius grid");
  add_common(transform);
  add_profile(transform);
  transform->add_option("--method", c.method, "direct, recursion, bandlimited or reference");

  CLI::App* verify = app.add_subcommand("verify", "run invariant suites");
  add_common(verify);
  verify->add_option("--suite", c.suite);

  CLI::App* coeffs = app.add_subcommand("coeffs", "exact recursion coefficients");
  add_common(coeffs);
  coeffs->add_option("--k", c.k, "largest k (<= 20)");

  CLI::App* bench = app.add_subcommand("bench", "time the transform routes");
  add_common(bench);
  add_profile(bench);

  CLI::App* mult = app.add_subcommand("multiplier-check", "seminorm preservation of a lifted symbol");
  add_common(mult);
  mult->add_option("--symbol", c.symbol);
  mult->add_option("--n", c.n);
  mult->add_option("--max-order", c.max_order);
  mult->add_option("--grid-lo", c.grid_lo);
  mult->add_option("--grid-hi", c.grid_hi);
  mult->add_option("--per-decade", c.per_decade);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return ok;
    }
    return fail(err, "invalid_config", e.what(), invalid_config);
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  std::optional<TransformJob> job;
  try {
    if (!c.config.empty()) apply_config_file(c);
    validate(c);
    if (c.subcommand == "transform" || c.subcommand == "bench") job = make_transform_job(c);
  } catch (const std::exception& e) {
    return fail(err, error_kind(e), e.what(), invalid_config);
  }

  std::ostringstream buffer;
  int code = ok;
  try {
    if (c.subcommand == "transform") code = cmd_transform(c, *job, buffer);
    else if (c.subcommand == "verify") code = cmd_verify(c, buffer);
    else if (c.subcommand == "coeffs") code = cmd_coeffs(c, buffer);
    else if (c.subcommand == "bench") code = cmd_bench(c, *job, buffer);
    else code = cmd_multiplier(c, buffer);
  } catch (const std::exception& e) {
    return fail(err, error_kind(e), e.what(), computation_error);
  }

  if (c.out.empty()) {
    out << buffer.str();
    return code;
  }
  const std::filesystem::path target(c.out), tmp(c.out + ".tmp");
  std::error_code ec;
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << buffer.str();
    if (!f.flush()) {
      std::filesystem::remove(tmp, ec);
      return fail(err, "io", "cannot write " + tmp.string(), computation_error);
    }
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    return fail(err, "io", "cannot rename to " + target.string(), computation_error);
  }
  return code;
}

}  // namespace mrft::cli
