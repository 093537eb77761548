#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qcont/bounds.hpp"
#include "qcont/channels.hpp"
#include "qcont/filtered.hpp"
#include "qcont/integral.hpp"
#include "qcont/io.hpp"
#include "qcont/lab.hpp"
#include "qcont/report.hpp"
#include "qcont/version.hpp"

namespace qcont::cli {

namespace {

constexpr const char* kGrammar =
    "usage:\n"
    "  qcont divergence {relent|dmax|hockey --gamma G|tracedist|condent|mutinfo|entropy} FILES\n"
    "  qcont integral RHO SIGMA [--tol T]\n"
    "  qcont bound {thm1|thm1s|fa|ifa|eq14|afw|wilde|mi|chain|prop6|prop7|prop9} FLAGS\n"
    "  qcont check {thm1|eq14|marginal-correction|afw|wilde|mi|ifa|prop9|cor10|lemma3} FILES [FLAGS]\n"
    "  qcont channel {dmax|dmax-unstab|diamond|complement|utheta|icinfo|degrade} FILES [FLAGS]\n"
    "  qcont filtered {norm|relent|dmax} FILES\n"
    "  qcont fuzz {thm1|eq14|wilde|mi_conjecture|prop9|lemma3} FLAGS\n"
    "  qcont tightness\n";

constexpr const char* kCsvColumns =
    "CSV columns (--format csv), one row per report:\n"
    "  bound, check, tightness: equation_tag,lhs,rhs,slack,applicable,reason\n"
    "  divergence:              quantity,value\n"
    "  integral:                value,estimated_error,evaluations,truncation_gamma,"
    "second_truncation_gamma\n"
    "  channel degrade:         eps_lower,eps_upper,eps,u_theta,u_theta_gap,ic_lower,"
    "q_upper_utheta,q_upper_ic,q_upper_utheta_refined,q_upper_ic_refined\n"
    "  channel (other):         quantity,value\n"
    "  filtered:                quantity,value,lower_bound\n"
    "  fuzz:                    campaign,samples,violations,max_violation,min_slack,seed\n"
    "Numbers carry 12 significant digits; infinities print as inf/-inf.\n";

class Usage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::string format = "json";
  std::string output;
};

// Every flag any subcommand may take; `given` tells which ones were set.
struct Flags {
  double gamma = 1.0, tol = 1e-8, M = 0.0, eps = 0.0, lmax = 1.0, dmax_term = 0.0, q = 0.0;
  int d = 0, dA = 0, dB = 0, sn = 0, restarts = 8, dmax_restarts = 20;
  std::uint64_t seed = 0;
  bool free_set_dmax = false, regions = false, biased = false;
  long samples = 1000;
  int workers = 1, dmin = 2, dmax = 4, dim = 2, generators = 3, channels = 2;
  int injection_period = 1000;
  double opt_tol = 1e-9;
  std::multimap<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const {
    auto [lo, hi] = opts.equal_range(name);
    return std::any_of(lo, hi, [](const auto& kv) { return kv.second->count() > 0; });
  }
  template <class T>
  T need(const std::string& name, const T& value) const {
    if (!given(name)) throw Usage("missing --" + name);
    return value;
  }
};

struct Output {
  json doc;
  CsvTable csv;
  int code = kOk;
};

CsvTable scalar_table(const std::vector<std::pair<std::string, double>>& rows) {
  CsvTable t{{"quantity", "value"}, {}};
  for (const auto& [k, v] : rows) t.rows.push_back({k, format_number(v)});
  return t;
}

json divergence_json(const DivergenceValue& v) {
  return {{"value", number_json(v.value)}, {"finite", v.finite}};
}

void need_files(const std::vector<std::string>& files, std::size_t n, const std::string& what) {
  if (files.size() != n) {
    throw Usage(what + " expects " + std::to_string(n) + " file(s), got " +
                std::to_string(files.size()));
  }
}

Output bound_output(const std::vector<BoundReport>& reports, const std::string& kind) {
  json list = json::array();
  for (const BoundReport& r : reports) list.push_back(to_json(r));
  json body;
  if (reports.size() == 1) {
    body = to_json(reports.front());
  } else {
    body = {{"reports", std::move(list)}};
  }
  return {envelope(kind, std::move(body)), csv_bound(reports)};
}

Output do_divergence(const std::string& kind, const std::vector<std::string>& files, const Flags& f) {
  json body = {{"equation_tag", kind}};
  double value = 0.0;
  if (kind == "condent" || kind == "mutinfo") {
    need_files(files, 1, kind);
    const BipartiteDensityMatrix rho = read_bipartite(files[0]);
    value = kind == "condent" ? cond_entropy(rho) : mutual_info(rho);
    body["value"] = number_json(value);
  } else if (kind == "entropy") {
    need_files(files, 1, kind);
    value = vn_entropy(read_state(files[0]));
    body["value"] = number_json(value);
  } else {
    need_files(files, 2, kind);
    const DensityMatrix rho = read_state(files[0]);
    const DensityMatrix sigma = read_state(files[1]);
    if (kind == "relent" || kind == "dmax") {
      const DivergenceValue v = kind == "relent" ? rel_entropy(rho, sigma) : d_max(rho, sigma);
      value = v.value;
      body.update(divergence_json(v));
    } else if (kind == "hockey") {
      value = hockey_stick(rho, sigma, f.need("gamma", f.gamma));
      body["value"] = number_json(value);
      body["gamma"] = number_json(f.gamma);
    } else if (kind == "tracedist") {
      value = trace_distance(rho, sigma);
      body["value"] = number_json(value);
    } else {
      throw Usage("unknown divergence '" + kind + "'");
    }
  }
  return {envelope("divergence", std::move(body)), scalar_table({{kind, value}})};
}

Output do_integral(const std::vector<std::string>& files, const Flags& f) {
  need_files(files, 2, "integral");
  const DensityMatrix rho = read_state(files[0]);
  const DensityMatrix sigma = read_state(files[1]);
  const QuadratureResult r = integral_rel_entropy(rho, sigma, f.tol);
  json body = to_json(r);
  body["tol"] = number_json(f.tol);
  body["spectral"] = number_json(rel_entropy(rho, sigma).value);
  return {envelope("integral", std::move(body)), csv_quadrature(r)};
}

Output do_bound(const std::string& kind, const Flags& f) {
  const double eps = f.need("eps", f.eps);
  double rhs = 0.0;
  if (kind == "thm1") {
    rhs = thm1_bound(f.need("M", f.M), eps);
  } else if (kind == "thm1s") {
    rhs = thm1_simplified(f.need("M", f.M), eps);
  } else if (kind == "fa") {
    rhs = fannes_audenaert(f.need("d", f.d), eps);
  } else if (kind == "ifa") {
    rhs = improved_fa(f.need("d", f.d), f.need("lmax", f.lmax), eps);
  } else if (kind == "eq14") {
    const int dA = f.need("dA", f.dA);
    const int sn = f.given("sn") ? f.sn : std::min(dA, f.given("dB") ? f.dB : dA);
    rhs = equal_marginals_bound(dA, sn, eps);
  } else if (kind == "afw") {
    rhs = alicki_fannes_winter(f.need("dA", f.dA), eps);
  } else if (kind == "wilde") {
    rhs = wilde_rhs(f.need("dA", f.dA), eps);
  } else if (kind == "mi") {
    rhs = mi_conjecture_rhs(f.need("dA", f.dA), f.need("dB", f.dB), eps);
  } else if (kind == "chain") {
    rhs = chain_rule_bound(f.need("dA", f.dA), eps);
  } else if (kind == "prop6") {
    rhs = capacity_continuity_rhs(f.need("dB", f.dB), eps);
  } else if (kind == "prop7") {
    rhs = ecost_bound(f.need("d", f.d), eps);
  } else if (kind == "prop9") {
    rhs = filtered_bound_rhs(f.need("dmax-term", f.dmax_term), eps);
  } else {
    throw Usage("unknown bound '" + kind + "'");
  }
  BoundReport r = formula_report(kind, rhs);
  r.add("eps", eps);
  return bound_output({r}, "bound");
}

Output do_check(const std::string& kind, const std::vector<std::string>& files, const Flags& f) {
  if (kind == "thm1") {
    need_files(files, 3, kind);
    const DensityMatrix rho = read_state(files[0]);
    const DensityMatrix sigma = read_state(files[1]);
    const DensityMatrix omega = read_state(files[2]);
    std::optional<double> eps, M;
    if (f.given("eps")) eps = f.eps;
    if (f.given("M")) M = f.M;
    const BoundReport r = check_thm1(rho, sigma, omega, eps, M);
    Output o = bound_output({r}, "check");
    if (f.regions) {
      const double e = eps.value_or(trace_distance(rho, sigma));
      const double m = M.value_or(std::exp2(d_max(rho, omega).value));
      o.doc["regions"] = to_json(region_split_diagnostic(rho, sigma, omega, e, m));
    }
    return o;
  }
  if (kind == "ifa") {
    need_files(files, 2, kind);
    return bound_output({check_improved_fa(read_state(files[0]), read_state(files[1]))}, "check");
  }
  if (kind == "eq14" || kind == "marginal-correction" || kind == "afw" || kind == "wilde" ||
      kind == "mi") {
    need_files(files, 2, kind);
    const BipartiteDensityMatrix rho = read_bipartite(files[0]);
    const BipartiteDensityMatrix sigma = read_bipartite(files[1]);
    BoundReport r;
    if (kind == "eq14") {
      std::optional<int> sn;
      if (f.given("sn")) sn = f.sn;
      r = check_equal_marginals(rho, sigma, sn);
    } else if (kind == "marginal-correction") {
      r = general_marginal_correction(rho, sigma);
    } else if (kind == "afw") {
      r = check_afw(rho, sigma);
    } else if (kind == "wilde") {
      r = check_wilde(rho, sigma);
    } else {
      r = check_mi_conjecture(rho, sigma);
    }
    return bound_output({r}, "check");
  }
  if (kind == "prop9" || kind == "cor10") {
    need_files(files, 4, kind);
    const DensityMatrix rho = read_state(files[0]);
    const DensityMatrix sigma = read_state(files[1]);
    const FreeSet F = read_free_set(files[2]);
    const ChannelSet L = read_channel_set(files[3]);
    const BoundReport r = kind == "cor10" ? cor10_check(rho, sigma, F, L, f.opt_tol)
                                          : prop9_check(rho, sigma, F, L, f.free_set_dmax, f.opt_tol);
    return bound_output({r}, "check");
  }
  if (kind == "lemma3") {
    need_files(files, 3, kind);
    return bound_output({lemma3_check(read_state(files[0]), read_free_set(files[1]),
                                      read_channel_set(files[2]), f.need("q", f.q), f.opt_tol)},
                        "check");
  }
  throw Usage("unknown check '" + kind + "'");
}

Output do_channel(const std::string& kind, const std::vector<std::string>& files, const Flags& f) {
  if (kind == "complement") {
    need_files(files, 1, kind);
    const QuantumChannel c = complementary(read_channel(files[0]));
    json body = channel_to_json(c);
    body["equation_tag"] = "complement";
    return {envelope("channel", std::move(body)),
            scalar_table({{"din", c.din()}, {"dout", c.dout()},
                          {"kraus_count", static_cast<double>(c.kraus().size())}})};
  }
  if (kind == "icinfo") {
    need_files(files, 1, kind);
    const AscentResult r = coherent_info_lower(read_channel(files[0]), f.restarts, f.tol, f.seed);
    json body = {{"equation_tag", "icinfo"},     {"value", number_json(r.value)},
                 {"gap", number_json(r.gap)},    {"iterations", r.iterations},
                 {"restarts", f.restarts},       {"seed", f.seed},
                 {"argmax", state_to_json(r.argmax)}};
    return {envelope("channel", std::move(body)), scalar_table({{"icinfo", r.value}})};
  }
  need_files(files, 2, kind);
  const QuantumChannel a = read_channel(files[0]);
  const QuantumChannel b = read_channel(files[1]);
  if (kind == "dmax") {
    const DivergenceValue v = channel_dmax_stabilised(a, b);
    json body = divergence_json(v);
    body["equation_tag"] = "dmax-stabilised";
    return {envelope("channel", std::move(body)), scalar_table({{kind, v.value}})};
  }
  if (kind == "dmax-unstab") {
    const UnstabilisedEstimate e = channel_dmax_unstabilised(a, b, f.restarts, f.seed);
    json body = divergence_json(e.value);
    body["equation_tag"] = "dmax-unstabilised";
    body["restarts"] = e.restarts;
    body["seed"] = f.seed;
    return {envelope("channel", std::move(body)), scalar_table({{kind, e.value.value}})};
  }
  if (kind == "diamond") {
    const DiamondBracket br = diamond_bracket(a, b);
    json body = {{"equation_tag", "diamond"},
                 {"lower", number_json(br.lower)},
                 {"upper", number_json(br.upper)}};
    return {envelope("channel", std::move(body)),
            scalar_table({{"lower", br.lower}, {"upper", br.upper}})};
  }
  if (kind == "utheta") {
    const AscentResult r = u_theta(a, b, f.tol);
    json body = {{"equation_tag", "utheta"},
                 {"value", number_json(r.value)},
                 {"gap", number_json(r.gap)},
                 {"iterations", r.iterations},
                 {"argmax", state_to_json(r.argmax)}};
    return {envelope("channel", std::move(body)), scalar_table({{kind, r.value}})};
  }
  if (kind == "degrade") {
    std::optional<double> eps;
    if (f.given("eps")) eps = f.eps;
    DegradabilityOptions opt;
    opt.tol = f.given("tol") ? f.tol : opt.tol;
    opt.restarts = f.restarts;
    opt.dmax_restarts = f.dmax_restarts;
    opt.seed = f.seed;
    const DegradabilityReport r = degradability_bounds(a, b, eps, opt);
    json body = to_json(r);
    body["seed"] = f.seed;
    return {envelope("channel", std::move(body)), csv_degradability(r)};
  }
  throw Usage("unknown channel command '" + kind + "'");
}

Output do_filtered(const std::string& kind, const std::vector<std::string>& files, const Flags& f) {
  if (kind == "norm") {
    double value = 0.0;
    if (files.size() == 2) {
      const HermitianOperator x = operator_from_json(load_json(files[0]), files[0] + "#");
      value = filtered_norm(x, read_channel_set(files[1]));
    } else if (files.size() == 3) {
      const DensityMatrix rho = read_state(files[0]);
      const DensityMatrix sigma = read_state(files[1]);
      value = filtered_norm(rho.op() - sigma.op(), read_channel_set(files[2]));
    } else {
      throw Usage("filtered norm expects X L or RHO SIGMA L");
    }
    json body = {{"equation_tag", "filtered-norm"}, {"value", number_json(value)}};
    CsvTable t{{"quantity", "value", "lower_bound"}, {{"norm", format_number(value), ""}}};
    return {envelope("filtered", std::move(body)), t};
  }
  if (kind != "relent" && kind != "dmax") throw Usage("unknown filtered command '" + kind + "'");
  need_files(files, 3, kind);
  const DensityMatrix rho = read_state(files[0]);
  const FreeSet F = read_free_set(files[1]);
  const ChannelSet L = read_channel_set(files[2]);
  const FilteredResult r =
      kind == "relent" ? filtered_rel_ent(rho, F, L, f.opt_tol) : filtered_dmax(rho, F, L, f.opt_tol);
  json weights = json::array();
  for (Eigen::Index i = 0; i < r.weights.size(); ++i) weights.push_back(number_json(r.weights(i)));
  json body = {{"equation_tag", "filtered-" + kind},
               {"value", number_json(r.value.value)},
               {"finite", r.value.finite},
               {"lower_bound", number_json(r.lower_bound)},
               {"weights", std::move(weights)},
               {"evaluations", r.evaluations},
               {"infinite_everywhere", r.infinite_everywhere},
               {"omega", state_to_json(r.omega)}};
  CsvTable t{{"quantity", "value", "lower_bound"},
             {{kind, format_number(r.value.value), format_number(r.lower_bound)}}};
  return {envelope("filtered", std::move(body)), t};
}

Output do_fuzz(const std::string& tag, const Flags& f) {
  if (!is_campaign(tag)) throw Usage("unknown campaign '" + tag + "'");
  FuzzParams p;
  if (f.given("dA")) p.dA = f.dA;
  if (f.given("dB")) p.dB = f.dB;
  p.dmin = f.dmin;
  p.dmax = f.dmax;
  p.dim = f.dim;
  p.generators = f.generators;
  p.channels = f.channels;
  p.q = f.q;
  p.entanglement_biased = f.biased;
  p.injection_period = f.injection_period;
  p.opt_tol = f.opt_tol;
  const FuzzReport r = fuzz(tag, p, f.samples, RngConfig{f.seed, f.workers});
  Output o{envelope("fuzz", to_json(r)), csv_fuzz(r)};
  bool secondary_violation = false;
  for (const auto& [k, v] : r.extras) {
    if (k.size() > 11 && k.ends_with(".violations") && v > 0) secondary_violation = true;
  }
  if ((!r.conjecture && r.violations > 0) || secondary_violation) o.code = kViolation;
  return o;
}

Output do_tightness() { return bound_output(tightness_suite(), "tightness"); }

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NumericalFailure:
    case ErrorKind::ToleranceNotReached:
    case ErrorKind::SaturationFailure:
    case ErrorKind::InfeasibleCenter:
      return kNumerical;
    default:
      return kUsage;
  }
}

void add_files(CLI::App* sub, std::string& kind, std::vector<std::string>& files) {
  sub->add_option("kind", kind, "operation")->required();
  sub->add_option("files", files, "input files");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuity bounds and divergences for finite-dimensional quantum states", "qcont"};
  app.footer(std::string(kGrammar) + "\n" + kCsvColumns +
             "\nExit codes: 0 ok, 1 usage or input error, 2 numerical failure, "
             "3 theorem-campaign violation.");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Settings s;
  Flags f;
  app.add_option("--format", s.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output,-o", s.output, "write to a file instead of stdout");

  auto flag = [&](CLI::App* sub, const std::string& name, auto& target, const std::string& help) {
    f.opts.emplace(name, sub->add_option("--" + name, target, help));
  };
  std::string kind;
  std::vector<std::string> files;

  CLI::App* divergence = app.add_subcommand("divergence", "divergences between states");
  add_files(divergence, kind, files);
  flag(divergence, "gamma", f.gamma, "hockey-stick parameter");

  CLI::App* integral = app.add_subcommand("integral", "relative entropy via the hockey-stick integral");
  integral->add_option("files", files, "RHO SIGMA");
  flag(integral, "tol", f.tol, "absolute tolerance in bits");

  CLI::App* bound = app.add_subcommand("bound", "evaluate a bound formula");
  bound->add_option("kind", kind, "formula")->required();
  flag(bound, "M", f.M, "M >= 1");
  flag(bound, "eps", f.eps, "trace distance");
  flag(bound, "d", f.d, "dimension");
  flag(bound, "dA", f.dA, "dimension of A");
  flag(bound, "dB", f.dB, "dimension of B");
  flag(bound, "sn", f.sn, "Schmidt number bound");
  flag(bound, "lmax", f.lmax, "largest eigenvalue of sigma");
  flag(bound, "dmax-term", f.dmax_term, "max-relative entropy term in bits");

  CLI::App* check = app.add_subcommand("check", "check an inequality on concrete inputs");
  add_files(check, kind, files);
  flag(check, "eps", f.eps, "eps override (>= trace distance)");
  flag(check, "M", f.M, "M override (>= 2^Dmax)");
  flag(check, "sn", f.sn, "Schmidt number bound of rho");
  flag(check, "q", f.q, "mixing weight");
  flag(check, "opt-tol", f.opt_tol, "optimiser tolerance");
  check->add_flag("--free-set-dmax", f.free_set_dmax, "D_max term over the whole free set");
  check->add_flag("--regions", f.regions, "include the region split diagnostic");

  CLI::App* channel = app.add_subcommand("channel", "channel divergences and capacity bounds");
  add_files(channel, kind, files);
  flag(channel, "tol", f.tol, "optimiser tolerance");
  flag(channel, "eps", f.eps, "degradability parameter");
  flag(channel, "restarts", f.restarts, "random restarts");
  flag(channel, "dmax-restarts", f.dmax_restarts, "restarts for the unstabilised D_max");
  flag(channel, "seed", f.seed, "random seed");

  CLI::App* filtered = app.add_subcommand("filtered", "filtered divergences to a free set");
  add_files(filtered, kind, files);
  flag(filtered, "opt-tol", f.opt_tol, "optimiser tolerance");

  CLI::App* fuzzcmd = app.add_subcommand("fuzz", "run a Monte-Carlo campaign");
  fuzzcmd->add_option("campaign", kind, "campaign tag")->required();
  flag(fuzzcmd, "samples", f.samples, "number of samples");
  flag(fuzzcmd, "seed", f.seed, "master seed");
  flag(fuzzcmd, "workers", f.workers, "worker threads");
  flag(fuzzcmd, "dA", f.dA, "dimension of A");
  flag(fuzzcmd, "dB", f.dB, "dimension of B");
  flag(fuzzcmd, "dmin", f.dmin, "smallest dimension (thm1)");
  flag(fuzzcmd, "dmax", f.dmax, "largest dimension (thm1)");
  flag(fuzzcmd, "dim", f.dim, "system dimension (prop9, lemma3)");
  flag(fuzzcmd, "generators", f.generators, "free-set generators including I/D");
  flag(fuzzcmd, "channels", f.channels, "channels in L");
  flag(fuzzcmd, "q", f.q, "lemma3 mixing weight (0 cycles 0.1, 0.3, 0.6)");
  flag(fuzzcmd, "injection-period", f.injection_period, "eq14 witness period (0 disables)");
  flag(fuzzcmd, "opt-tol", f.opt_tol, "optimiser tolerance");
  fuzzcmd->add_flag("--biased", f.biased, "entanglement-biased sampling");

  CLI::App* tightness = app.add_subcommand("tightness", "saturation checks on fixed grids");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << kGrammar;
    return kUsage;
  }

  Output result;
  try {
    if (*divergence) {
      result = do_divergence(kind, files, f);
    } else if (*integral) {
      result = do_integral(files, f);
    } else if (*bound) {
      result = do_bound(kind, f);
    } else if (*check) {
      result = do_check(kind, files, f);
    } else if (*channel) {
      result = do_channel(kind, files, f);
    } else if (*filtered) {
      result = do_filtered(kind, files, f);
    } else if (*fuzzcmd) {
      result = do_fuzz(kind, f);
    } else if (*tightness) {
      result = do_tightness();
    }
  } catch (const Usage& e) {
    err << "error: " << e.what() << "\n" << kGrammar;
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }

  const std::string text = s.format == "csv" ? result.csv.str() : result.doc.dump(2) + "\n";
  if (s.output.empty()) {
    out << text;
  } else {
    std::ofstream file(s.output, std::ios::binary);
    if (!(file << text)) {
      err << "error: cannot write " << s.output << "\n";
      return kUsage;
    }
  }
  return result.code;
}

}  // namespace qcont::cli
