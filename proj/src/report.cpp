#include "qcont/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qcont/version.hpp"

namespace qcont {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing \"") + key + "\"");
  return j.at(key);
}

json details_json(const std::vector<std::pair<std::string, double>>& items) {
  json d = json::object();
  for (const auto& [k, v] : items) d[k] = number_json(v);
  return d;
}

json bound_json(const DegradabilityReport::Bound& b) {
  json j = {{"value", number_json(b.value)}, {"applicable", b.applicable}};
  if (!b.applicable) j["reason"] = b.reason;
  return j;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json number_json(double v) {
  if (std::isnan(v) || std::isinf(v)) return format_number(v);
  return std::stod(format_number(v));
}

double number_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  fail(where, "expected a number");
}

json envelope(const std::string& kind, json body) {
  json doc = {{"tool", kToolName},
              {"version", kVersion},
              {"schema_version", kSchemaVersion},
              {"kind", kind}};
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  return doc;
}

std::string check_envelope(const json& doc, const std::string& where) {
  if (need(doc, "tool", where) != kToolName) fail(where, "not a qcont document");
  const json& sv = need(doc, "schema_version", where);
  if (!sv.is_number_integer() || sv.get<int>() != kSchemaVersion) {
    fail(where, "unsupported schema_version");
  }
  return need(doc, "kind", where).get<std::string>();
}

json to_json(const BoundReport& r) {
  json j = {{"equation_tag", r.equation_tag},
            {"rhs", number_json(r.rhs)},
            {"slack", number_json(r.slack)},
            {"applicable", r.applicable}};
  if (r.lhs) j["lhs"] = number_json(*r.lhs);
  if (r.lhs_neg_infinite) j["lhs_neg_infinite"] = true;
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (!r.details.empty()) j["details"] = details_json(r.details);
  return j;
}

BoundReport bound_report_from_json(const json& j, const std::string& where) {
  BoundReport r;
  r.equation_tag = need(j, "equation_tag", where).get<std::string>();
  r.rhs = number_from_json(need(j, "rhs", where), where + "/rhs");
  r.slack = number_from_json(need(j, "slack", where), where + "/slack");
  r.applicable = need(j, "applicable", where).get<bool>();
  if (j.contains("lhs")) r.lhs = number_from_json(j["lhs"], where + "/lhs");
  r.lhs_neg_infinite = j.value("lhs_neg_infinite", false);
  r.reason = j.value("reason", std::string());
  if (j.contains("details")) {
    for (auto it = j["details"].begin(); it != j["details"].end(); ++it) {
      r.add(it.key(), number_from_json(it.value(), where + "/details/" + it.key()));
    }
  }
  return r;
}

json to_json(const FuzzReport& r) {
  json witnesses = json::array();
  for (const Witness& w : r.near_saturations) {
    witnesses.push_back({{"index", w.index},
                         {"slack", number_json(w.slack)},
                         {"digest", w.digest},
                         {"note", w.note}});
  }
  json extras = details_json(r.extras);
  return {{"campaign", r.campaign_tag},
          {"equation_tag", r.equation_tag},
          {"conjecture", r.conjecture},
          {"samples", r.samples},
          {"applicable", r.applicable},
          {"violations", r.violations},
          {"tolerance", number_json(r.tolerance)},
          {"max_violation", number_json(r.max_violation)},
          {"min_slack", number_json(r.min_slack)},
          {"seed", r.seed},
          {"near_saturations", std::move(witnesses)},
          {"extras", std::move(extras)}};
}

FuzzReport fuzz_report_from_json(const json& j, const std::string& where) {
  FuzzReport r;
  r.campaign_tag = need(j, "campaign", where).get<std::string>();
  r.equation_tag = need(j, "equation_tag", where).get<std::string>();
  r.conjecture = need(j, "conjecture", where).get<bool>();
  r.samples = need(j, "samples", where).get<long>();
  r.applicable = need(j, "applicable", where).get<long>();
  r.violations = need(j, "violations", where).get<long>();
  r.tolerance = number_from_json(need(j, "tolerance", where), where + "/tolerance");
  r.max_violation = number_from_json(need(j, "max_violation", where), where + "/max_violation");
  r.min_slack = number_from_json(need(j, "min_slack", where), where + "/min_slack");
  r.seed = need(j, "seed", where).get<std::uint64_t>();
  for (const json& w : need(j, "near_saturations", where)) {
    r.near_saturations.push_back({w.at("index").get<std::uint64_t>(),
                                  number_from_json(w.at("slack"), where + "/near_saturations"),
                                  w.at("digest").get<std::uint64_t>(), w.at("note").get<std::string>()});
  }
  const json& extras = need(j, "extras", where);
  for (auto it = extras.begin(); it != extras.end(); ++it) {
    r.extras.emplace_back(it.key(), number_from_json(it.value(), where + "/extras/" + it.key()));
  }
  return r;
}

json to_json(const QuadratureResult& r) {
  return {{"equation_tag", "integral"},
          {"value", number_json(r.value)},
          {"estimated_error", number_json(r.estimated_error)},
          {"evaluations", r.evaluations},
          {"truncation_gamma", number_json(r.truncation_gamma)},
          {"second_truncation_gamma", number_json(r.second_truncation_gamma)}};
}

json to_json(const DegradabilityReport& r) {
  return {{"equation_tag", "degradability"},
          {"eps_lower", number_json(r.eps_lower)},
          {"eps_upper", number_json(r.eps_upper)},
          {"eps", number_json(r.eps)},
          {"env_dim", r.env_dim},
          {"u_theta", number_json(r.u_theta)},
          {"u_theta_gap", number_json(r.u_theta_gap)},
          {"ic_lower", number_json(r.ic_lower)},
          {"q_upper_utheta", bound_json(r.q_upper_utheta)},
          {"q_upper_ic", bound_json(r.q_upper_ic)},
          {"q_upper_utheta_refined", bound_json(r.q_upper_utheta_refined)},
          {"q_upper_ic_refined", bound_json(r.q_upper_ic_refined)},
          {"dmax_channel_terms",
           {{"stabilised", number_json(r.dmax_channel_terms.stabilised)},
            {"unstabilised", number_json(r.dmax_channel_terms.unstabilised)},
            {"m_used", number_json(r.dmax_channel_terms.m_used)}}}};
}

json to_json(const RegionSplit& r) {
  json regions = json::array();
  for (const RegionTerm& t : r.regions) {
    regions.push_back({{"name", t.name},
                       {"lower", number_json(t.lower)},
                       {"upper", number_json(t.upper)},
                       {"integral", number_json(t.integral)},
                       {"majorant", number_json(t.majorant)},
                       {"max_excess", number_json(t.max_excess)}});
  }
  return {{"equation_tag", "thm1-regions"},
          {"eps", number_json(r.eps)},
          {"M", number_json(r.M)},
          {"gamma_split", number_json(r.gamma_split)},
          {"gamma_zero", number_json(r.gamma_zero)},
          {"lhs", number_json(r.lhs)},
          {"majorant_total", number_json(r.majorant_total)},
          {"grid_points", r.grid_points},
          {"regions", std::move(regions)}};
}

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_escape(cells[i]);
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

CsvTable csv_bound(const std::vector<BoundReport>& reports) {
  CsvTable t{{"equation_tag", "lhs", "rhs", "slack", "applicable", "reason"}, {}};
  for (const BoundReport& r : reports) {
    const std::string lhs = r.lhs ? format_number(*r.lhs) : (r.lhs_neg_infinite ? "-inf" : "");
    t.rows.push_back({r.equation_tag, lhs, format_number(r.rhs), format_number(r.slack),
                      bool_str(r.applicable), r.reason});
  }
  return t;
}

CsvTable csv_fuzz(const FuzzReport& r) {
  return {{"campaign", "samples", "violations", "max_violation", "min_slack", "seed"},
          {{r.campaign_tag, std::to_string(r.samples), std::to_string(r.violations),
            format_number(r.max_violation), format_number(r.min_slack), std::to_string(r.seed)}}};
}

CsvTable csv_quadrature(const QuadratureResult& r) {
  return {{"value", "estimated_error", "evaluations", "truncation_gamma", "second_truncation_gamma"},
          {{format_number(r.value), format_number(r.estimated_error), std::to_string(r.evaluations),
            format_number(r.truncation_gamma), format_number(r.second_truncation_gamma)}}};
}

CsvTable csv_degradability(const DegradabilityReport& r) {
  auto b = [](const DegradabilityReport::Bound& x) {
    return x.applicable ? format_number(x.value) : std::string();
  };
  return {{"eps_lower", "eps_upper", "eps", "u_theta", "u_theta_gap", "ic_lower", "q_upper_utheta",
           "q_upper_ic", "q_upper_utheta_refined", "q_upper_ic_refined"},
          {{format_number(r.eps_lower), format_number(r.eps_upper), format_number(r.eps),
            format_number(r.u_theta), format_number(r.u_theta_gap), format_number(r.ic_lower),
            b(r.q_upper_utheta), b(r.q_upper_ic), b(r.q_upper_utheta_refined),
            b(r.q_upper_ic_refined)}}};
}

}  // namespace qcont
