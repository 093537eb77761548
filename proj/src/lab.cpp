#include "qcont/lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "qcont/filtered.hpp"

namespace qcont {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kCampaignDimCap = 8;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t digest_of(const std::vector<DensityMatrix>& states, const std::vector<int>& dims) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int d : dims) h = fnv1a(h, &d, sizeof d);
  for (const DensityMatrix& s : states) {
    const Matrix& m = s.matrix();
    h = fnv1a(h, m.data(), sizeof(cplx) * static_cast<std::size_t>(m.size()));
  }
  return h;
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool coin(Rng& rng) { return std::bernoulli_distribution(0.5)(rng); }

void check_campaign_dim(int d, const char* what) {
  if (d < 2 || d > kCampaignDimCap) {
    throw Error(ErrorKind::RangeError, std::string(what) + " must lie in [2, " +
                                           std::to_string(kCampaignDimCap) + "]");
  }
}

struct CampaignInfo {
  const char* tag;
  const char* equation_tag;
  bool conjecture;
  double tolerance;
};

constexpr std::array<CampaignInfo, 6> kCampaigns{{
    {"thm1", "thm1", false, 1e-8},
    {"eq14", "eq14", false, 1e-8},
    {"wilde", "wilde", true, 1e-8},
    {"mi_conjecture", "mi", true, 1e-8},
    {"prop9", "cor10", false, 1e-5},
    {"lemma3", "lemma3", false, 1e-6},
}};

const CampaignInfo& campaign(const std::string& tag) {
  for (const CampaignInfo& c : kCampaigns) {
    if (tag == c.tag) return c;
  }
  throw Error(ErrorKind::RangeError, "unknown campaign '" + tag + "'");
}

std::string format_note(const std::string& head, double value) {
  std::ostringstream os;
  os.precision(6);
  os << head << value;
  return os.str();
}

// Ginibre state of random rank, or a mixture with `base` when `near` is set.
DensityMatrix partner(const DensityMatrix& base, Rng& rng) {
  const int d = base.dim();
  if (coin(rng)) return ginibre_state(d, uniform_int(rng, 1, d), rng);
  const double t = uniform(rng, 0.0, 1.0);
  return mix(base, ginibre_state(d, uniform_int(rng, 1, d), rng), t);
}

QuantumChannel random_channel_set_member(int d, Rng& rng) {
  return random_channel(d, d, uniform_int(rng, 1, d), rng);
}

FreeSet random_free_set(int d, int count, Rng& rng) {
  std::vector<DensityMatrix> gens{DensityMatrix::maximally_mixed(d)};
  for (int i = 1; i < count; ++i) gens.push_back(ginibre_state(d, uniform_int(rng, 1, d), rng));
  return FreeSet(std::move(gens), 0);
}

ChannelSet random_channel_set(int d, int count, Rng& rng) {
  std::vector<QuantumChannel> chans;
  for (int i = 0; i < count; ++i) chans.push_back(random_channel_set_member(d, rng));
  return ChannelSet(std::move(chans));
}

SampleInstance draw(const CampaignInfo& info, const FuzzParams& p, std::uint64_t master,
                    std::uint64_t index) {
  Rng rng(derive_seed(master, index));
  SampleInstance s;
  const std::string tag = info.tag;
  if (tag == "thm1") {
    check_campaign_dim(p.dmin, "dmin");
    check_campaign_dim(p.dmax, "dmax");
    const int d = uniform_int(rng, p.dmin, std::max(p.dmin, p.dmax));
    DensityMatrix rho = ginibre_state(d, uniform_int(rng, 1, d), rng);
    DensityMatrix sigma = partner(rho, rng);
    DensityMatrix omega = ginibre_state(d, d, rng);
    if (uniform_int(rng, 0, 3) == 0) omega = mix(rho, haar_pure(d, rng), uniform(rng, 0.0, 1.0));
    s.reports.push_back(check_thm1(rho, sigma, omega));
    s.dims = {d};
    s.states = {std::move(rho), std::move(sigma), std::move(omega)};
    s.note = "d=" + std::to_string(d);
  } else if (tag == "eq14") {
    check_campaign_dim(p.dA, "dA");
    check_campaign_dim(p.dB, "dB");
    if (p.injection_period > 0 && index % static_cast<std::uint64_t>(p.injection_period) == 0) {
      const int dcap = std::min(p.dA, p.dB);
      const int d = 2 + static_cast<int>((index / static_cast<std::uint64_t>(p.injection_period)) %
                                         static_cast<std::uint64_t>(dcap - 1));
      const double eps = uniform(rng, 0.0, 1.0) * (1.0 - 1.0 / (d * d));
      const BipartiteDensityMatrix rho = max_entangled(d);
      const BipartiteDensityMatrix sigma = isotropic_mix(d, eps);
      s.reports.push_back(check_equal_marginals(rho, sigma));
      s.dims = {d, d};
      s.states = {rho.state(), sigma.state()};
      s.note = format_note("isotropic d=" + std::to_string(d) + " eps=", eps);
    } else {
      const int dA = uniform_int(rng, 2, p.dA);
      const int dB = uniform_int(rng, 2, p.dB);
      const double t = coin(rng) ? uniform(rng, 0.0, 1.0) : 0.0;
      auto [rho, sigma] = random_equal_marginal_pair(dA, dB, rng, t);
      s.reports.push_back(check_equal_marginals(rho, sigma));
      s.dims = {dA, dB};
      s.states = {rho.state(), sigma.state()};
      s.note = "dA=" + std::to_string(dA) + " dB=" + std::to_string(dB);
    }
  } else if (tag == "wilde" || tag == "mi_conjecture") {
    check_campaign_dim(p.dA, "dA");
    check_campaign_dim(p.dB, "dB");
    const int n = p.dA * p.dB;
    DensityMatrix rho = p.entanglement_biased
                            ? mix(haar_pure(n, rng), ginibre_state(n, n, rng), uniform(rng, 0.0, 0.3))
                            : ginibre_state(n, uniform_int(rng, 1, n), rng);
    DensityMatrix sigma = partner(rho, rng);
    const BipartiteDensityMatrix a(rho, p.dA, p.dB);
    const BipartiteDensityMatrix b(sigma, p.dA, p.dB);
    s.reports.push_back(tag == "wilde" ? check_wilde(a, b) : check_mi_conjecture(a, b));
    s.reports.push_back(check_afw(a, b));
    // Formula comparison: afw rhs against wilde rhs at the sampled eps.
    const double eps = std::clamp(trace_distance(rho, sigma), 0.0, 1.0);
    if (eps <= 1.0 - 1.0 / (p.dA * p.dA)) {
      BoundReport cmp;
      cmp.equation_tag = "afw-vs-wilde";
      cmp.lhs = wilde_rhs(p.dA, eps);
      cmp.rhs = alicki_fannes_winter(p.dA, eps);
      cmp.slack = cmp.rhs - *cmp.lhs;
      s.reports.push_back(cmp);
    }
    s.dims = {p.dA, p.dB};
    s.states = {std::move(rho), std::move(sigma)};
    s.note = p.entanglement_biased ? "entanglement-biased" : "ginibre";
  } else {
    check_campaign_dim(p.dim, "dim");
    if (p.generators < 1 || p.channels < 1) {
      throw Error(ErrorKind::RangeError, "generators and channels must be >= 1");
    }
    const int d = p.dim;
    const FreeSet F = random_free_set(d, p.generators, rng);
    const ChannelSet L = random_channel_set(d, p.channels, rng);
    DensityMatrix rho = ginibre_state(d, uniform_int(rng, 1, d), rng);
    s.dims = {d};
    s.states = F.generators();
    if (tag == "prop9") {
      DensityMatrix sigma = partner(rho, rng);
      s.reports.push_back(cor10_check(rho, sigma, F, L, p.opt_tol));
      s.reports.push_back(prop9_check(rho, sigma, F, L, false, p.opt_tol));
      s.reports.push_back(prop9_check(rho, sigma, F, L, true, p.opt_tol));
      s.states.push_back(std::move(rho));
      s.states.push_back(std::move(sigma));
      s.note = "D=" + std::to_string(d);
    } else {
      static constexpr std::array<double, 3> kQs{0.1, 0.3, 0.6};
      const double q = p.q > 0.0 ? p.q : kQs[index % kQs.size()];
      s.reports.push_back(lemma3_check(rho, F, L, q, p.opt_tol));
      s.states.push_back(std::move(rho));
      s.note = format_note("q=", q);
    }
  }
  s.digest = digest_of(s.states, s.dims);
  return s;
}

struct Outcome {
  bool applicable = false;
  double slack = kInf;
  double eps = 0.0;
  std::uint64_t digest = 0;
  std::string note;
  std::vector<BoundReport> secondary;
  bool optimizer_failure = false;
  std::exception_ptr error;
};

}  // namespace

std::pair<BipartiteDensityMatrix, BipartiteDensityMatrix> random_equal_marginal_pair(
    int dA, int dB, Rng& rng, double identity_weight) {
  check_factor_dim(dA, "dA");
  check_factor_dim(dB, "dB");
  if (dA < 2 || dB < 2) throw Error(ErrorKind::RangeError, "dimensions must be >= 2");
  if (!(identity_weight >= 0.0 && identity_weight <= 1.0)) {
    throw Error(ErrorKind::RangeError, "identity weight outside [0,1]");
  }
  const int n = dA * dB;
  BipartiteDensityMatrix rho(ginibre_state(n, n, rng), dA, dB);
  const QuantumChannel phi = random_channel(dA, dA, uniform_int(rng, 1, dA), rng);
  std::vector<Matrix> kraus;
  if (identity_weight > 0.0) kraus.push_back(std::sqrt(identity_weight) * Matrix::Identity(dA, dA));
  for (const Matrix& k : phi.kraus()) kraus.push_back(std::sqrt(1.0 - identity_weight) * k);
  const QuantumChannel local = QuantumChannel::from_kraus(std::move(kraus));
  BipartiteDensityMatrix sigma = apply_extended(local, rho);
  const double gap =
      trace_distance(partial_trace(rho, Subsystem::B), partial_trace(sigma, Subsystem::B));
  if (gap > 1e-10) {
    throw Error(ErrorKind::NumericalFailure, "local channel moved the B marginal by " + brief(gap));
  }
  return {std::move(rho), std::move(sigma)};
}

bool is_campaign(const std::string& tag) {
  return std::any_of(kCampaigns.begin(), kCampaigns.end(),
                     [&](const CampaignInfo& c) { return tag == c.tag; });
}

SampleInstance reconstruct_sample(const std::string& tag, const FuzzParams& params,
                                  std::uint64_t master_seed, std::uint64_t index) {
  return draw(campaign(tag), params, master_seed, index);
}

FuzzReport fuzz(const std::string& tag, const FuzzParams& params, long samples,
                const RngConfig& cfg) {
  const CampaignInfo& info = campaign(tag);
  if (samples < 1) throw Error(ErrorKind::RangeError, "samples must be >= 1");
  const bool optimiser = tag == "prop9" || tag == "lemma3";
  std::vector<Outcome> outcomes(static_cast<std::size_t>(samples));
  auto work = [&](long first, long stride) {
    for (long i = first; i < samples; i += stride) {
      Outcome& o = outcomes[static_cast<std::size_t>(i)];
      try {
        SampleInstance s = draw(info, params, cfg.master_seed, static_cast<std::uint64_t>(i));
        o.digest = s.digest;
        o.note = std::move(s.note);
        o.applicable = s.reports.front().applicable;
        o.slack = s.reports.front().slack;
        o.eps = s.reports.front().detail("eps").value_or(0.0);
        o.secondary.assign(s.reports.begin() + 1, s.reports.end());
      } catch (const Error& e) {
        if (optimiser && e.kind() == ErrorKind::ToleranceNotReached) {
          o.optimizer_failure = true;
        } else {
          o.error = std::current_exception();
        }
      } catch (...) {
        o.error = std::current_exception();
      }
    }
  };
  const long workers = std::clamp<long>(cfg.workers, 1, 256);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (long w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (std::thread& t : pool) t.join();
  }

  FuzzReport rep;
  rep.campaign_tag = info.tag;
  rep.equation_tag = info.equation_tag;
  rep.conjecture = info.conjecture;
  rep.samples = samples;
  rep.tolerance = info.tolerance;
  rep.seed = cfg.master_seed;
  rep.min_slack = kInf;
  std::vector<std::string> sec_tags;
  std::vector<long> sec_applicable;
  std::vector<long> sec_violations;
  std::vector<double> sec_min;
  long optimizer_failures = 0;
  // The conjectured rhs peaks at eps = 1 - 1/m^2 and decreases after it.
  const int m = std::min(params.dA, params.dB);
  const double monotone_end = 1.0 - 1.0 / (m * m);
  long large_eps_violations = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const Outcome& o = outcomes[i];
    if (o.error) std::rethrow_exception(o.error);
    if (o.optimizer_failure) {
      ++optimizer_failures;
      continue;
    }
    if (o.applicable) {
      ++rep.applicable;
      rep.min_slack = std::min(rep.min_slack, o.slack);
      if (o.slack < -info.tolerance) {
        ++rep.violations;
        if (o.eps > monotone_end) ++large_eps_violations;
      }
      if (o.slack <= params.saturation_threshold && rep.near_saturations.size() < kMaxWitnesses) {
        rep.near_saturations.push_back({i, o.slack, o.digest, o.note});
      }
    }
    for (const BoundReport& r : o.secondary) {
      auto it = std::find(sec_tags.begin(), sec_tags.end(), r.equation_tag);
      std::size_t k = static_cast<std::size_t>(it - sec_tags.begin());
      if (it == sec_tags.end()) {
        sec_tags.push_back(r.equation_tag);
        sec_applicable.push_back(0);
        sec_violations.push_back(0);
        sec_min.push_back(kInf);
      }
      if (!r.applicable) continue;
      ++sec_applicable[k];
      sec_min[k] = std::min(sec_min[k], r.slack);
      if (r.slack < -info.tolerance) ++sec_violations[k];
    }
  }
  rep.max_violation = rep.applicable > 0 ? std::max(0.0, -rep.min_slack) : 0.0;
  for (std::size_t k = 0; k < sec_tags.size(); ++k) {
    rep.extras.emplace_back(sec_tags[k] + ".applicable", static_cast<double>(sec_applicable[k]));
    rep.extras.emplace_back(sec_tags[k] + ".violations", static_cast<double>(sec_violations[k]));
    rep.extras.emplace_back(sec_tags[k] + ".min_slack", sec_min[k]);
  }
  if (tag == "mi_conjecture") {
    rep.extras.emplace_back("violations_beyond_peak_eps", static_cast<double>(large_eps_violations));
  }
  if (optimiser) rep.extras.emplace_back("optimizer_failures", static_cast<double>(optimizer_failures));
  return rep;
}

std::vector<BoundReport> tightness_suite() {
  std::vector<BoundReport> out;
  auto assert_tight = [](BoundReport r, const std::string& point) {
    if (!r.applicable || !r.lhs || !(std::abs(r.slack) <= 1e-9)) {
      throw Error(ErrorKind::SaturationFailure,
                  point + ": slack " + brief(r.slack) +
                      (r.applicable ? "" : " (not applicable: " + r.reason + ")"));
    }
    return r;
  };

  const DensityMatrix ket0 = DensityMatrix::diagonal(std::array<double, 2>{1.0, 0.0});
  for (double M : {1.5, 2.0, 4.0, 8.0}) {
    for (double eps : {0.0, 0.1, 0.25, 1.0 - 1.0 / M}) {
      const DensityMatrix sigma = DensityMatrix::diagonal(std::array<double, 2>{1.0 - eps, eps});
      const DensityMatrix omega = DensityMatrix::diagonal(std::array<double, 2>{1.0 / M, 1.0 - 1.0 / M});
      const std::string point = format_note("thm1 M=", M) + format_note(" eps=", eps);
      BoundReport r = assert_tight(check_thm1(ket0, sigma, omega, eps, M), point);
      r.add("grid_M", M);
      r.add("grid_eps", eps);
      out.push_back(std::move(r));
    }
  }
  for (int d : {2, 3, 4}) {
    const double top = 1.0 - 1.0 / (d * d);
    for (double eps : {0.0, 0.1, 0.3, top}) {
      const std::string point = "eq14 d=" + std::to_string(d) + format_note(" eps=", eps);
      BoundReport r = assert_tight(check_equal_marginals(max_entangled(d), isotropic_mix(d, eps)), point);
      r.add("grid_d", d);
      r.add("grid_eps", eps);
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace qcont
