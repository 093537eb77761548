#include "helpers.hpp"

#include <cstring>

#include "qcont/lab.hpp"

using namespace qt;

namespace {

bool same_report(const FuzzReport& a, const FuzzReport& b) {
  auto bits = [](double x) {
    std::uint64_t u;
    std::memcpy(&u, &x, sizeof u);
    return u;
  };
  if (a.samples != b.samples || a.applicable != b.applicable || a.violations != b.violations ||
      bits(a.max_violation) != bits(b.max_violation) || bits(a.min_slack) != bits(b.min_slack) ||
      a.near_saturations.size() != b.near_saturations.size() || a.extras.size() != b.extras.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.near_saturations.size(); ++i) {
    const Witness& x = a.near_saturations[i];
    const Witness& y = b.near_saturations[i];
    if (x.index != y.index || x.digest != y.digest || bits(x.slack) != bits(y.slack) || x.note != y.note)
      return false;
  }
  for (std::size_t i = 0; i < a.extras.size(); ++i) {
    if (a.extras[i].first != b.extras[i].first || bits(a.extras[i].second) != bits(b.extras[i].second))
      return false;
  }
  return true;
}

// FNV-1a over the dimensions and the raw matrix bytes.
std::uint64_t fnv_oracle(const std::vector<int>& dims, const std::vector<DensityMatrix>& states) {
  std::uint64_t h = 14695981039346656037ULL;
  auto feed = [&](const unsigned char* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) h = (h ^ p[i]) * 1099511628211ULL;
  };
  for (int d : dims) feed(reinterpret_cast<const unsigned char*>(&d), sizeof d);
  for (const DensityMatrix& s : states)
    feed(reinterpret_cast<const unsigned char*>(s.matrix().data()),
         sizeof(std::complex<double>) * static_cast<std::size_t>(s.matrix().size()));
  return h;
}

}  // namespace

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
  CHECK(derive_seed(1, 5) != derive_seed(2, 5));
  // splitmix64 reference value for input 0 (first output of the generator seeded with 0)
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("random state generators") {
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + t % 5;
    const int r = 1 + t % d;
    const DensityMatrix s = ginibre_state(d, r, rng);
    CHECK(s.matrix().trace().real() == doctest::Approx(1.0));
    CHECK(min_eig(s.matrix()) >= -1e-12);
    int rank = 0;
    for (double v : eigh(s.op()).eigenvalues) rank += v > 1e-10 ? 1 : 0;
    CHECK(rank == r);
    const DensityMatrix p = haar_pure(d, rng);
    CHECK(max_abs(p.matrix() * p.matrix() - p.matrix()) <= 1e-12);
    const int k = (d + 1) / 2 + t % 3;
    const QuantumChannel ch = random_channel(d, 2, k, rng);
    CHECK(static_cast<int>(ch.kraus().size()) == k);
  }
}

TEST_CASE("Haar qubit statistics") {
  // For Haar qubits |<psi|phi>|^2 is uniform on [0,1], so E T = E sqrt(U) = 2/3.
  Rng rng(32);
  double sum_t = 0.0;
  double sum_f = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const DensityMatrix a = haar_pure(2, rng);
    const DensityMatrix b = haar_pure(2, rng);
    sum_t += trace_distance(a, b);
    sum_f += (a.matrix() * b.matrix()).trace().real();
  }
  CHECK(std::abs(sum_t / n - 2.0 / 3.0) <= 0.015);
  CHECK(std::abs(sum_f / n - 0.5) <= 0.015);
}

TEST_CASE("equal-marginal pairs") {
  Rng rng(33);
  for (int t = 0; t < 200; ++t) {
    const int dA = 2 + t % 3;
    const int dB = 2 + (t / 3) % 3;
    const auto [rho, sigma] = random_equal_marginal_pair(dA, dB, rng, (t % 4) / 4.0);
    CHECK(rho.dA() == dA);
    CHECK(sigma.dB() == dB);
    CHECK(max_abs(partial_trace(rho, Subsystem::B).matrix() - partial_trace(sigma, Subsystem::B).matrix()) <= 1e-10);
  }
  const auto [r, s] = random_equal_marginal_pair(2, 3, rng, 1.0);
  CHECK(max_abs(r.state().matrix() - s.state().matrix()) <= 1e-12);
}

TEST_CASE("fuzz reports are independent of the worker count") {
  FuzzParams p;
  p.dmin = 2;
  p.dmax = 5;
  for (const char* tag : {"thm1", "eq14", "wilde", "mi_conjecture"}) {
    const FuzzReport one = fuzz(tag, p, 600, {7, 1});
    const FuzzReport many = fuzz(tag, p, 600, {7, 5});
    CHECK(same_report(one, many));
    CHECK(one.seed == 7);
    CHECK(one.samples == 600);
    CHECK_FALSE(same_report(one, fuzz(tag, p, 600, {8, 1})));
  }
  FuzzParams small;
  small.dim = 2;
  small.generators = 2;
  CHECK(same_report(fuzz("lemma3", small, 20, {3, 1}), fuzz("lemma3", small, 20, {3, 3})));
}

TEST_CASE("witness digests reconstruct their samples") {
  FuzzParams p;
  p.dA = 3;
  p.dB = 3;
  p.injection_period = 50;
  const FuzzReport r = fuzz("eq14", p, 400, {11, 2});
  REQUIRE_FALSE(r.near_saturations.empty());
  for (const Witness& w : r.near_saturations) {
    const SampleInstance s = reconstruct_sample("eq14", p, 11, w.index);
    CHECK(s.digest == w.digest);
    CHECK(s.digest == fnv_oracle(s.dims, s.states));
    CHECK(s.reports.front().slack == w.slack);
    CHECK(s.note == w.note);
  }
  CHECK(reconstruct_sample("thm1", p, 11, 5).digest != reconstruct_sample("thm1", p, 11, 6).digest);
}

TEST_CASE("campaign reports") {
  FuzzParams p;
  const FuzzReport t = fuzz("thm1", p, 2000, {1, 2});
  CHECK(t.equation_tag == "thm1");
  CHECK_FALSE(t.conjecture);
  CHECK(t.violations == 0);
  CHECK(t.max_violation == 0.0);
  CHECK(t.applicable > 0);
  CHECK(t.min_slack >= -1e-8);

  const FuzzReport w = fuzz("wilde", p, 500, {1, 2});
  CHECK(w.conjecture);
  bool has_afw = false;
  for (const auto& [k, v] : w.extras) {
    if (k == "afw-vs-wilde.violations") {
      has_afw = true;
      CHECK(v == 0.0);
    }
  }
  CHECK(has_afw);

  CHECK(is_campaign("prop9"));
  CHECK_FALSE(is_campaign("thm3"));
  CHECK_THROWS(fuzz("thm3", p, 10, {}));
  CHECK_THROWS(fuzz("thm1", p, 0, {}));
  FuzzParams big;
  big.dmax = 9;
  CHECK_THROWS(fuzz("thm1", big, 10, {}));
}

TEST_CASE("tightness suite") {
  const std::vector<BoundReport> reps = tightness_suite();
  CHECK(reps.size() == 16 + 12);
  int zero_rows = 0;
  for (const BoundReport& r : reps) {
    REQUIRE(r.applicable);
    REQUIRE(r.lhs);
    CHECK(std::abs(r.slack) <= 1e-9);
    if (*r.detail("eps") == 0.0) {
      ++zero_rows;
      CHECK(std::abs(*r.lhs) <= 1e-12);
      CHECK(r.rhs == 0.0);
    }
  }
  CHECK(zero_rows == 7);
}
