#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "smoothreg/errors.hpp"
#include "smoothreg/rng.hpp"
#include "smoothreg/spectral.hpp"

using namespace smoothreg;

namespace {

// Independent long-double oracle for the estimator moment sums, summed in
// reverse order (smallest terms first).
struct AnBnOracle {
  long double num = 0.0L;
  long double den = 0.0L;
};

AnBnOracle an_bn_oracle(const SpectralModel& m, std::int64_t n) {
  AnBnOracle o;
  for (std::int64_t j = n; j >= 1; --j) {
    const long double lam = m.lambda(j);
    const long double lam_s = m.lambda_s(j);
    const long double x = m.x_coeff(j);
    const long double w = std::pow(lam, static_cast<long double>(m.alpha)) * x * x;
    o.num += w * std::pow(lam_s, static_cast<long double>(m.gamma));
    o.den += w;
  }
  return o;
}

SpectralModel two_term_model() {
  SpectralModel m;
  m.lambda = [](std::int64_t j) { return j == 1 ? 1.0 : 4.0; };
  m.lambda_s = m.lambda;
  m.x_coeff = [](std::int64_t) { return 1.0; };
  m.alpha = 1.0;
  m.gamma = 1.0;
  m.beta_true = 1.0;
  return m;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("sobolev_norm_sq hand examples") {
  SpectralModel m;
  m.lambda = [](std::int64_t) { return 1.0; };
  m.lambda_s = m.lambda;
  m.x_coeff = [](std::int64_t j) { return j == 1 ? 1.0 : 0.0; };
  CHECK(sobolev_norm_sq(m, 3.7, 10) == doctest::Approx(1.0).epsilon(1e-15));

  SpectralModel q;
  q.lambda = [](std::int64_t j) { return static_cast<double>(j * j); };
  q.lambda_s = q.lambda;
  q.x_coeff = [](std::int64_t j) { return 1.0 / static_cast<double>(j * j); };
  // 1 + 1/4 + 1/9
  CHECK(sobolev_norm_sq(q, 1.0, 3) == doctest::Approx(49.0 / 36.0).epsilon(1e-14));

  // s = 0 is the plain coefficient energy
  double energy = 0.0;
  for (int j = 1; j <= 20; ++j) energy += std::pow(j, -4.0);
  CHECK(sobolev_norm_sq(q, 0.0, 20) == doctest::Approx(energy).epsilon(1e-13));
}

TEST_CASE("sobolev_norm_sq monotone in n_terms and s") {
  const SpectralModel m = SpectralModel::power_law(2.0, 1.0, 2.0, 0.0, 1.0);
  double prev = 0.0;
  for (std::int64_t n : {1, 2, 5, 10, 100, 1000}) {
    const double cur = sobolev_norm_sq(m, 1.0, n);
    CHECK(cur >= prev);
    prev = cur;
  }
  // lambda_1 = 1 >= 1, so the sum is nondecreasing in s too
  double prev_s = sobolev_norm_sq(m, -1.0, 500);
  for (double s : {-0.5, 0.0, 0.5, 1.0}) {
    const double cur = sobolev_norm_sq(m, s, 500);
    CHECK(cur >= prev_s);
    prev_s = cur;
  }
}

TEST_CASE("classifier eigenbasis rows") {
  CHECK(classify_limit(1.0, 2.0, 0.0, ObservationMode::EigenbasisObservations).tag ==
        RegimeTag::ConvergesToTrueBeta);
  CHECK(classify_limit(1.0, 2.0, -0.5, ObservationMode::EigenbasisObservations).tag ==
        RegimeTag::ConvergesToZero);
  CHECK(classify_limit(1.0, 2.0, 0.5, ObservationMode::EigenbasisObservations).tag ==
        RegimeTag::DivergesSigned);
  CHECK(classify_limit(4.0, 2.0, 3.0, ObservationMode::EigenbasisObservations).tag ==
        RegimeTag::DivergesSigned);
  CHECK(classify_limit(4.0, 2.0, 1.0, ObservationMode::EigenbasisObservations).tag ==
        RegimeTag::RandomFiniteLimit);
  CHECK(classify_limit(4.0, 2.0, 2.0, ObservationMode::EigenbasisObservations).tag ==
        RegimeTag::RandomFiniteLimit);  // boundary gamma = p - alpha
}

TEST_CASE("classifier point rows") {
  CHECK(classify_limit(1.0, 2.0, 0.0, ObservationMode::PointObservations).tag ==
        RegimeTag::ConvergesToTrueBeta);
  CHECK(classify_limit(1.0, 2.0, -0.5, ObservationMode::PointObservations).tag ==
        RegimeTag::ConvergesToZero);
  CHECK(classify_limit(1.0, 2.0, 0.25, ObservationMode::PointObservations).tag ==
        RegimeTag::Unspecified);
  CHECK(classify_limit(4.0, 2.0, -0.5, ObservationMode::PointObservations).tag ==
        RegimeTag::RandomFiniteLimit);
  CHECK(classify_limit(3.0, 2.0, -0.5, ObservationMode::PointObservations).tag ==
        RegimeTag::Unspecified);  // alpha <= p < 2 alpha not covered
  CHECK(classify_limit(4.0, 2.0, 0.5, ObservationMode::PointObservations).tag ==
        RegimeTag::Unspecified);
}

TEST_CASE("classifier expected_limit bookkeeping") {
  const LimitRegime zero = classify_limit(1.0, 2.0, -1.0, ObservationMode::EigenbasisObservations);
  REQUIRE(zero.expected_limit.has_value());
  CHECK(*zero.expected_limit == 0.0);
  const LimitRegime div = classify_limit(1.0, 2.0, 1.0, ObservationMode::EigenbasisObservations);
  CHECK(!div.expected_limit.has_value());
  const LimitRegime rfl = classify_limit(4.0, 2.0, 1.0, ObservationMode::EigenbasisObservations);
  CHECK(!rfl.expected_limit.has_value());
}

TEST_CASE("classifier is total in eigenbasis mode and consistent in point mode") {
  const std::vector<double> ps{0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0};
  const std::vector<double> alphas{0.5, 1.0, 2.0, 3.0};
  const std::vector<double> gammas{-2.0, -1.0, -0.5, 0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
  for (double p : ps) {
    for (double a : alphas) {
      for (double g : gammas) {
        const RegimeTag eigen = classify_limit(p, a, g, ObservationMode::EigenbasisObservations).tag;
        CHECK(eigen != RegimeTag::Unspecified);
        const RegimeTag point = classify_limit(p, a, g, ObservationMode::PointObservations).tag;
        if (point != RegimeTag::Unspecified) CHECK(point == eigen);
      }
    }
  }
}

TEST_CASE("classifier rejects bad domain") {
  CHECK_THROWS_AS(classify_limit(0.0, 2.0, 0.0, ObservationMode::EigenbasisObservations),
                  ParameterDomainError);
  CHECK_THROWS_AS(classify_limit(1.0, -2.0, 0.0, ObservationMode::PointObservations),
                  ParameterDomainError);
}

TEST_CASE("regime names") {
  CHECK(std::string(to_string(RegimeTag::ConvergesToTrueBeta)) == "ConvergesToTrueBeta");
  CHECK(std::string(to_string(RegimeTag::ConvergesToZero)) == "ConvergesToZero");
  CHECK(std::string(to_string(RegimeTag::DivergesSigned)) == "DivergesSigned");
  CHECK(std::string(to_string(RegimeTag::RandomFiniteLimit)) == "RandomFiniteLimit");
  CHECK(std::string(to_string(RegimeTag::Unspecified)) == "Unspecified");
}

TEST_CASE("an_bn hand examples") {
  const SpectralModel m = two_term_model();
  const AnBn r = an_bn_terms(m, 2);
  CHECK(r.a_n == doctest::Approx(17.0 / 5.0).epsilon(1e-15));
  CHECK(r.b_n == doctest::Approx(1.0 / 5.0).epsilon(1e-15));

  const AnBn r1 = an_bn_terms(m, 1);
  CHECK(r1.b_n == doctest::Approx(1.0).epsilon(1e-15));

  SpectralModel flat = SpectralModel::power_law(2.0, 1.0, 2.0, 0.0, 0.7);
  for (std::int64_t n : {1, 10, 313}) {
    CHECK(an_bn_terms(flat, n).a_n == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("an_bn against long-double oracle on random spectra") {
  Rng rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    const double eta = 0.5 + 2.0 * rng.uniform();
    const double p = 0.3 + 3.0 * rng.uniform();
    const double alpha = 0.3 + 2.0 * rng.uniform();
    const double gamma = -1.0 + 2.0 * rng.uniform();
    const SpectralModel m = SpectralModel::power_law(eta, p, alpha, gamma, 1.0);
    const std::int64_t n = 5 + static_cast<std::int64_t>(rng.uniform() * 200);
    const AnBnOracle o = an_bn_oracle(m, n);
    const AnBn r = an_bn_terms(m, n);
    CHECK(r.a_n == doctest::Approx(static_cast<double>(o.num / o.den)).epsilon(1e-12));
    CHECK(r.b_n == doctest::Approx(static_cast<double>(1.0L / o.den)).epsilon(1e-12));
  }
}

TEST_CASE("an weighted-average bounds") {
  const SpectralModel m = SpectralModel::power_law(2.0, 1.0, 2.0, 0.75, 1.0);
  for (std::int64_t n : {2, 17, 400}) {
    double lo = 1e300, hi = -1e300;
    for (std::int64_t j = 1; j <= n; ++j) {
      const double v = std::pow(m.lambda_s(j), m.gamma);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double a = an_bn_terms(m, n).a_n;
    CHECK(a >= lo - 1e-12);
    CHECK(a <= hi + 1e-12);
  }
}

TEST_CASE("beta_hat single term and determinism") {
  const SpectralModel m = SpectralModel::power_law(2.0, 1.0, 2.0, 0.3, 1.4);
  const double once = eigenbasis_beta_hat(m, 1, 7);
  const double again = eigenbasis_beta_hat(m, 1, 7);
  CHECK(once == again);
  CHECK(eigenbasis_beta_hat(m, 1, 8) != once);

  // With n = 1 the estimate is Y_1 / x_1 regardless of the weights;
  // reconstruct Y_1 from a beta shift: same seed, same noise.
  SpectralModel shifted = m;
  shifted.beta_true = m.beta_true + 2.0;
  const double diff = eigenbasis_beta_hat(shifted, 1, 7) - once;
  CHECK(diff == doctest::Approx(2.0 * std::pow(m.lambda_s(1), m.gamma)).epsilon(1e-12));
}

TEST_CASE("beta_hat responds linearly in beta with shared noise") {
  const SpectralModel base = SpectralModel::power_law(2.0, 1.5, 1.0, -0.4, 0.0);
  SpectralModel moved = base;
  moved.beta_true = 3.0;
  for (std::int64_t n : {5, 64, 333}) {
    const double d = eigenbasis_beta_hat(moved, n, 11) - eigenbasis_beta_hat(base, n, 11);
    CHECK(d == doctest::Approx(3.0 * an_bn_terms(base, n).a_n).epsilon(1e-11));
  }
}

TEST_CASE("beta_hat mean shift from m coefficients") {
  SpectralModel base = SpectralModel::power_law(2.0, 1.0, 2.0, 0.0, 0.0);
  SpectralModel with_m = base;
  with_m.m_coeff = [](std::int64_t j) { return 0.5 / static_cast<double>(j * j); };
  const std::int64_t n = 40;
  long double num = 0.0L, den = 0.0L;
  for (std::int64_t j = n; j >= 1; --j) {
    const long double w = std::pow(static_cast<long double>(base.lambda(j)),
                                   static_cast<long double>(base.alpha));
    const long double x = base.x_coeff(j);
    num += w * x * (0.5L / static_cast<long double>(j * j));
    den += w * x * x;
  }
  const double d = eigenbasis_beta_hat(with_m, n, 3) - eigenbasis_beta_hat(base, n, 3);
  CHECK(d == doctest::Approx(static_cast<double>(num / den)).epsilon(1e-11));
}

TEST_CASE("beta_hat path shares the prefix draws") {
  const SpectralModel m = SpectralModel::power_law(2.0, 1.0, 2.0, 0.0, 1.0);
  const std::vector<std::int64_t> ns{10, 50, 200};
  const std::vector<double> path = eigenbasis_beta_hat_path(m, ns, 2024);
  REQUIRE(path.size() == 3);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    CHECK(path[i] == eigenbasis_beta_hat(m, ns[i], 2024));
  }
  CHECK_THROWS_AS(eigenbasis_beta_hat_path(m, {10, 10}, 1), ParameterDomainError);
}

TEST_CASE("beta_hat mean and variance match the closed-form identities") {
  const SpectralModel m = SpectralModel::power_law(2.0, 1.0, 2.0, 0.0, 1.0);
  const std::int64_t n = 10;
  const int seeds = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const double b = eigenbasis_beta_hat(m, n, derive_seed(5000, {static_cast<std::uint64_t>(s)}));
    sum += b;
    sumsq += b * b;
  }
  const double mean = sum / seeds;
  const double var = sumsq / seeds - mean * mean;
  const AnBn ab = an_bn_terms(m, n);
  const double mc_se = std::sqrt(var / seeds);
  CHECK(std::abs(mean - m.beta_true * ab.a_n) < 4.0 * mc_se);
  CHECK(std::abs(var - ab.b_n) / ab.b_n < 0.2);
}

TEST_CASE("beta_hat degenerate design") {
  SpectralModel m = SpectralModel::power_law(2.0, 1.0, 2.0, 0.0, 1.0);
  m.x_coeff = [](std::int64_t) { return 0.0; };
  CHECK_THROWS_AS(eigenbasis_beta_hat(m, 10, 1), DegenerateDesignError);
  CHECK_THROWS_AS(an_bn_terms(m, 10), DegenerateDesignError);
}

TEST_CASE("convergence to zero regime shrinks along n") {
  SpectralModel m;
  m.lambda = [](std::int64_t j) { return static_cast<double>(j) * static_cast<double>(j); };
  m.lambda_s = m.lambda;
  m.x_coeff = [](std::int64_t j) { return 1.0 / static_cast<double>(j); };
  m.alpha = 1.0;
  m.gamma = -1.0;
  m.beta_true = 1.0;
  int shrank = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    const std::vector<double> path =
        eigenbasis_beta_hat_path(m, {100, 10000}, derive_seed(777, {static_cast<std::uint64_t>(s)}));
    if (std::abs(path[1]) < std::abs(path[0])) ++shrank;
  }
  CHECK(shrank >= 95);
}

TEST_CASE("beta_infinity_expectation") {
  // gamma = 0 in the random-limit regime (p >= alpha): the mean is beta
  const SpectralModel m = SpectralModel::power_law(2.0, 3.0, 2.0, 0.0, 0.37);
  CHECK(beta_infinity_expectation(m, 1000) == doctest::Approx(0.37).epsilon(1e-12));

  SpectralModel conv;
  conv.lambda = [](std::int64_t j) { return static_cast<double>(j) * static_cast<double>(j); };
  conv.lambda_s = conv.lambda;
  conv.x_coeff = [](std::int64_t j) { return std::pow(static_cast<double>(j), -3.0); };
  conv.alpha = 2.0;
  conv.gamma = -1.0;
  conv.beta_true = 1.0;
  // ||x||_C^2 = sum j^-2, whose tail past n is 1/n: the truncated ratio
  // moves by ~3.6e-4 between 1e3 and 1e4 terms, no less
  const double at_1e3 = beta_infinity_expectation(conv, 1000);
  const double at_1e4 = beta_infinity_expectation(conv, 10000);
  CHECK(std::abs(at_1e4 - at_1e3) < 1e-3);
  long double num = 0.0L, den = 0.0L;
  for (std::int64_t j = 10000; j >= 1; --j) {
    const long double w = std::pow(static_cast<long double>(j), 4.0L) *
                          std::pow(static_cast<long double>(j), -6.0L);
    num += w * std::pow(static_cast<long double>(j * j), -1.0L);
    den += w;
  }
  CHECK(at_1e4 == doctest::Approx(static_cast<double>(num / den)).epsilon(1e-12));
}

TEST_CASE("beta_infinity_expectation with mean term") {
  SpectralModel m;
  m.lambda = [](std::int64_t j) { return static_cast<double>(j) * static_cast<double>(j); };
  m.lambda_s = m.lambda;
  m.x_coeff = [](std::int64_t j) { return std::pow(static_cast<double>(j), -2.8); };
  m.alpha = 2.0;
  m.gamma = 0.0;
  m.beta_true = 0.0;
  m.m_coeff = [&](std::int64_t j) { return m.x_coeff(j) * std::pow(m.lambda(j), -2.0); };
  long double num = 0.0L, den = 0.0L;
  for (std::int64_t j = 10000; j >= 1; --j) {
    const long double x = powl(static_cast<long double>(j), -2.8L);
    const long double lam_a = powl(static_cast<long double>(j), 4.0L);
    num += lam_a * x * (x / lam_a);
    den += lam_a * x * x;
  }
  CHECK(beta_infinity_expectation(m, 10000) ==
        doctest::Approx(static_cast<double>(num / den)).epsilon(1e-10));
}

TEST_CASE("beta_infinity_expectation refuses divergent models") {
  // gamma > 0 with these spectra: the numerator sum diverges.
  const SpectralModel m = SpectralModel::power_law(2.0, 1.0, 2.0, 0.5, 1.0);
  CHECK_THROWS_AS(beta_infinity_expectation(m, 10000), RegimeError);
}

TEST_CASE("expected_limit dispatch") {
  const SpectralModel m = SpectralModel::power_law(2.0, 1.0, 2.0, 0.0, 2.5);
  LimitRegime regime;
  regime.tag = RegimeTag::ConvergesToTrueBeta;
  CHECK(expected_limit(m, regime, 100) == doctest::Approx(2.5));
  regime.tag = RegimeTag::ConvergesToZero;
  CHECK(expected_limit(m, regime, 100) == 0.0);
  regime.tag = RegimeTag::DivergesSigned;
  CHECK_THROWS_AS(expected_limit(m, regime, 100), RegimeError);
  regime.tag = RegimeTag::Unspecified;
  CHECK_THROWS_AS(expected_limit(m, regime, 100), RegimeError);
}

TEST_CASE("canonical coefficients pin the Sobolev index") {
  const CoefficientRule x = canonical_coefficients(1.0, 2.0);
  CHECK(x(1) == doctest::Approx(1.0).epsilon(1e-15));

  // s = p gives sum j^-1.01: convergent, but with tail ~ 100 n^-0.01, so
  // per-decade growth only shrinks, it does not vanish at any reachable j.
  // s = 1.5 > p gives sum j^-0.01: each decade adds ~10x the previous one.
  long double sum_c = 0.0L, sum_d = 0.0L;
  long double c_1e4 = 0.0L, c_1e5 = 0.0L, c_1e6 = 0.0L;
  long double d_1e4 = 0.0L, d_1e5 = 0.0L, d_1e6 = 0.0L;
  for (std::int64_t j = 1; j <= 1000000; ++j) {
    const long double xv = x(j);
    sum_c += powl(static_cast<long double>(j), 2.0L) * xv * xv;
    sum_d += powl(static_cast<long double>(j), 3.0L) * xv * xv;
    if (j == 10000) {
      c_1e4 = sum_c;
      d_1e4 = sum_d;
    } else if (j == 100000) {
      c_1e5 = sum_c;
      d_1e5 = sum_d;
    } else if (j == 1000000) {
      c_1e6 = sum_c;
      d_1e6 = sum_d;
    }
  }
  // convergent: per-decade increments decrease, relative growth stays small
  CHECK(static_cast<double>(c_1e6 - c_1e5) < static_cast<double>(c_1e5 - c_1e4));
  CHECK(static_cast<double>((c_1e5 - c_1e4) / c_1e4) < 0.25);
  CHECK(static_cast<double>((c_1e6 - c_1e5) / c_1e5) < 0.25);
  // divergent: per-decade increments grow by roughly 10x
  CHECK(static_cast<double>(d_1e6 - d_1e5) > 5.0 * static_cast<double>(d_1e5 - d_1e4));
  CHECK(static_cast<double>((d_1e5 - d_1e4) / d_1e4) > 5.0);
}

TEST_CASE("model validation") {
  SpectralModel ok = SpectralModel::power_law(2.0, 1.0, 2.0, 0.0, 1.0);
  CHECK_NOTHROW(validate_spectral_model(ok));

  SpectralModel bad = ok;
  bad.lambda = [](std::int64_t j) { return j == 3 ? -1.0 : static_cast<double>(j); };
  CHECK_THROWS_AS(validate_spectral_model(bad), ParameterDomainError);

  SpectralModel decreasing = ok;
  decreasing.lambda = [](std::int64_t j) { return 1.0 / static_cast<double>(j); };
  CHECK_THROWS_AS(validate_spectral_model(decreasing), ParameterDomainError);

  SpectralModel zero_x = ok;
  zero_x.x_coeff = [](std::int64_t) { return 0.0; };
  CHECK_THROWS_AS(validate_spectral_model(zero_x), DegenerateDesignError);

  CHECK_THROWS_AS(SpectralModel::power_law(-2.0, 1.0, 2.0, 0.0, 1.0), ParameterDomainError);
}

}  // TEST_SUITE
