#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "resosc/borel.hpp"
#include "resosc/errors.hpp"
#include "resosc/series.hpp"

using namespace resosc;

namespace {

BorelSeries make_series(std::vector<Rational> coeffs, int level = 0) {
  BorelSeries b;
  b.level = level;
  b.coeffs = std::move(coeffs);
  return b;
}

// Borel coefficients of 1/(1 - r xi): b_k = r^k, exact.
BorelSeries geometric(long num, long den, int count) {
  std::vector<Rational> c;
  Rational term(1);
  const Rational ratio(num, den);
  for (int k = 0; k < count; ++k) {
    c.push_back(term);
    term *= ratio;
  }
  return make_series(std::move(c));
}

const BorelSeries& ground_borel_60() {
  static const BorelSeries b = borel_transform(rs_recursion(0, 60).energy);
  return b;
}

}  // namespace

TEST_CASE("borel_transform divides by k!") {
  EnergySeries s;
  s.level = 0;
  s.coeffs = {Rational(1, 2), Rational(3, 4), Rational(-21, 8)};
  const auto b = borel_transform(s);
  CHECK(b.coeffs == std::vector<Rational>{Rational(1, 2), Rational(3, 4),
                                          Rational(-21, 16)});

  EnergySeries empty;
  CHECK(borel_transform(empty).coeffs.empty());

  const auto row0 = borel_transform(rs_recursion(0, 6).energy);
  CHECK(row0.coeffs[6] == *Rational::parse("-65518401/1024") / Rational(720));
}

TEST_CASE("pade recovers exact rational functions") {
  // 1/(1 + xi)
  const auto p = pade(geometric(-1, 1, 4), 0, 1);
  CHECK(p.num == std::vector<Rational>{Rational(1)});
  CHECK(p.den == std::vector<Rational>{Rational(1), Rational(1)});

  // exp(xi) truncated at order 4, [2/2]: (1 + x/2 + x^2/12)/(1 - x/2 + x^2/12)
  std::vector<Rational> exp_coeffs;
  for (unsigned k = 0; k <= 4; ++k)
    exp_coeffs.push_back(Rational(1) / Rational(factorial(k), 1));
  const auto pe = pade(make_series(std::move(exp_coeffs)), 2, 2);
  CHECK(pe.num == std::vector<Rational>{Rational(1), Rational(1, 2),
                                        Rational(1, 12)});
  CHECK(pe.den == std::vector<Rational>{Rational(1), Rational(-1, 2),
                                        Rational(1, 12)});
}

TEST_CASE("pade re-expansion postcondition holds on the ground state") {
  // The constructor itself verifies the exact Taylor match through L+M.
  const auto p = pade(ground_borel_60(), 10, 10);
  CHECK(p.eval(0.0) == doctest::Approx(0.5));
  CHECK(p.num.size() == 11);
  CHECK(p.den.size() == 11);
  CHECK(p.den[0] == Rational(1));
}

TEST_CASE("pade error paths") {
  // series of f = xi: the [0/1] system has a zero pivot
  try {
    pade(make_series({Rational(0), Rational(1), Rational(0)}), 0, 1);
    FAIL("expected SingularPadeSystem");
  } catch (const SingularPadeSystem& e) {
    CHECK(e.rank == 0);
  }
  CHECK_THROWS_AS(pade(make_series({Rational(1)}), 1, 1), InsufficientOrder);
}

TEST_CASE("poly_roots on a factored quadratic") {
  const auto roots = poly_roots({1.0, -1.0, -2.0});  // (1 + x)(1 - 2x)
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].real() == doctest::Approx(-1.0));
  CHECK(roots[1].real() == doctest::Approx(0.5));
  CHECK(poly_roots({5.0}).empty());
}

TEST_CASE("singularity of 1/(1+3xi) is found at -1/3 by both methods") {
  const auto b = geometric(-3, 1, 16);
  const auto sp = singularity_estimate(b, SingularityMethod::PadePole);
  CHECK(std::abs(sp.location - std::complex<double>(-1.0 / 3.0, 0.0)) < 1e-12);
  CHECK(sp.stability < 1e-12);

  const auto sr = singularity_estimate(b, SingularityMethod::RatioTest);
  CHECK(std::abs(sr.location - std::complex<double>(-1.0 / 3.0, 0.0)) < 1e-12);
}

TEST_CASE("ground-state singularity: methods agree on the negative axis") {
  const auto& b = ground_borel_60();
  const auto sp = singularity_estimate(b, SingularityMethod::PadePole);
  const auto sr = singularity_estimate(b, SingularityMethod::RatioTest);

  CHECK(sp.location.real() < 0.0);
  CHECK(sp.location.imag() == 0.0);
  CHECK(sr.location.real() < 0.0);
  const double agree =
      std::abs(sp.location - sr.location) / std::abs(sp.location);
  CHECK(agree < 0.02);

  // frozen regression values
  CHECK(sp.location.real() == doctest::Approx(-0.33456273).epsilon(1e-5));
  CHECK(sr.location.real() == doctest::Approx(-0.33333461).epsilon(1e-6));

  CHECK_THROWS_AS(
      singularity_estimate(make_series({Rational(1), Rational(1)}),
                           SingularityMethod::RatioTest),
      InsufficientOrder);
}

TEST_CASE("laplace_sum of a constant approximant is the constant") {
  const auto p = pade(make_series({Rational(5, 2)}), 0, 0);
  const auto r = laplace_sum(p, 0.7);
  CHECK(r.value == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("laplace_sum approaches the zeroth coefficient as g -> 0+") {
  const auto p = pade(ground_borel_60(), 10, 10);
  const auto r = laplace_sum(p, 1e-4);
  CHECK(r.value == doctest::Approx(0.5 + 0.75e-4).epsilon(1e-6));
}

TEST_CASE("laplace_sum rejects contour poles and non-positive coupling") {
  // 1/(1 - xi) has its pole at +1
  try {
    laplace_sum(pade(geometric(1, 1, 4), 0, 1), 0.1);
    FAIL("expected PoleOnContour");
  } catch (const PoleOnContour& e) {
    CHECK(e.pole.real() == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(laplace_sum(pade(ground_borel_60(), 10, 10), 0.0),
                  std::invalid_argument);
}

TEST_CASE("quadrature refinement deltas shrink under node doubling") {
  const auto p = pade(ground_borel_60(), 12, 12);
  for (double g : {0.1, 0.3}) {
    const auto r = laplace_sum(p, g);
    for (std::size_t i = 1; i < r.refinement_deltas.size(); ++i)
      CHECK(r.refinement_deltas[i] < r.refinement_deltas[i - 1]);
    CHECK(r.error_estimate > 0.0);
  }
}

TEST_CASE("shipped-default poles stay in the closed left half-plane") {
  const auto p = pade(ground_borel_60(), 12, 12);
  const auto poles = filtered_poles(p);
  CHECK(!poles.empty());
  for (const auto& pole : poles) CHECK(pole.real() <= 1e-8);
}

TEST_CASE("fit_large_order recovers synthetic growth parameters") {
  // E_k = (-1)^{k+1} * 2 * k! * (3/4)^k * k^{-3/2}
  EnergySeries s;
  s.level = 0;
  s.coeffs.push_back(Rational(1));
  for (unsigned k = 1; k <= 120; ++k) {
    const double km32 = std::pow(static_cast<double>(k), -1.5);
    const Rational approx(
        mpz_class(static_cast<long>(std::llround(km32 * 1e15))),
        mpz_class(1000000000000000L));
    Rational value = Rational(2) * Rational(factorial(k), 1) * approx;
    for (unsigned j = 0; j < k; ++j) value *= Rational(3, 4);
    if (k % 2 == 0) value = -value;
    s.coeffs.push_back(value);
  }
  const auto fit = fit_large_order(s, 40, 120);
  CHECK(fit.growth_rate == doctest::Approx(0.75).epsilon(1e-3));
  CHECK(fit.subleading_exponent == doctest::Approx(-1.5).epsilon(1e-3));
  CHECK(fit.amplitude == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(!fit.degenerate);

  // sign pattern of the synthetic data, checked separately
  for (unsigned k = 1; k <= 120; ++k)
    CHECK(s.coeffs[k].sign() == (k % 2 == 1 ? 1 : -1));
}

TEST_CASE("fit_large_order error paths") {
  EnergySeries constant;
  constant.level = 0;
  constant.coeffs.assign(40, Rational(0));
  constant.coeffs[0] = Rational(5, 2);
  CHECK_THROWS_AS(fit_large_order(constant, 1, 39), InsufficientOrder);

  const auto s = rs_recursion(0, 20).energy;
  CHECK_THROWS_AS(fit_large_order(s, 10, 15), InsufficientOrder);
  CHECK_THROWS_AS(fit_large_order(s, 10, 40), InsufficientOrder);
}

TEST_CASE("growth rate is reciprocal to the singularity location") {
  for (int n = 0; n <= 2; ++n) {
    const auto s = rs_recursion(n, 60).energy;
    const auto fit = fit_large_order(s, 20, 60);
    const auto sr = singularity_estimate(borel_transform(s),
                                         SingularityMethod::RatioTest);
    CHECK(fit.growth_rate * std::abs(sr.location) ==
          doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("resummation tracks the spectral oracle at small couplings") {
  // frozen value, computed at [15/15] and stable against order changes
  const auto p15 = pade(ground_borel_60(), 15, 15);
  CHECK(laplace_sum(p15, 0.02).value ==
        doctest::Approx(0.51408642731757292).epsilon(1e-10));

  const struct {
    double g;
    double value;  // spectral oracle at N = 256
    double tol;
  } cases[] = {{0.01, 0.50725620452460307, 1e-6},
               {0.02, 0.51408642731757292, 1e-6},
               {0.05, 0.53264275477185885, 1e-5}};
  const auto p12 = pade(ground_borel_60(), 12, 12);
  for (const auto& c : cases) {
    const auto r = laplace_sum(p12, c.g);
    CHECK(std::fabs(r.value - c.value) / c.value < c.tol);
  }
}

TEST_CASE("stokes_constant alternates with level parity") {
  LargeOrderFit fit;
  fit.subleading_exponent = -1.5;
  fit.amplitude = 0.44;
  CHECK(stokes_constant(fit, 0) > 0.0);
  CHECK(stokes_constant(fit, 1) == doctest::Approx(-stokes_constant(fit, 0)));
}

TEST_CASE("report_json emits the exact field set in order") {
  const std::string s = report_json(0, "pade-pole", 60, 0.5, 0.25, 0.125);
  CHECK(s ==
        "{\"level\": 0, \"method\": \"pade-pole\", \"order_used\": 60, "
        "\"value\": 0.5, \"error_estimate\": 0.25, \"stability\": 0.125}");
  // 17 significant digits on non-terminating values
  const std::string t = report_json(1, "ratio-test", 61, 1.0 / 3.0, 0.0, 0.0);
  CHECK(t.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("resummation_with_order_variation reports order stability") {
  const auto r =
      resummation_with_order_variation(ground_borel_60(), 12, 12, 0.05);
  CHECK(r.result.value == doctest::Approx(0.53264275477).epsilon(1e-9));
  CHECK(r.L == 12);
  CHECK(r.M == 12);
  CHECK(r.result.error_estimate >= r.order_variation);
}
