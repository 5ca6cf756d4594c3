#include <doctest.h>

#include <cmath>

#include "ltt/flow_path.hpp"
#include "ltt/ode_decoder.hpp"
#include "ltt/rng.hpp"
#include "ltt/scalar_bench.hpp"

using namespace ltt;

// Reference values below were computed with 40-digit arithmetic.
TEST_SUITE("scalar_bench") {
  TEST_CASE("gains") {
    CHECK(ltt_gain(ScalarModel(1.0, 0.0)) == 1.0);
    CHECK(ltt_gain(ScalarModel(1.0, 1.0)) == doctest::Approx(0.70710678118654752).epsilon(1e-14));
    CHECK(mmse_gain(ScalarModel(1.0, 0.0)) == 1.0);
    CHECK(mmse_gain(ScalarModel(1.0, 1.0)) == 0.5);
    CHECK(mmse_gain(ScalarModel(1.0, 0.1)) == doctest::Approx(0.9900990099009901).epsilon(1e-14));
    CHECK(ltt_gain(ScalarModel(2.0, 0.5)) == doctest::Approx(0.97014250014533189).epsilon(1e-14));
  }

  TEST_CASE("mse of a gain") {
    const ScalarModel m(1.0, 1.0);
    CHECK(mse_of_gain(m, mmse_gain(m)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mse_of_gain(m, 0.0) == 1.0);
    CHECK(mse_of_gain(m, ltt_gain(m)) == doctest::Approx(0.58578643762690495).epsilon(1e-13));
  }

  TEST_CASE("excess mse and its asymptote") {
    CHECK(excess_mse(ScalarModel(1.0, 0.0)) == 0.0);
    CHECK(excess_mse(ScalarModel(1.0, 0.1)) == doctest::Approx(2.4629481011827685e-5).epsilon(1e-10));
    CHECK(excess_mse(ScalarModel(1.0, 0.05)) == doctest::Approx(1.5566582757378859e-6).epsilon(1e-9));
    CHECK(excess_mse(ScalarModel(1.0, 0.01)) == doctest::Approx(2.4996250453074226e-9).epsilon(1e-7));
    CHECK(excess_mse(ScalarModel(2.0, 0.5)) == doctest::Approx(0.0035658811902860239).epsilon(1e-12));
    CHECK(excess_mse_asymptote(ScalarModel(1.0, 0.1)) == doctest::Approx(2.5e-5));
    double previous = 0.0;
    for (double sc : {0.1, 0.05, 0.01}) {
      const ScalarModel m(1.0, sc);
      const double ratio = excess_mse(m) / excess_mse_asymptote(m);
      CHECK(ratio < 1.0);
      CHECK(ratio > previous);
      previous = ratio;
    }
    CHECK(previous == doctest::Approx(1.0).epsilon(5e-3));
  }

  TEST_CASE("mmse gain minimizes the mse and ltt never beats it") {
    Rng rng(3);
    for (int k = 0; k < 50; ++k) {
      const ScalarModel m(0.1 + 2.0 * rng.uniform(), 2.0 * rng.uniform());
      const double best = mse_of_gain(m, mmse_gain(m));
      for (double a = -0.5; a <= 1.5; a += 0.001) CHECK(mse_of_gain(m, a) >= best - 1e-15);
      CHECK(mse_of_gain(m, ltt_gain(m)) >= best);
    }
  }

  TEST_CASE("exact decode") {
    const NoiseSchedule s(1.0);
    const ScalarModel m(1.0, 1.0);
    CHECK(exact_scalar_decode(0.0, m, s) == 0.0);
    CHECK(exact_scalar_decode(2.0, m, s) == doctest::Approx(1.41421356237).epsilon(1e-10));
    CHECK(exact_scalar_decode(1.0, ScalarModel(1.0, 0.3), s) == doctest::Approx(ltt_gain(ScalarModel(1.0, 0.3))));
  }

  TEST_CASE("scalar field") {
    const NoiseSchedule s(1.0);
    const ScalarModel m(1.0, 0.5);
    CHECK(scalar_field(0.0, 0.3, m, s) == 0.0);
    CHECK(scalar_field(2.0, 1.0, m, s) == 0.0);
    CHECK(scalar_field(1.0, 0.0, m, s) == doctest::Approx(-0.5));
    Rng rng(4);
    for (int k = 0; k < 100; ++k) {
      const double x = 4.0 * rng.normal(), t = rng.uniform();
      const ScalarModel mm(0.2 + rng.uniform(), 0.3);
      const double a = scalar_field(x, t, mm, s);
      const double b = marginal_field_gaussian(Vector{x}, t, Vector{0.0}, mm.sigma_x(), s)[0];
      CHECK(std::abs(a - b) <= 1e-12);
    }
  }

  TEST_CASE("midpoint integration agrees with the exact decode") {
    const NoiseSchedule s(1.0);
    const ScalarModel m(1.0, 1.0);
    const VelocityField f = [&](ConstSpan x, double t) { return Vector{scalar_field(x[0], t, m, s)}; };
    DecodeConfig cfg;
    cfg.solver = Solver::Midpoint;
    cfg.steps = 200;
    cfg.t_start = s.sigma_inv(1.0);
    const double numeric = integrate(f, Vector{2.0}, cfg)[0];
    CHECK(std::abs(numeric - exact_scalar_decode(2.0, m, s)) <= 1e-4);
    CHECK(numeric == doctest::Approx(1.41421).epsilon(1e-4));
  }

  TEST_CASE("invalid models") {
    CHECK_THROWS(ScalarModel(0.0, 1.0));
    CHECK_THROWS(ScalarModel(1.0, -0.1));
  }
}
