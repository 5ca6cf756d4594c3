#include <doctest.h>

#include <cmath>

#include "ltt/flow_path.hpp"

using namespace ltt;

TEST_SUITE("flow_path") {
  TEST_CASE("path endpoints") {
    const NoiseSchedule s(1.0);
    Rng rng(1);
    const Vector x1{0.3, -1.2, 2.0};
    const PathSample clean = sample_path(x1, 1.0, s, rng);
    CHECK(clean.x_t == x1);
    const Vector zero(3, 0.0);
    const PathSample prior = sample_path(zero, 0.0, s, rng);
    CHECK(prior.x_t == prior.eps);
  }

  TEST_CASE("reconstruction identity is bit-exact") {
    const NoiseSchedule s(1.7);
    Rng rng(2);
    const Vector x1{0.1, 0.2, 0.3, 0.4};
    for (int k = 0; k < 100; ++k) {
      const PathSample p = sample_path(x1, rng.uniform(), s, rng);
      REQUIRE(p.x_t.size() == x1.size());
      REQUIRE(p.eps.size() == x1.size());
      for (std::size_t i = 0; i < x1.size(); ++i) CHECK(p.x_t[i] == x1[i] + s.sigma(p.t) * p.eps[i]);
    }
  }

  TEST_CASE("path variance at t = 0.5") {
    const NoiseSchedule s(1.0);
    Rng rng(3);
    const Vector x1{0.7};
    const int n = 100000;
    double m = 0.0, m2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = sample_path(x1, 0.5, s, rng).x_t[0] - x1[0];
      m += d;
      m2 += d * d;
    }
    const double var = m2 / n - (m / n) * (m / n);
    CHECK(var >= 0.245);
    CHECK(var <= 0.255);
  }

  TEST_CASE("teacher velocity") {
    const NoiseSchedule s(1.0);
    PathSample p;
    p.t = 1.0;
    p.x1 = {0.0, 0.0};
    p.eps = {2.0, -1.0};
    p.x_t = p.x1;
    CHECK(teacher_velocity(p, s) == Vector{-2.0, 1.0});
    p.t = 0.3;
    CHECK(teacher_velocity(p, s) == Vector{-2.0, 1.0});
    p.eps = {0.0, 0.0};
    CHECK(teacher_velocity(p, s) == Vector{0.0, 0.0});
  }

  TEST_CASE("eps form equals ratio form away from t = 1") {
    const NoiseSchedule s(1.0);
    Rng rng(4);
    const Vector x1{1.0, -2.0, 0.5};
    for (int k = 0; k < 200; ++k) {
      const PathSample p = sample_path(x1, 0.999 * rng.uniform(), s, rng);
      const Vector a = teacher_velocity(p, s);
      const Vector b = teacher_velocity_ratio(p.x_t, p.t, p.x1, s);
      double diff = 0.0, norm = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        diff += (a[i] - b[i]) * (a[i] - b[i]);
        norm += p.eps[i] * p.eps[i];
      }
      CHECK(std::sqrt(diff) <= 1e-9 * std::sqrt(norm));
    }
  }

  TEST_CASE("conditional density normalizes in 1-D") {
    const NoiseSchedule s(1.0);
    const Vector x1{0.4};
    double total = 0.0;
    const double dx = 1e-3;
    for (double x = -6.0; x <= 6.0; x += dx) total += conditional_density(Vector{x}, 0.3, x1, s) * dx;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("continuity residual") {
    const NoiseSchedule s(1.0);
    // At the mode the two terms cancel up to the finite-difference error.
    const Vector x1{0.3, -0.2};
    CHECK(continuity_residual(x1, 0.5, x1, s, 1e-4) <= 1e-6);
    // Second order in h for d = 1, 2, 8.
    for (std::size_t d : {1u, 2u, 8u}) {
      Vector a(d), b(d);
      for (std::size_t i = 0; i < d; ++i) {
        a[i] = 0.1 * static_cast<double>(i);
        b[i] = a[i] + 0.4 * (i % 2 == 0 ? 1.0 : -0.7);
      }
      const double r1 = continuity_residual(b, 0.4, a, s, 1e-2);
      const double r2 = continuity_residual(b, 0.4, a, s, 5e-3);
      CHECK(std::log2(r1 / r2) >= 1.9);
    }
  }

  TEST_CASE("Gaussian marginal field") {
    const NoiseSchedule s(1.0);
    const Vector mu{0.5, -1.0};
    CHECK(marginal_field_gaussian(mu, 0.4, mu, 0.8, s) == Vector{0.0, 0.0});
    CHECK(marginal_field_gaussian(Vector{2.0, 3.0}, 1.0, mu, 0.8, s) == Vector{0.0, 0.0});
    CHECK(marginal_field_gaussian(Vector{1.0}, 0.0, Vector{0.0}, 1.0, s)[0] == doctest::Approx(-0.5));
  }

  TEST_CASE("marginal field equals the conditional expectation of the teacher") {
    // E[sigma_dot eps | X_t = x] for X1 ~ N(0,1): eps | x ~ N(sigma x/(1+sigma^2), 1/(1+sigma^2)).
    // Estimated with self-normalized weights over X1 draws.
    const NoiseSchedule s(1.0);
    Rng rng(9);
    for (int probe = 0; probe < 20; ++probe) {
      const double x = 4.0 * rng.uniform() - 2.0;
      const double t = 0.9 * rng.uniform();
      const double sig = s.sigma(t);
      const int n = 100000;
      double wsum = 0.0, wsq = 0.0, wv = 0.0, wv2 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double x1 = rng.normal();
        const double eps = (x - x1) / sig;
        const double w = std::exp(-0.5 * eps * eps);
        const double u = s.sigma_dot(t) * eps;
        wsum += w;
        wsq += w * w;
        wv += w * u;
        wv2 += w * u * u;
      }
      const double mean = wv / wsum;
      const double var = wv2 / wsum - mean * mean;
      const double ess = wsum * wsum / wsq;
      const double se = std::sqrt(var / ess);
      const double exact = marginal_field_gaussian(Vector{x}, t, Vector{0.0}, 1.0, s)[0];
      CHECK(std::abs(mean - exact) <= 3.0 * se + 1e-3);
    }
  }
}
