#include <doctest.h>

#include <cmath>

#include "ltt/channel.hpp"
#include "ltt/complex_linalg.hpp"
#include "ltt/errors.hpp"

using namespace ltt;

namespace {

CMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  CMatrix m(r, c);
  for (auto& z : m.data) z = draw_cn(rng);
  return m;
}

double unitary_defect(const CMatrix& a) {
  return frobenius(subtract(multiply(adjoint(a), a), CMatrix::identity(a.cols)));
}

VelocityField zero_field() {
  return [](ConstSpan x, double) { return Vector(x.size(), 0.0); };
}

}  // namespace

TEST_SUITE("complex_linalg") {
  TEST_CASE("svd reconstructs and is unitary") {
    Rng rng(8);
    const std::vector<std::pair<std::size_t, std::size_t>> shapes{{1, 1}, {2, 2}, {3, 3}, {4, 2}, {4, 4}, {5, 3}};
    for (auto [r, c] : shapes) {
      for (int k = 0; k < 20; ++k) {
        const CMatrix h = random_matrix(r, c, rng);
        const SvdResult svd = complex_svd(h);
        CHECK(frobenius(subtract(svd.reconstruct(), h)) <= 1e-10 * std::max(1.0, frobenius(h)));
        CHECK(unitary_defect(svd.u) <= 1e-10);
        CHECK(unitary_defect(svd.v) <= 1e-10);
        for (std::size_t i = 1; i < svd.s.size(); ++i) CHECK(svd.s[i - 1] >= svd.s[i]);
        double energy = 0.0;
        for (double s : svd.s) energy += s * s;
        CHECK(energy == doctest::Approx(frobenius(h) * frobenius(h)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("known singular values") {
    const SvdResult d = complex_svd(CMatrix::diagonal({0.5, 3.0}));
    CHECK(d.s[0] == doctest::Approx(3.0));
    CHECK(d.s[1] == doctest::Approx(0.5));
    CMatrix one(1, 1);
    one(0, 0) = Complex(3.0, 4.0);
    CHECK(complex_svd(one).s[0] == doctest::Approx(5.0));
    CMatrix rank1(2, 2);
    rank1(0, 0) = 1.0;
    rank1(0, 1) = 1.0;
    rank1(1, 0) = 1.0;
    rank1(1, 1) = 1.0;
    const SvdResult r = complex_svd(rank1);
    CHECK(r.s[0] == doctest::Approx(2.0));
    CHECK(std::abs(r.s[1]) <= 1e-12);
    CHECK(unitary_defect(r.u) <= 1e-10);
    const SvdResult z = complex_svd(CMatrix(3, 3));
    for (double s : z.s) CHECK(s == 0.0);
    CHECK(unitary_defect(z.u) <= 1e-10);
  }

  TEST_CASE("wide matrices are rejected") { CHECK_THROWS_AS(complex_svd(CMatrix(2, 3)), ShapeError); }
}

TEST_SUITE("channel") {
  TEST_CASE("pack and unpack") {
    const Vector x{1, 2, 3, 4, 5};
    const ComplexVec z = pack_complex(x);
    REQUIRE(z.size() == 3);
    CHECK(z[0] == Complex(1, 2));
    CHECK(z[2] == Complex(5, 0));
    CHECK(unpack_complex(z, 5) == x);
    CHECK_THROWS_AS(unpack_complex(z, 7), ShapeError);
  }

  TEST_CASE("noise moments") {
    Rng rng(12);
    const Vector x(200000, 1.0);
    const Vector y = awgn(x, 0.3, rng);
    double s = 0.0, s2 = 0.0;
    for (double v : y) {
      s += v - 1.0;
      s2 += (v - 1.0) * (v - 1.0);
    }
    CHECK(std::abs(s / y.size()) <= 0.005);
    CHECK(s2 / y.size() == doctest::Approx(0.09).epsilon(0.02));
    double re2 = 0.0, im2 = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
      const Complex c = draw_cn(rng);
      re2 += c.real() * c.real();
      im2 += c.imag() * c.imag();
    }
    CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.02));
  }

  TEST_CASE("unit gain with lambda 1 halves the signal") {
    const NoiseSchedule sched(1.0);
    CMatrix h(1, 1);
    h(0, 0) = Complex(0.0, 1.0);
    ChannelParams p;
    p.sigma_ch = 0.4;
    p.lambda = 1.0;
    Rng rng(1);
    const ChannelReport r = mimo_equalize(ComplexVec{Complex(1, 1)}, h, p, sched, rng);
    CHECK(r.alpha[0] == doctest::Approx(0.5));
    CHECK(r.sigma_eff[0] == doctest::Approx(0.2));
    CHECK(r.t_star[0] == doctest::Approx(sched.sigma_inv(0.2)));
    ChannelParams d = p;
    d.debias = true;
    Rng rng2(1);
    const ChannelReport rd = mimo_equalize(ComplexVec{Complex(1, 1)}, h, d, sched, rng2);
    CHECK(rd.sigma_eff[0] == doctest::Approx(0.4));
    CHECK(std::abs(rd.equalized[0] - 2.0 * r.equalized[0]) <= 1e-12);
  }

  TEST_CASE("a zero mode is frozen") {
    const NoiseSchedule sched(1.0);
    ChannelParams p;
    p.sigma_ch = 0.1;
    p.lambda = 0.01;
    Rng rng(2);
    const ChannelReport r =
        mimo_equalize(ComplexVec{Complex(0.3, 0.1), Complex(0.2, 0.4)}, CMatrix::diagonal({2.0, 0.0}), p, sched, rng);
    CHECK(r.alpha[1] == 0.0);
    CHECK(r.sigma_eff[1] == 0.0);
    CHECK(r.t_star[1] == 1.0);
    CHECK(r.equalized[1] == Complex(0.0, 0.0));
  }

  TEST_CASE("noiseless identity channel is transparent") {
    const NoiseSchedule sched(1.0);
    ChannelParams p;
    p.sigma_ch = 0.0;
    p.lambda = 0.0;
    Rng rng(3);
    const Vector x{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    const ChannelReport r = mimo_equalize(pack_complex(x), CMatrix::identity(2), p, sched, rng, x.size());
    const Vector back = landing_point(r);
    REQUIRE(back.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-14));
  }

  TEST_CASE("transmit reports are self consistent") {
    const NoiseSchedule sched(1.0);
    Rng rng(5);
    ComplexVec x(32);
    for (auto& z : x) z = draw_cn(rng);
    for (bool fast : {false, true}) {
      ChannelParams p;
      p.sigma_ch = 0.3;
      p.lambda = 0.09;
      p.fast_fading = fast;
      Rng r1(9), r2(9);
      const ChannelReport a = mimo_transmit(x, 2, 2, p, sched, r1);
      const ChannelReport b = mimo_transmit(x, 2, 2, p, sched, r2);
      CHECK(a.equalized == b.equalized);
      CHECK(a.uses() == 16);
      CHECK(a.realizations.size() == (fast ? 16u : 1u));
      CHECK(report_consistency_error(a, sched) <= 1e-12);
      CHECK(mimo_decode(a, zero_field(), Solver::Midpoint, 10) == landing_point(a));
    }
  }

  TEST_CASE("rayleigh equalizer error variance") {
    const NoiseSchedule sched(1.0);
    Rng rng(6);
    const std::size_t n = 100000;
    ComplexVec x(n);
    for (auto& z : x) z = draw_cn(rng);
    ChannelParams p;
    p.sigma_ch = 0.5;
    p.lambda = 0.25;
    p.fast_fading = true;
    const ChannelReport r = rayleigh_equalize(x, p, sched, rng);
    double ratio = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Complex e = r.equalized[k] - r.alpha[k] * x[k];
      ratio += std::norm(e) / (r.sigma_eff[k] * r.sigma_eff[k]);
    }
    CHECK(ratio / n == doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("calibration failure names the channel") {
    const NoiseSchedule sched(1.0);
    ChannelParams p;
    p.sigma_ch = 3.0;
    p.lambda = 1e-6;
    Rng rng(1);
    try {
      mimo_equalize(ComplexVec{Complex(1, 0)}, CMatrix::identity(1), p, sched, rng);
      FAIL("expected CalibrationError");
    } catch (const CalibrationError& e) {
      CHECK(e.level() > e.sigma_max());
      CHECK(std::string(e.what()).find("singular") != std::string::npos);
    }
  }
}
