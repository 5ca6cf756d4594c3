#include <doctest.h>

#include <cmath>

#include "ltt/errors.hpp"
#include "ltt/metrics.hpp"

using namespace ltt;

TEST_SUITE("metrics") {
  TEST_CASE("mse and psnr") {
    const Vector a{0.0, 0.5, 1.0, 0.25};
    const Vector b{0.1, 0.5, 0.9, 0.25};
    CHECK(mse(a, b) == doctest::Approx(0.005));
    CHECK(psnr(a, b) == doctest::Approx(10.0 * std::log10(200.0)));
    CHECK(psnr(a, b, 255.0) == doctest::Approx(10.0 * std::log10(255.0 * 255.0 / 0.005)));
    CHECK(std::isinf(psnr(a, a)));
    CHECK(psnr_from_mse(0.01) == doctest::Approx(20.0));
    CHECK_THROWS_AS(mse(a, Vector{1.0}), ShapeError);
  }

  TEST_CASE("delta psnr") {
    const Vector clean{0.2, 0.4};
    const Vector decoded{0.21, 0.41};
    const Vector received{0.3, 0.5};
    CHECK(delta_psnr(clean, decoded, received) == doctest::Approx(20.0));
    CHECK(delta_psnr(clean, clean, received) == kDeltaPsnrCeiling);
    CHECK(delta_psnr(clean, received, clean) == -kDeltaPsnrCeiling);
    CHECK(delta_psnr(clean, clean, clean) == 0.0);
    const MetricReport r = evaluate(clean, decoded, received);
    CHECK(r.mse == doctest::Approx(1e-4));
    CHECK(r.psnr_db == doctest::Approx(40.0));
    CHECK(r.delta_psnr_db == doctest::Approx(20.0));
  }
}
