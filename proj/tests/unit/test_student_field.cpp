#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ltt/errors.hpp"
#include "ltt/rng.hpp"
#include "ltt/student_field.hpp"

using namespace ltt;

namespace {

FieldArchitecture small_arch() {
  FieldArchitecture a;
  a.input_dim = 3;
  a.hidden_dims = {6, 5};
  a.time_features = 2;
  return a;
}

StudentField perturbed(std::uint64_t seed) {
  StudentField f(small_arch(), seed);
  Rng rng(seed + 100);
  for (std::size_t i = 0; i < f.parameter_count(); ++i) f.set_parameter(i, 0.5 * rng.normal());
  return f;
}

double loss(const StudentField& f, const Vector& x, double t, const Vector& target) {
  const Vector v = f.forward(x, t);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += (v[i] - target[i]) * (v[i] - target[i]);
  return s;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "ltt_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("student_field") {
  TEST_CASE("untrained field is zero") {
    const StudentField f(small_arch(), 5);
    for (double t : {0.0, 0.4, 1.0}) CHECK(f.forward(Vector{1.0, -2.0, 0.5}, t) == Vector(3, 0.0));
    CHECK(f.parameter_count() == (8 * 6 + 6) + (6 * 5 + 5) + (5 * 3 + 3));
  }

  TEST_CASE("initialization is deterministic in the seed") {
    const StudentField a(small_arch(), 9), b(small_arch(), 9), c(small_arch(), 10);
    bool differs = false;
    for (std::size_t i = 0; i < a.parameter_count(); ++i) {
      CHECK(a.parameter(i) == b.parameter(i));
      differs = differs || a.parameter(i) != c.parameter(i);
    }
    CHECK(differs);
  }

  TEST_CASE("backward matches finite differences") {
    StudentField f = perturbed(2);
    const Vector x{0.3, -0.7, 1.1}, target{0.2, 0.1, -0.4};
    const double t = 0.37;
    f.zero_grad();
    const double l = f.backward(x, t, target);
    CHECK(l == doctest::Approx(loss(f, x, t, target)).epsilon(1e-14));
    const double h = 1e-4;
    double worst = 0.0;
    for (std::size_t i = 0; i < f.parameter_count(); ++i) {
      const double p = f.parameter(i);
      auto at = [&](double d) {
        f.set_parameter(i, p + d);
        const double r = loss(f, x, t, target);
        f.set_parameter(i, p);
        return r;
      };
      const double fd = (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h);
      const double g = f.gradient(i);
      worst = std::max(worst, std::abs(g - fd) / std::max(1e-6, std::abs(g) + std::abs(fd)));
    }
    CHECK(worst <= 1e-5);
  }

  TEST_CASE("gradients accumulate linearly with scale") {
    StudentField f = perturbed(3);
    const Vector x{0.1, 0.2, 0.3}, target{1.0, 0.0, -1.0};
    f.zero_grad();
    f.backward(x, 0.5, target, 1.0);
    std::vector<double> once(f.parameter_count());
    for (std::size_t i = 0; i < once.size(); ++i) once[i] = f.gradient(i);
    f.backward(x, 0.5, target, 2.0);
    for (std::size_t i = 0; i < once.size(); ++i) CHECK(f.gradient(i) == doctest::Approx(3.0 * once[i]));
    f.zero_grad();
    for (std::size_t i = 0; i < once.size(); ++i) CHECK(f.gradient(i) == 0.0);
  }

  TEST_CASE("first Adam step moves each parameter by about lr") {
    StudentField f = perturbed(4);
    const Vector x{0.5, 0.5, 0.5}, target{3.0, 3.0, 3.0};
    f.zero_grad();
    f.backward(x, 0.2, target);
    std::vector<double> before(f.parameter_count()), grad(f.parameter_count());
    for (std::size_t i = 0; i < before.size(); ++i) {
      before[i] = f.parameter(i);
      grad[i] = f.gradient(i);
    }
    AdamConfig cfg;
    cfg.learning_rate = 1e-2;
    f.adam_step(cfg);
    CHECK(f.adam_steps_taken() == 1);
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (std::abs(grad[i]) < 1e-4) continue;
      const double step = f.parameter(i) - before[i];
      CHECK(step == doctest::Approx(-std::copysign(1e-2, grad[i])).epsilon(1e-3));
      CHECK(f.gradient(i) == 0.0);
    }
  }

  TEST_CASE("checkpoint round trip is bit exact") {
    const StudentField f = perturbed(6);
    const auto path = scratch("rt.json");
    save_checkpoint(f, path);
    const StudentField g = load_checkpoint(path);
    REQUIRE(g.parameter_count() == f.parameter_count());
    for (std::size_t i = 0; i < f.parameter_count(); ++i) CHECK(g.parameter(i) == f.parameter(i));
    CHECK(g.architecture().hidden_dims == f.architecture().hidden_dims);
    CHECK(g.architecture().time_features == f.architecture().time_features);
    CHECK(g.forward(Vector{0.1, 0.2, 0.3}, 0.6) == f.forward(Vector{0.1, 0.2, 0.3}, 0.6));
  }

  TEST_CASE("damaged checkpoints are rejected") {
    const std::string text = checkpoint_to_string(perturbed(7));
    CHECK_THROWS_AS(checkpoint_from_string(text.substr(0, text.size() / 2)), ParseError);
    CHECK_THROWS_AS(checkpoint_from_string("{}"), ParseError);
    std::string other = text;
    const auto pos = other.find("\"version\":1");
    REQUIRE(pos != std::string::npos);
    other.replace(pos, 11, "\"version\":2");
    CHECK_THROWS_AS(checkpoint_from_string(other), VersionError);
    const auto path = scratch("truncated.json");
    {
      std::ofstream out(path, std::ios::binary);
      out << text.substr(0, 40);
    }
    CHECK_THROWS_AS(load_checkpoint(path), ParseError);
    CHECK_THROWS(load_checkpoint(scratch("does_not_exist.json")));
  }

  TEST_CASE("invalid architecture and inputs") {
    FieldArchitecture a = small_arch();
    a.input_dim = 0;
    CHECK_THROWS(StudentField(a, 1));
    const StudentField f(small_arch(), 1);
    CHECK_THROWS_AS(f.forward(Vector{1.0}, 0.5), ShapeError);
  }
}
