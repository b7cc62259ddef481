#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "resfluor/error.hpp"
#include "resfluor/geometry.hpp"

using namespace resfluor;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

}  // namespace

TEST_CASE("emission vector") {
  const Vec3 d = Vec3::UnitX();
  CHECK((emission_vector(Vec3::UnitY(), d) - d).norm() < 1e-15);
  CHECK(emission_vector(Vec3::UnitX(), d).norm() < 1e-15);
  const Vec3 diag = Vec3(1.0, 1.0, 0.0).normalized();
  CHECK(emission_vector(diag, d).squaredNorm() == doctest::Approx(0.5).epsilon(1e-15));

  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    const Vec3 e = random_unit(rng), dip = random_unit(rng);
    const Vec3 g = emission_vector(e, dip);
    CHECK(g.squaredNorm() + std::pow(dip.dot(e), 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(g.dot(e)) < 1e-12);
  }
}

TEST_CASE("pattern angle") {
  const Vec3 d = Vec3::UnitX();
  const Vec3 g1 = emission_vector(Vec3::UnitY(), d);
  CHECK(pattern_angle(g1, g1) == doctest::Approx(0.0));

  for (int k = 1; k < 60; ++k) {
    const double phi2 = 2.0 * std::numbers::pi * k / 60.0;
    if (std::abs(std::cos(phi2)) > 1.0 - 1e-9) continue;
    const Vec3 g2 = emission_vector(azimuth_direction(phi2), d);
    CHECK(std::cos(pattern_angle(g1, g2)) == doctest::Approx(std::abs(std::sin(phi2))).epsilon(1e-12));
  }

  try {
    pattern_angle(g1, emission_vector(Vec3::UnitX(), d));
    FAIL("expected degenerate-pattern");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegeneratePattern);
  }
}

TEST_CASE("phase factors") {
  SUBCASE("single atom at the origin") {
    SceneGeometry scene;
    scene.atom_positions = {Vec3::Zero()};
    const auto ps = phase_factors(scene);
    CHECK(ps.phases[0][0] == 0.0);
    CHECK(ps.s1 == std::complex<double>(1.0, 0.0));
    CHECK(ps.s2 == std::complex<double>(1.0, 0.0));
    CHECK(ps.s12 == std::complex<double>(1.0, 0.0));
  }
  SUBCASE("chain at ten-wavelength spacing is phase free") {
    for (int n : {1, 2, 5, 17}) {
      const auto ps = phase_factors(linear_chain_scene(n, 10.0, 0.7));
      for (const auto& phi : ps.phases) {
        CHECK(phi[0] == 0.0);
        CHECK(phi[1] == 0.0);
      }
      CHECK(ps.s1 == std::complex<double>(n, 0.0));
      CHECK(ps.s12 == std::complex<double>(n, 0.0));
    }
  }
  SUBCASE("tilted laser keeps s12 = N for detectors orthogonal to the chain") {
    for (double alpha : {0.01, 0.1, 0.37, 1.0}) {
      auto scene = linear_chain_scene(6, 10.0, 1.1);
      scene.laser_direction = Vec3(std::sin(alpha), 0.0, std::cos(alpha));
      const auto ps = phase_factors(scene);
      std::complex<double> direct{0.0, 0.0};
      for (int n = 0; n < 6; ++n) direct += std::polar(1.0, 20.0 * std::numbers::pi * n * std::cos(alpha));
      CHECK(std::abs(ps.s12 - 6.0) < 1e-12);
      CHECK(std::abs(std::abs(ps.s1) - std::abs(direct)) < 1e-9);
      CHECK(std::abs(ps.s1) <= 6.0 + 1e-12);
    }
  }
  SUBCASE("shifting atoms by one wavelength along z changes nothing") {
    auto scene = linear_chain_scene(4, 10.0, 0.4);
    scene.atom_positions[0] += Vec3(0.3, -0.2, 0.137);
    scene.atom_positions[2] += Vec3(0.0, 0.5, 0.61);
    const auto before = phase_factors(scene);
    for (auto& r : scene.atom_positions) r.z() += 1.0;
    const auto after = phase_factors(scene);
    CHECK(std::abs(before.s1 - after.s1) < 1e-12);
    CHECK(std::abs(before.s2 - after.s2) < 1e-12);
    CHECK(std::abs(before.s12 - after.s12) < 1e-12);
  }
  SUBCASE("rigid translation only rotates the sums") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
      SceneGeometry scene;
      scene.detector1 = random_unit(rng);
      scene.detector2 = random_unit(rng);
      scene.laser_direction = random_unit(rng);
      for (int n = 0; n < 5; ++n) scene.atom_positions.emplace_back(u(rng), u(rng), u(rng));
      const auto a = phase_factors(scene);
      const Vec3 shift(u(rng), u(rng), u(rng));
      for (auto& r : scene.atom_positions) r += shift;
      const auto b = phase_factors(scene);
      CHECK(std::abs(a.s1) == doctest::Approx(std::abs(b.s1)).epsilon(1e-10));
      CHECK(std::abs(a.s2) == doctest::Approx(std::abs(b.s2)).epsilon(1e-10));
      CHECK(std::abs(a.s12) == doctest::Approx(std::abs(b.s12)).epsilon(1e-10));
      CHECK(std::abs(a.s1) <= 5.0 + 1e-12);
      CHECK(std::abs(a.s12) <= 5.0 + 1e-12);
    }
  }
}

TEST_CASE("scene validation") {
  SceneGeometry scene;
  CHECK_THROWS_AS(scene.validate(), Error);
  scene.atom_positions = {Vec3::Zero()};
  scene.validate();
  scene.detector1 = Vec3(1.0, 1.0, 0.0);
  CHECK_THROWS_AS(scene.validate(), Error);
}
