#include "resfluor/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "resfluor/error.hpp"

namespace resfluor {

namespace {

constexpr double kUnitTolerance = 1e-12;

void require_unit(const Vec3& v, const char* name) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > kUnitTolerance)
    throw Error(ErrorCode::InvalidParameters, std::string(name) + " must be a unit vector");
}

std::complex<double> unit_phasor(double phi) { return {std::cos(phi), std::sin(phi)}; }

}  // namespace

void SceneGeometry::validate() const {
  if (atom_positions.empty()) throw Error(ErrorCode::InvalidParameters, "scene has no atoms");
  for (const auto& r : atom_positions)
    if (!r.allFinite()) throw Error(ErrorCode::InvalidParameters, "non-finite atom position");
  require_unit(laser_direction, "laser direction");
  require_unit(dipole_direction, "dipole direction");
  require_unit(detector1, "detector 1 direction");
  require_unit(detector2, "detector 2 direction");
  if (!(wavelength > 0.0)) throw Error(ErrorCode::InvalidParameters, "wavelength must be positive");
}

Vec3 azimuth_direction(double phi) { return {std::cos(phi), std::sin(phi), 0.0}; }

SceneGeometry linear_chain_scene(int n_atoms, double spacing, double phi2) {
  if (n_atoms < 1) throw Error(ErrorCode::InvalidParameters, "n_atoms must be positive");
  SceneGeometry scene;
  scene.atom_positions.reserve(n_atoms);
  for (int n = 0; n < n_atoms; ++n) scene.atom_positions.emplace_back(0.0, 0.0, spacing * n);
  scene.detector2 = azimuth_direction(phi2);
  return scene;
}

Vec3 emission_vector(const Vec3& detector_dir, const Vec3& dipole_dir) {
  return dipole_dir - dipole_dir.dot(detector_dir) * detector_dir;
}

double pattern_angle(const Vec3& g1, const Vec3& g2) {
  const double n1 = g1.norm();
  const double n2 = g2.norm();
  if (n1 < 1e-12 || n2 < 1e-12)
    throw Error(ErrorCode::DegeneratePattern, "detector lies on the dipole axis");
  return std::acos(std::clamp(g1.dot(g2) / (n1 * n2), -1.0, 1.0));
}

EmissionVectors emission_vectors(const SceneGeometry& scene) {
  EmissionVectors ev;
  ev.g1 = emission_vector(scene.detector1, scene.dipole_direction);
  ev.g2 = emission_vector(scene.detector2, scene.dipole_direction);
  ev.theta = pattern_angle(ev.g1, ev.g2);
  return ev;
}

PhaseSums phase_sums_from(std::vector<std::array<double, 2>> phases) {
  PhaseSums ps;
  ps.phases = std::move(phases);
  for (const auto& p : ps.phases) {
    ps.s1 += unit_phasor(p[0]);
    ps.s2 += unit_phasor(p[1]);
    ps.s12 += unit_phasor(p[0] - p[1]);
  }
  return ps;
}

PhaseSums zero_phases(int n_atoms) {
  return phase_sums_from(std::vector<std::array<double, 2>>(n_atoms, {0.0, 0.0}));
}

PhaseSums phase_factors(const SceneGeometry& scene) {
  scene.validate();
  std::vector<std::array<double, 2>> phases;
  phases.reserve(scene.size());
  const std::array<Vec3, 2> k{scene.laser_direction - scene.detector1,
                              scene.laser_direction - scene.detector2};
  for (const auto& r : scene.atom_positions) {
    std::array<double, 2> phi{};
    for (int j = 0; j < 2; ++j) {
      // Path difference in wavelengths, reduced to [-1/2, 1/2] before scaling
      // so that integer-wavelength spacings give exactly zero phase.
      const double cycles = k[j].dot(r) / scene.wavelength;
      phi[j] = 2.0 * std::numbers::pi * std::remainder(cycles, 1.0);
    }
    phases.push_back(phi);
  }
  return phase_sums_from(std::move(phases));
}

}  // namespace resfluor
