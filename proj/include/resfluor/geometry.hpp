#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace resfluor {

using Vec3 = Eigen::Vector3d;

/// Atoms, drive, dipole and the two far-field observation directions. Lengths
/// are in units of the driving wavelength.
struct SceneGeometry {
  std::vector<Vec3> atom_positions;
  Vec3 laser_direction = Vec3::UnitZ();
  Vec3 dipole_direction = Vec3::UnitX();
  Vec3 detector1 = Vec3::UnitY();
  Vec3 detector2{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2, 0.0};
  double wavelength = 1.0;

  std::size_t size() const { return atom_positions.size(); }
  void validate() const;
};

/// Linear chain along z with the given spacing, detector 2 at azimuth phi2 in
/// the x-y plane. Other directions keep the SceneGeometry defaults.
SceneGeometry linear_chain_scene(int n_atoms, double spacing, double phi2);

/// Unit vector in the x-y plane at azimuth phi.
Vec3 azimuth_direction(double phi);

struct EmissionVectors {
  Vec3 g1;
  Vec3 g2;
  double theta;
};

/// Far-field dipole pattern vector d - (d.e) e for unit d and e.
Vec3 emission_vector(const Vec3& detector_dir, const Vec3& dipole_dir);

/// Angle between two pattern vectors. Throws DegeneratePattern if either vanishes.
double pattern_angle(const Vec3& g1, const Vec3& g2);

EmissionVectors emission_vectors(const SceneGeometry& scene);

/// Interference phases phi[n][j] and the sums that carry all N-dependence of
/// the minor.
struct PhaseSums {
  std::vector<std::array<double, 2>> phases;
  std::complex<double> s1{0.0, 0.0};
  std::complex<double> s2{0.0, 0.0};
  std::complex<double> s12{0.0, 0.0};

  std::size_t size() const { return phases.size(); }
  std::complex<double> sum(int j) const { return j == 0 ? s1 : s2; }
};

/// Builds sums from explicit phases (radians).
PhaseSums phase_sums_from(std::vector<std::array<double, 2>> phases);

/// All-zero phases for N atoms: the optimal configuration.
PhaseSums zero_phases(int n_atoms);

PhaseSums phase_factors(const SceneGeometry& scene);

}  // namespace resfluor
