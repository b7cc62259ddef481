#pragma once

// SI constants used by the trap model. Values are CODATA 2018 exact or
// recommended; 4 pi eps0 is kept at the precision it is usually quoted with.
namespace resfluor::si {

inline constexpr double elementary_charge = 1.602176634e-19;   // C
inline constexpr double hbar = 1.054571817e-34;                // J s
inline constexpr double four_pi_eps0 = 1.11265006e-10;         // F/m

}  // namespace resfluor::si
