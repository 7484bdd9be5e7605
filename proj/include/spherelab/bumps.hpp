#pragma once

#include <span>

namespace spherelab {

// Base profile: exp(1 - 1/(1-t^2)) on |t|<1, 0 outside. Equals 1 only at t=0.
double bump_profile(double t);

// Plateau bump: 1 on |t|<=1, C-infinity exp-based step down to 0 on 1<|t|<2,
// 0 on |t|>=2. This realizes "smooth, compactly supported, = 1 on the unit
// ball" with an honest plateau.
double plateau_bump(double t);

// Wide variant: plateau on |t|<=2, transition on 2<|t|<4. Satisfies
// wide(t) = 1 wherever plateau_bump(t) != 0, so wide*plateau == plateau.
double plateau_bump_wide(double t);

// Tensor bumps Phi(x) = prod_i profile(x_i / scale).
double tensor_plateau(std::span<const double> x, double scale);
double tensor_plateau_wide(std::span<const double> x, double scale);

// Cutoff scale for the frequency-localization windows. At this scale a window
// (support |w| < 2*scale per coordinate) contains at most one integer shift,
// nonzero integers are excluded, and the wide window stays clear of the
// neighboring shifts. See plateau_bump_wide.
inline constexpr double kFreqWindowScale = 0.125;

}  // namespace spherelab
