#pragma once

#include <numbers>

namespace ati {

// Natural units: hbar = c = m = 1, e^2 = alpha_fs.
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kAlphaFs = 1.0 / 137.035999;
inline constexpr double kElectronMassEv = 510998.95;
inline constexpr double kHbarCMevFm = 197.3269804;
inline constexpr double kGammaTwoThirds = 1.3541179394264005;

// Critical (Schwinger) field m^2 c^3 / (e hbar) in V/cm.
inline constexpr double kCriticalFieldVPerCm =
    kElectronMassEv / (kHbarCMevFm / (kElectronMassEv * 1e-6) * 1e-13);

}  // namespace ati
