#pragma once

#include "ati/constants.hpp"

namespace ati::units {

inline double ev_to_internal(double ev) { return ev / kElectronMassEv; }
inline double internal_to_ev(double e) { return e * kElectronMassEv; }

// xi = (F / E_crit) / omega
inline double field_to_xi(double v_per_cm, double omega) { return v_per_cm / kCriticalFieldVPerCm / omega; }
inline double xi_to_field(double xi, double omega) { return xi * omega * kCriticalFieldVPerCm; }

}  // namespace ati::units
