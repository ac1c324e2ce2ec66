#pragma once

#include <complex>
#include <vector>

#include "ati/kinematics.hpp"
#include "ati/specfun.hpp"

namespace ati {

enum class Rescattering { on, off };
enum class Polarization { circular, linear };

// Numeric value is written to the formula_tag output column.
enum class FormulaTag { general = 42, circular = 44, linear = 55, nonrel_circular = 56, nonrel_linear = 59 };

struct SpectrumPoint {
    long long n = 0;
    double theta = 0.0;
    double phi = 0.0;
    double dwdo = 0.0;
    double kfr_only_dwdo = 0.0;
    double prefactor = 0.0;
    std::complex<double> kfr_amplitude{};
    std::complex<double> rescatter_amplitude{};
    // Real weight multiplying the rescattering term.
    double rescatter_factor = 0.0;
    FormulaTag formula_tag = FormulaTag::general;
    bool below_threshold = false;
};

// dwdo recomputed from the stored amplitudes.
double combine(const SpectrumPoint& p);

SpectrumPoint dwdo_general(const LaserField& field, const Atom& atom, long long n, double theta,
                           double phi, Rescattering mode = Rescattering::on,
                           const specfun::SeriesControl& ctrl = {});
SpectrumPoint dwdo_circular(const LaserField& field, const Atom& atom, long long n, double theta,
                            Rescattering mode = Rescattering::on);
SpectrumPoint dwdo_linear(const LaserField& field, const Atom& atom, long long n, double theta,
                          double phi, Rescattering mode = Rescattering::on,
                          const specfun::SeriesControl& ctrl = {});
// Nonrelativistic limits; for linear polarization theta is measured from the
// polarization vector.
SpectrumPoint dwdo_nonrel(const LaserField& field, const Atom& atom, long long n, double theta,
                          Polarization pol, Rescattering mode = Rescattering::on);
long long nonrel_threshold(const LaserField& field, const Atom& atom, Polarization pol);

// Dispatches to the circular, linear or general form by zeta.
SpectrumPoint dwdo(const LaserField& field, const Atom& atom, long long n, double theta,
                   double phi, Rescattering mode = Rescattering::on);

struct SpectrumGrid {
    long long n_lo = 0;
    long long n_hi = 0;
    std::vector<double> thetas;
    std::vector<double> phis;
};

enum class SpectrumFormula { relativistic, nonrelativistic };

// Points ordered by (n, theta, phi), independent of the worker count.
std::vector<SpectrumPoint> spectrum(const LaserField& field, const Atom& atom,
                                    const SpectrumGrid& grid, Rescattering mode,
                                    SpectrumFormula formula = SpectrumFormula::relativistic,
                                    unsigned workers = 1);

}  // namespace ati
