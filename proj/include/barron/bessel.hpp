#pragma once

#include <span>
#include <string>
#include <vector>

namespace barron {

/// Bessel potential of order alpha + d on R^d: the function whose Fourier
/// transform is (1 + 4 pi^2 |xi|^2)^{-(alpha+d)/2}. It is radial, lies in
/// B^s exactly for s < alpha, and is Hoelder of order alpha at the origin.
struct BesselTarget {
  double alpha = 1.0;  // in (0, 1]
  int d = 1;
  int tail_panels = 60;  // half-period panels before series acceleration
};

enum class BarronWeight { full, seminorm };

/// Gamma((alpha+1)/2) / (2^d pi^{(d+1)/2} Gamma((alpha+d)/2)).
double radial_prefactor(const BesselTarget& t);

/// f at |x| = rho.
double eval_radial(const BesselTarget& t, double rho);

/// Closed form for alpha = 1: 2^{-d} pi^{(1-d)/2} Gamma((d+1)/2)^{-1} e^{-rho}.
double eval_radial_alpha1(int d, double rho);

/// Least-squares slope of ln(f(0) - f(rho)) against ln rho.
double holder_exponent(const BesselTarget& t, std::span<const double> radii);

/// Integral of w(xi) (1 + 4 pi^2 |xi|^2)^{-(alpha+d)/2} over |xi|_2 <= cutoff,
/// with w = (1 + |xi|_1)^s (full) or |xi|_1^s (seminorm). d <= 3.
double barron_integral(const BesselTarget& t, double s, double cutoff,
                       BarronWeight weight = BarronWeight::full);

/// Cutoff-growth verdict for the Barron integral. Increments between
/// successive cutoff decades are compared; they must shrink geometrically
/// (decay exponent above `min_decay` per decade) for a convergent verdict.
struct BarronDiagnostic {
  std::vector<double> cutoffs;
  std::vector<double> values;
  std::vector<double> ratios;  // increment ratios Delta_{k+1} / Delta_k
  double decay = 0.0;          // -log10 of the last ratio
  bool convergent = false;
  double extrapolated = 0.0;   // geometric-tail estimate (meaningful if convergent)
  std::string verdict() const { return convergent ? "convergent" : "divergent"; }
};

BarronDiagnostic barron_diagnostic(const BesselTarget& t, double s,
                                   BarronWeight weight = BarronWeight::full,
                                   double min_decay = 0.02);

/// Extrapolated Barron norm; throws DivergentNorm when the diagnostic fails.
double bessel_barron_norm(const BesselTarget& t, double s, BarronWeight weight);

}  // namespace barron
