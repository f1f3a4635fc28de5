#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace lpptw {

// Integration controls for the Painleve II solve.
struct StepControl {
  double step = 0.005;      // table spacing; also the outer integration step
  int substeps = 1;         // Taylor steps per table cell
  int max_order = 60;       // Taylor order cap
  double tolerance = 1e-21; // relative truncation tolerance per step
  double blowup = 1e6;      // |q| beyond this means the solve left the
                            // Hastings-McLeod separatrix
  double s_max = 8.0;       // right end of the emitted table
};

/// Tabulated Hastings-McLeod solution and F_GUE on a uniform grid.
///
/// Columns: q and q' of the Painleve II solution, the tail mass
/// J(s) = int_s^inf q^2, the exponent I(s) = int_s^inf (x - s) q(x)^2 dx and
/// F(s) = exp(-I(s)). The density is F(s) J(s).
class TwTable {
 public:
  double s_min = 0.0;
  double s_max = 0.0;
  double step = 0.0;
  double x_start = 0.0;     // Painleve seeding point
  double seed_scale = 1.0;  // q = seed_scale * Ai at and beyond x_start
  std::vector<double> s;
  std::vector<double> q;
  std::vector<double> q_prime;
  std::vector<double> tail_mass;  // J
  std::vector<double> exponent;   // I
  std::vector<double> cdf;        // F

  std::size_t size() const { return s.size(); }
  bool has_cdf() const { return cdf.size() == s.size() && !s.empty(); }

  // Cubic Hermite interpolation of F on [s_min, s_max]; DomainError outside.
  double f_gue(double x) const;
  // As f_gue, but 0 below s_min and 1 above s_max (for KS tests).
  double f_gue_clamped(double x) const;
  double density(double x) const;
  // Monotone bisection on the interpolant to 1e-12; p must lie in (0,1) and
  // within [F(s_min), F(s_max)].
  double quantile(double p) const;

  // Moments and total mass of the tabulated density (Simpson's rule).
  double mean() const;
  double variance() const;
  double total_mass() const;

 private:
  std::size_t cell_of(double x) const;
};

/// Solves q'' = 2 q^3 + x q leftward from x_start, seeded with a multiple of
/// (Ai, Ai'), down to x_end, by a Taylor-series method in extended precision
/// (order chosen per step against control.tolerance). The multiple is refined
/// by shooting and differs from 1 by roughly Ai(x_start)^2. The emitted grid
/// runs from x_end to control.s_max.
/// Requires x_start >= 6 and x_end <= -10; x_start must be a grid node.
TwTable hastings_mcleod(double x_start = 6.0, double x_end = -10.0,
                        const StepControl& control = {});

/// Fills J, I and F from the q columns. Quadrature is exact for a quintic
/// Hermite interpolant of q (built from q, q' and q'' = 2q^3 + xq); beyond
/// x_start the Airy closed forms
///   int_s^inf Ai^2 = Ai'^2 - s Ai^2,
///   int_s^inf (x - s) Ai^2 = (2 s^2 Ai^2 - 2 s Ai'^2 - Ai Ai') / 3
/// supply the tail. Throws NumericalError if F is not monotone.
void f_gue_from_q(TwTable& table);

// Default table (-10..8, step 0.005), built once on first use.
const TwTable& default_tw_table();

double f_gue(double s);
double f_gue_quantile(double p);

// CSV "s,q,F" with fixed formatting; the golden fixture is produced by this.
void write_csv(std::ostream& out, const TwTable& table);

}  // namespace lpptw
