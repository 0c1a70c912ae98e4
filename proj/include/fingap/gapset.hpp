#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "fingap/errors.hpp"

namespace fingap {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Smallest representative of an angle in (-pi, pi].
double wrapAngle(double a);

struct Tolerances {
    double root = 1e-12;
    double quad = 1e-10;
};

// A finite union of l+1 disjoint closed intervals
//   e = [alpha_1,beta_1] u ... u [alpha_{l+1},beta_{l+1}],
// together with R(z) = prod (z-alpha_j)(z-beta_j) and the branch of sqrt(R)
// fixed by sqrt(R(x)) > 0 for real x > beta_{l+1}.
class GapSet {
  public:
    explicit GapSet(std::vector<double> endpoints);
    static GapSet fromBands(const std::vector<std::pair<double, double>>& bands);

    int ell() const { return ell_; }
    int numBands() const { return ell_ + 1; }
    const std::vector<double>& endpoints() const { return pts_; }

    // 1-based band/gap indexing, matching alpha_j < beta_j.
    double alpha(int j) const { return pts_[2 * (j - 1)]; }
    double beta(int j) const { return pts_[2 * (j - 1) + 1]; }
    double gapLo(int j) const { return beta(j); }       // gap j = (beta_j, alpha_{j+1})
    double gapHi(int j) const { return alpha(j + 1); }
    double gapMid(int j) const { return 0.5 * (gapLo(j) + gapHi(j)); }
    double hullLo() const { return pts_.front(); }
    double hullHi() const { return pts_.back(); }

    cplx R(cplx z) const;
    double R(double x) const;

    // Physical branch of sqrt(R): analytic off e, positive on (beta_{l+1},inf).
    cplx sqrtR(cplx z) const;
    // Sign of sqrt(R) on the real axis in gap j (and on (-inf,alpha_1) for j=0).
    double gapSign(int j) const;
    // Boundary value sqrt(R)(x+i0) for x inside band j; purely imaginary.
    cplx sqrtRUpper(double x) const;

    // Coefficients d_0=1,d_1,... of sqrt(R) = z^{l+1} (1 + d_1/z + d_2/z^2 + ...).
    std::vector<double> sqrtSeriesAtInfinity(int nterms) const;

    bool contains(double x) const;            // x in e (closed)
    bool strictlyInside(double x) const;      // x in interior of some band
    int bandOf(double x) const;               // 1-based; 0 if not in e
    int gapOf(double x) const;                // 1-based; 0 if not in an open gap
    double distToSet(double x) const;         // dist(x, e)

  private:
    std::vector<double> pts_;
    int ell_;
};

}  // namespace fingap
