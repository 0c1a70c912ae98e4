#pragma once

#include <vector>

#include "fingap/gapset.hpp"

namespace fingap {

// One Dirichlet datum: a position in the closed gap and a sheet sign.
// The sheet is meaningless (canonicalized to +1) when the position sits at a
// gap endpoint.
struct DirichletEntry {
    double pos = 0.0;
    int sheet = +1;
};
using DirichletData = std::vector<DirichletEntry>;

struct JacobiCoeffs {
    std::vector<double> a;
    std::vector<double> b;
    int offset = 1;  // a[i], b[i] carry index n = offset + i
    double aAt(int n) const { return a.at(static_cast<std::size_t>(n - offset)); }
    double bAt(int n) const { return b.at(static_cast<std::size_t>(n - offset)); }
};

struct StripResult;

// Minimal Herglotz function m = (p + sqrt(R))/a on the two-sheeted surface over
// C u {inf} cut along e, normalized by m(z) = -1/z + O(z^-2) at infinity on the
// physical sheet.  Poles are the Dirichlet points plus infinity on the second
// sheet.
class HerglotzRep {
  public:
    static HerglotzRep build(const GapSet& set, const DirichletData& y);

    const GapSet& set() const { return set_; }
    const DirichletData& dirichlet() const { return y_; }
    const std::vector<double>& pCoeffs() const { return p_; }
    const std::vector<double>& aCoeffs() const { return a_; }
    double leadingA() const { return c_; }

    cplx eval(cplx z, int sheet = +1) const;
    double evalP(double x) const;
    double evalA(double x) const;

    // Spectral data: a.c. weight on band interiors and the gap point masses.
    double weight(double x) const;
    std::vector<std::pair<double, double>> pointMasses() const;

    StripResult strip() const;

  private:
    GapSet set_{std::vector<double>{0.0, 1.0}};
    DirichletData y_;
    std::vector<double> p_;  // ascending, degree l+1
    std::vector<double> a_;  // ascending, degree l
    double c_ = 0.0;         // leading coefficient of a
    double n1_ = 0.0, n2_ = 0.0;  // expansion of (p+sqrt R)/kappa at infinity
};

struct StripResult {
    double a1 = 0.0;
    double b1 = 0.0;
    DirichletData next;
};

struct SpectralMeasure {
    HerglotzRep rep;
    std::vector<std::pair<double, double>> masses;
    double weight(double x) const { return rep.weight(x); }
};

SpectralMeasure spectralMeasure(const HerglotzRep& rep);

// n-th Jacobi coefficients (a_n, b_n), n = 1..N, of the matrix attached to y.
JacobiCoeffs orbitJacobi(const GapSet& set, const DirichletData& y, int N);

// Inverse-stripping extension: (a_n, b_n) for n = 0, -1, ..., -K+1, found by
// Newton inversion of the stripping map on the torus.
JacobiCoeffs extendLeft(const GapSet& set, const DirichletData& y, int K);

// One inverse-stripping step.
DirichletData unstrip(const GapSet& set, const DirichletData& y);

// Angle chart on the torus: gap j traversed as pos = mid + halfwidth*cos(psi)
// with sheet +1 for psi in (0,pi) and -1 for psi in (-pi,0).
DirichletEntry gapPointFromAngle(const GapSet& set, int j, double psi);
double angleFromGapPoint(const GapSet& set, int j, const DirichletEntry& e);

// Continued-fraction evaluation of the m-function of explicit coefficients;
// used as an independent oracle and for reconstruction checks.
cplx continuedFractionM(const JacobiCoeffs& coeffs, cplx z, int depth);

}  // namespace fingap
