#pragma once

#include <vector>

#include "fingap/gapset.hpp"

namespace fingap {

struct PotentialData {
    std::vector<double> craigZeros;        // x_j in gap j, j=1..l
    double capacity = 0.0;                 // ca(e)
    std::vector<double> harmonicMeasures;  // rho_e(e_j), j=1..l+1
    std::vector<double> bandCumulative;    // rho_e([alpha_1,beta_j]), j=1..l
};

struct GreenValue {
    double G = 0.0;                  // real Green's function, >= 0
    cplx gComplex;                   // analytic completion along the reported path
    std::vector<cplx> pathWaypoints; // integration path from beta_{l+1}
};

// Gap zeros x_j of the closed form of the Borel transform of the equilibrium
// measure: in each gap, int prod_k(t-x_k)/sqrt|R(t)| dt = 0.
std::vector<double> solveCraigZeros(const GapSet& set, const Tolerances& tol = {});

class Potential;

// Incrementally extended complex Green transform: keeps a point x and the
// value g(x) accumulated along the actual path walked, so the branch of the
// multivalued g is fixed by the path itself.  Used to invert exp(-g(x))
// against Blaschke data with continuous branch tracking.
class GreenWalker {
  public:
    GreenWalker(const Potential& pot, cplx x0, cplx g0, double tol);

    cplx x() const { return x_; }
    cplx g() const { return g_; }

    // extend g along the straight segment to xNext
    void stepTo(cplx xNext);
    // Newton solve g(x) = target, stepping at most a fraction of the distance
    // to the spectrum at a time
    void solveFor(cplx target, double tol);

  private:
    const Potential* pot_;
    cplx x_;
    cplx g_;
    double tol_;
};

// Potential-theoretic data attached to one finite gap set.  All evaluators are
// const and shareable across threads.
class Potential {
  public:
    explicit Potential(GapSet set, Tolerances tol = {});

    const GapSet& set() const { return set_; }
    const std::vector<double>& craigZeros() const { return craig_; }

    // Borel transform of the equilibrium measure, M(z) = -prod(z-x_j)/sqrt(R(z)),
    // on the physical sheet.
    cplx Me(cplx z) const;
    cplx MePrime(cplx z) const;
    // distance from a complex point to the union of bands
    double distToSpectrum(cplx z) const;

    double equilibriumDensity(double x) const;
    std::vector<double> harmonicMeasures() const { return harm_; }
    std::vector<double> bandCumulative() const;
    double capacity() const { return std::exp(logCap_); }
    double logCapacity() const { return logCap_; }

    GreenValue greenFunction(cplx z) const;
    double green(cplx z) const { return greenFunction(z).G; }
    // g(x+i0) for real x (band values are purely imaginary).
    cplx gUpper(double x) const;
    // Real Green's function restricted to gap j (0 for the two unbounded rays).
    double greenInGap(int j, double x) const;
    // tabulated Hermite interpolant of the same, for hot paths
    double greenInGapFast(int j, double x) const;

    // N(x) = rho_e(e \cap [x, +inf)) for x in a band; fast local form.
    double cumulativeFromRight(double x) const;
    double inverseCumulative(double u) const;  // N^{-1}: [0,1] -> bands
    struct BandPoint {
        double x;
        int band;
        double distLo;  // x - alpha_band, cancellation-free
        double distHi;  // beta_band - x
    };
    BandPoint inverseCumulativeDetailed(double u) const;

    PotentialData data() const;

  private:
    double partialBandMeasure(int j, double phiHi) const;  // int_0^phi of band-j density in cos-angle
    double bandAngleOf(double x, int j) const;

    GapSet set_;
    Tolerances tol_;
    std::vector<double> craig_;
    std::vector<double> harm_;
    std::vector<double> cumFromRight_;  // N at band left edges alpha_j, j=1..l+1
    double logCap_ = 0.0;
    // per-gap table of G and dG/dphi on a uniform grid in the cosine angle
    struct GapGreenTable {
        std::vector<double> G, dG;
    };
    std::vector<GapGreenTable> gapTables_;
};

}  // namespace fingap
