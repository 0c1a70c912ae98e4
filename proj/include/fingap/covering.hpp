#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "fingap/blaschke.hpp"
#include "fingap/fuchsian.hpp"
#include "fingap/herglotz.hpp"
#include "fingap/potential.hpp"

namespace fingap {

struct CalibrationOptions {
    int maxWordLen = 16;          // enumeration depth cap
    std::size_t elementCap = 1000000;
    double tol = 1e-11;           // Newton tolerance on the calibration residuals
    int maxEll = 2;               // calibration supported up to this gap count
    Tolerances numTol;
};

// Numerical uniformization of C u {inf} minus a finite gap set: calibrated
// orthocircles, the deck group, and evaluators for the covering map x, its
// two-sheet extension and its inverse.  x is realized by inverting the
// complex Green transform: exp(-g(x)) = B(z).
class CoveringMap {
  public:
    static CoveringMap calibrate(const GapSet& set, CalibrationOptions opt = {});

    const GapSet& set() const { return set_; }
    const Potential& potential() const { return *pot_; }
    const FuchsianGroup& group() const { return grp_; }
    const GroupEnumeration& enumeration() const { return en_; }
    // shallower enumeration with orbit-defect tail ~1e-9, for inner loops
    const GroupEnumeration& fastEnumeration() const { return enFast_; }
    int ell() const { return set_.ell(); }
    bool trivial() const { return trivial_; }
    double xInfinity() const { return xInfinity_; }

    // Blaschke product B(z) = B(z,0) over the calibrated group.
    cplx B(cplx z) const;
    cplx BLogDeriv(cplx z) const;
    Character characterOfB() const { return c0_; }

    cplx evalX(cplx z) const;
    // same map evaluated over the truncated enumeration (errors ~1e-8)
    cplx evalXFast(cplx z) const;
    std::pair<cplx, int> evalXSharp(cplx z) const;  // sheet +1 / -1 / 0 on the cut
    cplx invertX(cplx x) const;                     // representative in F
    double xOnBoundary(double theta) const;

    // e^{-g(x)} with the canonical path branch; the value solved against B.
    cplx Phi(cplx x) const;

    // Torus chart: the complete orthocircle of gap j is a genuine circle; a
    // point is parametrized by its angle about the circle center.
    cplx circlePoint(int j, double psi) const;
    double circleAngle(int j, cplx zeta) const;
    // gap point (position, sheet) -> point on the complete circle
    cplx gapToCirclePoint(int j, double pos, int sheet) const;
    // inverse of the above; zeta must lie on circle j
    std::pair<double, int> circlePointToGap(int j, cplx zeta) const;

    // zeta_j: the boundary corner of circle j with x = beta_j.
    cplx zetaRef(int j) const { return charts_[j - 1].zetaBeta; }
    // far reference point of Eq.-style maximal modulus on the complete circle
    cplx zetaFar(int j) const { return charts_[j - 1].zetaFar; }
    DirichletData farDirichlet() const;  // the reference w-vector

    // Quadrature nodes on the upper fundamental arcs, graded into the corner
    // singularities, with x-values and the summed Poisson weight
    // K0 = sum_gamma |gamma'(e^{i theta})|.  Boundary integrals of
    // Gamma-invariant data fold onto these arcs.
    struct SzegoNode {
        double theta;
        double weight;
        double x;
        double K0;
        int band = 0;
        double distLo = 0.0;  // x - alpha_band, kept cancellation-free
        double distHi = 0.0;  // beta_band - x
    };
    const std::vector<SzegoNode>& szegoNodes() const { return snodes_; }

    // sum over the group of [(g w + z)/(g w - z) + (conj(g w)+z)/(conj(g w)-z)]
    // |g'(w)| at w = e^{i theta}; the folded Herglotz kernel of both half arcs.
    cplx foldedHerglotzKernel(double theta, cplx z) const;

    // integral of f(x(e^{i theta})) d theta / 2 pi over the whole circle
    double pushforwardIntegral(const std::function<double(double)>& f) const;

    // diagnostic: worst per-piece phase anchoring mismatch found while
    // building the boundary tables
    double boundaryPhaseResidual() const { return phaseResid_; }

  private:
    CoveringMap() = default;
    void buildCharts();
    void buildBoundaryTables();
    void buildSzegoNodes();
    double xOnFundamentalArc(double theta) const;
    cplx evalXInFundamental(cplx z, const GroupEnumeration& en) const;

    GapSet set_{std::vector<double>{-2.0, 2.0}};
    std::shared_ptr<const Potential> pot_;
    FuchsianGroup grp_;
    GroupEnumeration en_;
    GroupEnumeration enFast_;
    Character c0_;
    Tolerances tol_;
    bool trivial_ = true;
    double xInfinity_ = 1.0;
    double phaseResid_ = 0.0;

    struct GapChart {
        Orthocircle circle;
        cplx zetaBeta;       // corner with x = beta_j
        cplx zetaAlpha;      // corner with x = alpha_{j+1}
        cplx zetaFar;        // max-modulus point of the complete circle
        double farPos = 0;   // its x position (sheet -)
        double psiBeta = 0, psiAlpha = 0, psiNear = 0, psiCrit = 0;
        double gMax = 0;     // G at the Craig zero of the gap
    };
    std::vector<GapChart> charts_;

    struct BoundaryPiece {
        double thLo, thHi;   // fundamental arc piece in [0, pi]
        int band;            // band index its x-values live in
        double uLo;          // anchored continuous arg B at thLo
        std::vector<double> th, u;
    };
    std::vector<BoundaryPiece> pieces_;
    std::vector<SzegoNode> snodes_;
};

}  // namespace fingap
