#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fingap/gapset.hpp"

namespace fingap {

// A circle orthogonal to the unit circle, bounding one forbidden disk of the
// fundamental set.  half = +1 for C_j^+ (upper half plane), -1 for C_j^-.
struct Orthocircle {
    cplx center;
    double radius = 0.0;
    int gapIndex = 0;
    int half = +1;

    bool strictContains(cplx z, double margin = 1e-14) const {
        return std::abs(z - center) < radius * (1.0 - margin);
    }
    // Intersections with the unit circle (angles sorted increasingly).
    std::pair<double, double> cornerAngles() const;
};

// Orthocircle through the boundary points e^{i a1}, e^{i a2}.
Orthocircle circleFromCornerAngles(double a1, double a2, int gapIndex, int half = +1);

// Moebius transformation z -> (az+b)/(cz+d) with its reduced word in the
// group generators (letters +j and -j, 1-based).  Entries are kept rescaled to
// unit size; the determinant of the scaled matrix is carried analytically
// through compositions, which keeps derivatives exact for long hyperbolic
// words where a recomputed ad-bc would cancel catastrophically.
class MobiusMap {
  public:
    MobiusMap() : a_(1), b_(0), c_(0), d_(1), det_(1) {}
    MobiusMap(cplx a, cplx b, cplx c, cplx d, std::vector<std::int8_t> word = {});

    cplx operator()(cplx z) const;
    cplx derivative(cplx z) const;
    MobiusMap compose(const MobiusMap& rhs) const;  // this after rhs
    MobiusMap inverse() const;

    const std::vector<std::int8_t>& word() const { return word_; }
    int wordLength() const { return static_cast<int>(word_.size()); }
    cplx a() const { return a_; }
    cplx b() const { return b_; }
    cplx c() const { return c_; }
    cplx d() const { return d_; }
    cplx det() const { return det_; }
    // |trace| of the det-1 normalization
    double traceAbs() const { return std::abs(a_ + d_) / std::sqrt(std::abs(det_)); }

  private:
    MobiusMap(cplx a, cplx b, cplx c, cplx d, cplx det, std::vector<std::int8_t> word);
    void rescale();
    cplx a_, b_, c_, d_, det_;
    std::vector<std::int8_t> word_;
};

struct GroupEnumeration {
    std::vector<MobiusMap> elems;        // identity first, then by (length, lex)
    std::vector<std::size_t> levelStart; // levelStart[k] = first index of length k
    int maxLen = 0;
    std::size_t levelSize(int k) const {
        return (k + 1 < static_cast<int>(levelStart.size()) ? levelStart[k + 1]
                                                            : elems.size()) -
               levelStart[k];
    }
};

// The free Fuchsian group generated by conjugation composed with inversion in
// each C_j^+.
class FuchsianGroup {
  public:
    static FuchsianGroup fromCircles(std::vector<Orthocircle> upperCircles);

    int numGenerators() const { return static_cast<int>(gens_.size()); }
    const std::vector<Orthocircle>& upperCircles() const { return upper_; }
    const std::vector<Orthocircle>& lowerCircles() const { return lower_; }
    const MobiusMap& generator(int j) const { return gens_[j - 1]; }       // 1-based
    const MobiusMap& generatorInv(int j) const { return genInvs_[j - 1]; }

    GroupEnumeration enumerate(int maxLen, std::size_t cap = 1000000) const;

    // Applies generators to move z into the fundamental set; returns the moved
    // point and the group element gamma with gamma(z) = z'.
    std::pair<cplx, MobiusMap> reduceToFundamental(cplx z, int iterCap = 4000) const;
    bool inFundamental(cplx z) const;

  private:
    std::vector<Orthocircle> upper_, lower_;
    std::vector<MobiusMap> gens_, genInvs_;
};

struct PoincareResult {
    double partialSum = 0.0;
    double tailEstimate = 0.0;
    std::vector<double> levelSums;
};

PoincareResult poincareSeries(const GroupEnumeration& en, double s, cplx z);

// Least s in (0,2] at which per-level sums still decay geometrically.
double criticalExponentEstimate(const GroupEnumeration& en, cplx z);

// Total arclength sum_{w(gamma)=k} |gamma(Rtilde)| per level, and the derived
// |dR_k| = 2pi - sum_{w<=k}.
struct ArcDecay {
    std::vector<double> levelArcLength;  // index k
    std::vector<double> boundaryResidual;  // |dR_k|
    double C0 = 0.0, D0 = 0.0;           // fit |dR_k| ~ C0 exp(-D0 k)
};
ArcDecay boundaryArcDecay(const FuchsianGroup& grp, const GroupEnumeration& en);

}  // namespace fingap
