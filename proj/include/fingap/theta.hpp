#pragma once

#include <optional>
#include <vector>

#include "fingap/covering.hpp"

namespace fingap {

// Character automorphic square root of
//   f(z) = [(x(z)-y)/(x(z)-beta_j)] eta(z)/eta(0),
// normalized by Theta(0) = 1, with simple zeros on the orbit of the preimage
// of y and simple poles on the orbit of zeta_j.  Values are produced by
// continuous branch continuation along piecewise linear paths from 0.
class ThetaFn {
  public:
    ThetaFn(const CoveringMap& map, int gap, double pos, int sheet);

    int gap() const { return gap_; }
    double pos() const { return pos_; }
    int sheet() const { return sheet_; }
    cplx zeta() const { return zeta_; }
    bool isOne() const { return trivialOne_; }

    cplx operator()(cplx z) const { return eval(z); }
    cplx eval(cplx z, std::optional<cplx> waypoint = {}) const;
    // the explicit bracket whose square root this function is
    cplx squared(cplx z) const;
    // character on the generators: Theta(gamma_k(0))
    Character character() const;

  private:
    cplx etaVal(cplx z) const;
    friend class ThetaWalk;

    const CoveringMap* map_;
    int gap_;
    double pos_;
    int sheet_;
    cplx zeta_;      // on the complete circle of the gap
    cplx etaSeed_;   // in-disk seed of the eta Blaschke product
    int etaKind_;    // 0: zeta in D, 1: on the boundary, 2: outside
    cplx eta0_;
    bool trivialOne_ = false;
    std::vector<cplx> avoid_;  // orbit points of zeta and zeta_j (both sheets)
};

ThetaFn buildTheta(const CoveringMap& map, int gap, const DirichletEntry& y);

// Quotient Theta(z;yNum)/Theta(z;yDen) of two theta functions of the same
// gap, continued jointly so the common base-point poles cancel before any
// square root is taken.  Analytic wherever the numerator's zero orbit and the
// denominator's pole orbit are avoided; in particular finite at the corners.
class ThetaRatio {
  public:
    ThetaRatio(const CoveringMap& map, int gap, const DirichletEntry& num,
               const DirichletEntry& den);
    cplx eval(cplx z) const;
    cplx squared(cplx z) const;

  private:
    cplx etaPart(cplx z) const;
    const CoveringMap* map_;
    int gap_;
    double posN_, posD_;
    cplx zetaN_, zetaD_;
    int kindN_ = 1, kindD_ = 1;  // 0: seed in D, 1: none, 2: reflected seed
    cplx seedN_, seedD_;
    cplx norm_ = 1.0;
    bool trivial_ = false;
    std::vector<cplx> avoid_;
};

// Abel map of a single gap point, of a torus point, and of infinity.
Character abelMap(const CoveringMap& map, int gap, const DirichletEntry& y);
Character abelMapTorus(const CoveringMap& map, const DirichletData& y);
inline Character abelInfinity(const CoveringMap& map) { return map.characterOfB(); }

// Inverse of the torus Abel map by Newton in the circle-angle chart.
DirichletData abelInverse(const CoveringMap& map, const Character& target);

// base-point mover Psi_j = sqrt((x - beta_j)/(x - beta_1))
class PsiFn {
  public:
    PsiFn(const CoveringMap& map, int gap);
    cplx eval(cplx z) const;
    Character character() const;

  private:
    const CoveringMap* map_;
    int gap_;
    std::vector<cplx> avoid_;
};

struct Divisor {
    struct Pt {
        int gap = 0;
        double pos = 0.0;
        int sheet = +1;
        int order = 0;  // n_x
    };
    std::vector<Pt> points;
    int nPlus = 0;  // order at infinity on the physical sheet; n_minus = -nPlus
};

// Realizes the special meromorphic function with the given divisor as an
// evaluator in z; throws AbelConditionViolated when the divisor is not
// realizable.
class SpecialFn {
  public:
    SpecialFn(const CoveringMap& map, const Divisor& d, double charTol = 1e-6);
    cplx eval(cplx z) const;
    const Character& character() const { return chr_; }

  private:
    const CoveringMap* map_;
    Divisor div_;
    std::vector<ThetaFn> thetas_;
    std::vector<PsiFn> psis_;
    std::vector<int> orders_;
    Character chr_;
};

}  // namespace fingap
