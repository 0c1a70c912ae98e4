#pragma once

#include <map>
#include <memory>
#include <vector>

#include "fingap/covering.hpp"
#include "fingap/theta.hpp"

namespace fingap {

// The base torus point: all Dirichlet positions at the lower gap edges.
DirichletData basePoint(const GapSet& set);

// Jost quotient of two torus measures: the Blaschke factors of their gap
// masses times the outer function of the boundary log-weight ratio, computed
// on the folded fundamental-arc nodes of the covering map.
class JostRatio {
  public:
    JostRatio(const CoveringMap& map, const DirichletData& y,
              const DirichletData& yRef);

    cplx eval(cplx z) const;
    double atZero() const;

  private:
    const CoveringMap* map_;
    std::vector<cplx> xiNum_, xiDen_;  // in-disk zeros of each side
    std::vector<double> h_;            // log weight ratio at the szego nodes
    double atZero_ = 1.0;
};

// Raw Jost function: reference measure at the base point.
class RawJost {
  public:
    RawJost(const CoveringMap& map, const DirichletData& y);
    cplx eval(cplx z) const { return ratio_.eval(z); }
    cplx operator()(cplx z) const { return ratio_.eval(z); }
    double phi() const { return ratio_.atZero(); }

  private:
    JostRatio ratio_;
};

double jostPhi(const CoveringMap& map, const DirichletData& y);

// Jost function with the far reference point, in the theta-product form
// u(z) = phi(y)/phi(w) * prod Theta(z;y_j)/Theta(z;w_j).
class JostFunction {
  public:
    JostFunction(const CoveringMap& map, const DirichletData& y);
    cplx eval(cplx z) const;
    double phiY() const { return phiY_; }

  private:
    const CoveringMap* map_;
    double phiY_, phiW_;
    std::vector<ThetaRatio> ratios_;
};

// Jost solutions u_n(z;y) = a_n^{-1} B(z)^n u(z; U^n y) for n in Z, with the
// orbit data generated by stripping (and its Newton inverse for n < 0).
class JostSolutionSeq {
  public:
    JostSolutionSeq(const CoveringMap& map, const DirichletData& y);

    cplx u(int n, cplx z) const;
    double a(int n) const;  // Jacobi coefficient a_n, n in Z
    double b(int n) const;
    const DirichletData& yAt(int n) const;  // U^n(y)
    const CoveringMap& map() const { return *map_; }

    // coefficients a_n, b_n for n in [nLo, nHi]
    JacobiCoeffs window(int nLo, int nHi) const;

  private:
    void ensure(int n) const;
    const CoveringMap* map_;
    mutable std::vector<DirichletData> fwd_;   // U^n y, n >= 0
    mutable std::vector<DirichletData> bwd_;   // U^{-k} y, k >= 1
    mutable std::vector<double> aFwd_, bFwd_;  // a_{n+1}(y), b_{n+1}
    mutable std::vector<double> aBwd_, bBwd_;  // a_{1-k}, b_{1-k}
    mutable std::map<int, std::shared_ptr<JostFunction>> uCache_;
};

struct Mat2 {
    cplx a, b, c, d;
    Mat2 mul(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
                c * o.b + d * o.d};
    }
    cplx det() const { return a * d - b * c; }
    double norm() const {
        return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
    }
};

// First and second kind polynomials p_0..p_n, q_0..q_n at x.
void orthogonalPolys(const JacobiCoeffs& c, cplx x, int n, std::vector<cplx>& p,
                     std::vector<cplx>& q);

// Transfer matrix built from them; det == 1 and it updates (u_{n+1}, a_n u_n).
Mat2 transferMatrix(const JacobiCoeffs& c, cplx x, int n);

}  // namespace fingap
