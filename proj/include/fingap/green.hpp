#pragma once

#include "fingap/jost.hpp"

namespace fingap {

// A real energy off the spectrum together with its representative preimage on
// the gap circles or the real diameter, where |B(z)| = e^{-G(x)} < 1.
struct OffSpectrumPoint {
    double x = 0.0;
    cplx z;
};

OffSpectrumPoint makeOffSpectrumPoint(const CoveringMap& map, double x);

// Green evaluator bound to one torus point: caches the Jost solution data for
// the decaying solutions in both directions.
class GreenEvaluator {
  public:
    GreenEvaluator(const CoveringMap& map, const DirichletData& y);

    // u_n^+ and u_n^- at an off-spectrum energy
    cplx uPlus(int n, const OffSpectrumPoint& p) const;
    cplx uMinus(int n, const OffSpectrumPoint& p) const;
    // n-independent Wronskian of the pair
    cplx wronskian(const OffSpectrumPoint& p) const;

    // <delta_n, (x - Jfull)^{-1} delta_m> for the two-sided matrix
    cplx wholeLine(const OffSpectrumPoint& p, int n, int m) const;
    // <delta_n, (Jhalf - x)^{-1} delta_m>, n,m >= 1; the (1,1) entry is the
    // m-function
    cplx halfLine(const OffSpectrumPoint& p, int n, int m) const;

    const JostSolutionSeq& solutions() const { return seq_; }

  private:
    const CoveringMap* map_;
    JostSolutionSeq seq_;
};

// true iff the band edge is a resonance: the Jost function vanishes there
bool detectResonance(const CoveringMap& map, const DirichletData& y, double edge,
                     double tol = 1e-6);
// independent classifier from the blow-up rate of the m-function at the edge
bool detectResonanceByFit(const GapSet& set, const DirichletData& y, double edge);

}  // namespace fingap
