#pragma once

#include <functional>
#include <vector>

#include "fingap/gapset.hpp"

namespace fingap {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1].
// Computed by Newton iteration and cached per n.
const std::pair<std::vector<double>, std::vector<double>>& gaussLegendre(int n);

// Adaptive Gauss-Legendre on [a,b]; compares 16- vs 32-point panels and
// bisects until the panel error estimate is below tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int maxDepth = 32);

cplx integrateC(const std::function<cplx(double)>& f, double a, double b,
                double tol, int maxDepth = 32);

// Integrates F(t)/sqrt((t-a)(b-t)) over (a,b) for smooth F via t = m + h*cos(phi).
double integrateChebWeighted(const std::function<double(double)>& F, double a,
                             double b, double tol);

// Integrates F(t)/sqrt(|t-c|) over [a,b] where c is the left endpoint a
// (singularAtLeft) or b, and F is smooth at c.  The weight is cancelled
// analytically by the substitution t = c +- s^2, so F is never evaluated
// against an underflowed |t-c|.
double integrateSqrtEndpoint(const std::function<double(double)>& F, double a,
                             double b, bool singularAtLeft, double tol);

}  // namespace fingap
