#include "fingap/green.hpp"

#include <cmath>

#include "fingap/herglotz.hpp"

namespace fingap {

OffSpectrumPoint makeOffSpectrumPoint(const CoveringMap& map, double x) {
    if (map.set().contains(x))
        throw OutOfDomain("makeOffSpectrumPoint: x lies in the spectrum");
    OffSpectrumPoint p;
    p.x = x;
    p.z = map.invertX(cplx(x, 0.0));
    return p;
}

GreenEvaluator::GreenEvaluator(const CoveringMap& map, const DirichletData& y)
    : map_(&map), seq_(map, y) {}

cplx GreenEvaluator::uPlus(int n, const OffSpectrumPoint& p) const {
    return seq_.u(n, p.z);
}

cplx GreenEvaluator::uMinus(int n, const OffSpectrumPoint& p) const {
    cplx zOut = 1.0 / std::conj(p.z);
    cplx val = std::conj(seq_.u(n, zOut));
    // u(n, zOut) already carries B(zOut)^n = conj(B(z))^{-n}; conjugation
    // turns it into B(z)^{-n} as required.
    return val;
}

cplx GreenEvaluator::wronskian(const OffSpectrumPoint& p) const {
    double a0 = seq_.a(0);
    cplx w = a0 * (uPlus(1, p) * uMinus(0, p) - uMinus(1, p) * uPlus(0, p));
    if (std::abs(w) < 1e-13)
        throw WronskianVanishes("wronskian: energy too close to a band edge");
    return w;
}

cplx GreenEvaluator::wholeLine(const OffSpectrumPoint& p, int n, int m) const {
    if (n > m) std::swap(n, m);
    // (J - x)^{-1} entries are u_n^- u_m^+ / Wr; report the (x - J)^{-1} sign
    return -uMinus(n, p) * uPlus(m, p) / wronskian(p);
}

cplx GreenEvaluator::halfLine(const OffSpectrumPoint& p, int n, int m) const {
    if (n < 1 || m < 1) throw InvalidInput("halfLine: indices start at 1");
    cplx wr = wronskian(p);
    auto tilde = [&](int i, int j) {
        if (i > j) std::swap(i, j);
        return uMinus(i, p) * uPlus(j, p) / wr;
    };
    cplx t00 = tilde(0, 0);
    if (std::abs(t00) < 1e-12)
        throw ResonanceAtReference("halfLine: vanishing whole-line diagonal at 0");
    return tilde(n, m) - tilde(0, n) * tilde(0, m) / t00;
}

bool detectResonance(const CoveringMap& map, const DirichletData& y, double edge,
                     double tol) {
    const GapSet& e = map.set();
    bool isEdge = false;
    for (double p : e.endpoints())
        if (p == edge) isEdge = true;
    if (!isEdge) throw InvalidInput("detectResonance: x0 is not a band edge");
    // representative preimage of the edge, pulled slightly inside: the Jost
    // function of a resonant point vanishes there like the offset itself
    cplx z;
    if (edge == e.hullHi()) {
        z = cplx(1.0, 0.0);
    } else if (edge == e.hullLo()) {
        z = cplx(-1.0, 0.0);
    } else {
        int gap = 0;
        for (int j = 1; j <= e.ell(); ++j)
            if (edge == e.gapLo(j) || edge == e.gapHi(j)) gap = j;
        z = map.gapToCirclePoint(gap, edge, +1);
    }
    z *= (1.0 - 1e-6);
    JostFunction u(map, y);
    return std::abs(u.eval(z)) < tol * 1e3;
}

bool detectResonanceByFit(const GapSet& set, const DirichletData& y, double edge) {
    auto rep = HerglotzRep::build(set, y);
    // approach from the off-spectrum side
    double dir;
    if (edge <= set.hullLo()) {
        dir = -1.0;
    } else if (edge >= set.hullHi()) {
        dir = +1.0;
    } else {
        dir = (set.gapOf(edge + 1e-9) != 0) ? +1.0 : -1.0;
    }
    double t1 = 1e-4, t2 = 1e-6;
    double m1 = std::abs(rep.eval(cplx(edge + dir * t1, 0.0)));
    double m2 = std::abs(rep.eval(cplx(edge + dir * t2, 0.0)));
    // resonant m blows up like t^{-1/2}: slope of log|m| vs log t near -1/2
    double slope = std::log(m2 / m1) / std::log(t2 / t1);
    return slope < -0.25;
}

}  // namespace fingap
