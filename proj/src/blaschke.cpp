#include "fingap/blaschke.hpp"

#include <algorithm>
#include <cmath>

namespace fingap {

Character Character::mul(const Character& o) const {
    Character r = *this;
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] *= o.values[i];
    return r;
}

Character Character::inv() const {
    Character r = *this;
    for (auto& v : r.values) v = std::conj(v);
    return r;
}

Character Character::pow(int n) const {
    Character r = Character::identity(static_cast<int>(values.size()));
    Character base = (n >= 0) ? *this : inv();
    int k = std::abs(n);
    for (int i = 0; i < k; ++i) r = r.mul(base);
    return r;
}

double Character::dist(const Character& o) const {
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        d = std::max(d, std::fabs(wrapAngle(std::arg(values[i]) - std::arg(o.values[i]))));
    return d;
}

cplx elementaryB(cplx z, cplx w) {
    if (std::abs(w) == 0.0) return z;
    cplx den = 1.0 - std::conj(w) * z;
    if (std::abs(den) < 1e-14)
        throw PoleHit("elementaryB: z at the reflected pole 1/conj(w)");
    return (std::abs(w) / w) * (w - z) / den;
}

cplx elementaryBLogDeriv(cplx z, cplx w) {
    if (std::abs(w) == 0.0) return 1.0 / z;
    return -1.0 / (w - z) + std::conj(w) / (1.0 - std::conj(w) * z);
}

GroupBlaschkeValue groupB(const GroupEnumeration& en, cplx z, cplx w,
                          double failAbove) {
    GroupBlaschkeValue out;
    cplx prod = 1.0;
    int K = en.maxLen;
    std::vector<double> levelDef(K + 1, 0.0);  // sum of (1 - |gamma(w)|) per level
    double worstFactor = 1.0;
    for (int k = 0; k <= K; ++k) {
        for (std::size_t i = en.levelStart[k]; i < en.levelStart[k + 1]; ++i) {
            cplx gw = en.elems[i](w);
            prod *= elementaryB(z, gw);
            double def = 1.0 - std::abs(gw);
            levelDef[k] += def;
            if (k == K && def > 0) {
                double fac = std::abs(1.0 - elementaryB(z, gw)) / def;
                worstFactor = std::max(worstFactor, fac);
            }
        }
    }
    out.value = prod;
    // |1-b(z,gamma w)| <= C(z) (1-|gamma w|); extrapolate the level sums
    if (K >= 2 && levelDef[K - 1] > 0.0) {
        double q = levelDef[K] / levelDef[K - 1];
        double tailDef = (q < 1.0) ? levelDef[K] * q / (1.0 - q)
                                   : std::numeric_limits<double>::infinity();
        out.tailBound = worstFactor * tailDef;
    }
    if (failAbove > 0.0 && out.tailBound > failAbove)
        throw TailTooLarge("groupB: truncation tail exceeds the requested accuracy");
    return out;
}

cplx groupBLogDeriv(const GroupEnumeration& en, cplx z, cplx w) {
    cplx acc = 0.0;
    for (const auto& g : en.elems) acc += elementaryBLogDeriv(z, g(w));
    return acc;
}

Character characterOf(const FuchsianGroup& grp, const GroupEnumeration& en, cplx w,
                      cplx z0) {
    int l = grp.numGenerators();
    Character c;
    c.values.resize(l);
    cplx base = groupB(en, z0, w).value;
    for (int j = 1; j <= l; ++j) {
        cplx moved = groupB(en, grp.generator(j)(z0), w).value;
        cplx ratio = moved / base;
        c.values[j - 1] = ratio / std::abs(ratio);
    }
    return c;
}

cplx alternatingProduct(const GroupEnumeration& en, const std::vector<cplx>& zetas,
                        const std::vector<cplx>& rhos, cplx z) {
    if (zetas.size() != rhos.size())
        throw InvalidInput("alternatingProduct: zetas and rhos must pair up");
    std::size_t n = zetas.size();
    if (n == 0) return 1.0;

    // Interlacing check.  All points lie on one gap circle or on the real
    // diameter; order them by the natural parameter there.
    bool allReal = true;
    for (std::size_t i = 0; i < n; ++i)
        if (std::fabs(zetas[i].imag()) > 1e-12 || std::fabs(rhos[i].imag()) > 1e-12)
            allReal = false;
    cplx cen = 0.0;
    if (!allReal && n > 1) {
        // circumcenter of three of the points; they share one orthocircle
        cplx A = zetas[0], B = rhos[0], C = zetas[n - 1];
        cplx u = B - A, v = C - A;
        double det = 2.0 * (u.real() * v.imag() - u.imag() * v.real());
        if (std::fabs(det) > 1e-14)
            cen = A + cplx((v.imag() * std::norm(u) - u.imag() * std::norm(v)) / det,
                           (u.real() * std::norm(v) - v.real() * std::norm(u)) / det);
    }
    auto param = [&](cplx p) -> double {
        return allReal ? p.real() : std::arg(p - cen);
    };
    double prev = -1e300;
    bool increasing = true, decreasing = true;
    std::vector<double> seq;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(zetas[i] - rhos[i]) == 0.0) continue;  // equal pair contributes 1
        seq.push_back(param(zetas[i]));
        seq.push_back(param(rhos[i]));
    }
    for (double v : seq) {
        if (prev != -1e300) {
            if (v <= prev) increasing = false;
            if (v >= prev) decreasing = false;
        }
        prev = v;
    }
    if (!seq.empty() && !increasing && !decreasing)
        throw InterlacingViolated("alternatingProduct: points do not interlace");

    // evaluate in log form to avoid underflow of long products
    cplx logAcc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(zetas[i] - rhos[i]) == 0.0) continue;
        cplx num = groupB(en, z, zetas[i]).value;
        cplx den = groupB(en, z, rhos[i]).value;
        logAcc += std::log(num / den);
    }
    return std::exp(logAcc);
}

}  // namespace fingap
