#pragma once

#include <vector>

#include "fingap/fuchsian.hpp"

namespace fingap {

// Unitary character of the group: its values on the generators.
struct Character {
    std::vector<cplx> values;

    Character() = default;
    explicit Character(std::vector<cplx> v) : values(std::move(v)) {}
    static Character identity(int l) { return Character(std::vector<cplx>(l, 1.0)); }

    Character mul(const Character& o) const;
    Character inv() const;
    Character pow(int n) const;
    // max over generators of the angular mismatch
    double dist(const Character& o) const;
};

// Elementary Blaschke factor b(z,w).
cplx elementaryB(cplx z, cplx w);
// d/dz log b(z,w)
cplx elementaryBLogDeriv(cplx z, cplx w);

struct GroupBlaschkeValue {
    cplx value;
    double tailBound = 0.0;  // bound on the relative truncation error
};

// Truncated product of b(z, gamma(w)) over the enumerated group, with a
// geometric tail certificate from the per-level sums of (1 - |gamma(w)|).
GroupBlaschkeValue groupB(const GroupEnumeration& en, cplx z, cplx w,
                          double failAbove = -1.0);

// Logarithmic derivative (d/dz) log B(z,w) of the truncated product.
cplx groupBLogDeriv(const GroupEnumeration& en, cplx z, cplx w);

// Character of B(.,w): c_w(gamma_j) = B(gamma_j(z0),w)/B(z0,w).
Character characterOf(const FuchsianGroup& grp, const GroupEnumeration& en, cplx w,
                      cplx z0 = cplx(0.37, 0.11));

// prod_k B(z,zeta_k)/B(z,rho_k) for interlacing points accumulating inside one
// gap circle (or on the real diameter).
cplx alternatingProduct(const GroupEnumeration& en, const std::vector<cplx>& zetas,
                        const std::vector<cplx>& rhos, cplx z);

}  // namespace fingap
