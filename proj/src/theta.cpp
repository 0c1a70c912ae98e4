#include "fingap/theta.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fingap/quadrature.hpp"

namespace fingap {

namespace {

constexpr double kClearance = 8e-3;

double distPointSeg(cplx p, cplx a, cplx b) {
    cplx d = b - a;
    double L2 = std::norm(d);
    if (L2 == 0.0) return std::abs(p - a);
    double t = std::max(0.0, std::min(1.0, ((p - a) * std::conj(d)).real() / L2));
    return std::abs(p - (a + t * d));
}

void refineSegment(cplx a, cplx b, const std::vector<cplx>& avoid, double clr,
                   int depth, std::vector<cplx>& out) {
    if (depth > 0) {
        for (cplx p : avoid) {
            if (std::abs(p - a) < 2 * clr || std::abs(p - b) < 2 * clr) continue;
            if (distPointSeg(p, a, b) < clr) {
                cplx dir = (b - a) / std::abs(b - a);
                cplx nrm = cplx(0, 1) * dir;
                cplx mid = 0.5 * (a + b);
                cplx m1 = mid + 3.0 * clr * nrm, m2 = mid - 3.0 * clr * nrm;
                cplx m = (std::abs(m1 - p) > std::abs(m2 - p)) ? m1 : m2;
                refineSegment(a, m, avoid, clr, depth - 1, out);
                refineSegment(m, b, avoid, clr, depth - 1, out);
                return;
            }
        }
    }
    out.push_back(b);
}

std::vector<cplx> buildPath(cplx to, const std::vector<cplx>& avoid,
                            std::optional<cplx> waypoint) {
    std::vector<cplx> nodes{cplx(0.0, 0.0)};
    if (waypoint) refineSegment(nodes.back(), *waypoint, avoid, kClearance, 8, nodes);
    refineSegment(nodes.back(), to, avoid, kClearance, 8, nodes);
    return nodes;
}

// Continuous square root of f along a polyline from the origin, where f is a
// single-valued function with f(0) = 1 whose zeros and poles are all of even
// order and lie off the path.  Only the branch of the root is tracked; f
// itself is re-evaluated from scratch at every node.
cplx branchSqrtAlongPath(const std::function<cplx(cplx)>& f,
                         const std::vector<cplx>& path,
                         const std::vector<cplx>& avoid) {
    auto distAvoid = [&](cplx z) {
        double d = 1e9;
        for (cplx p : avoid) d = std::min(d, std::abs(z - p));
        return d;
    };
    double t0 = 0.02;
    for (std::size_t i = 1; i < path.size(); ++i)
        t0 = std::min(t0, 0.5 * std::abs(path[i]));
    if (t0 < 1e-14) return 1.0;
    cplx dir = 0.0;
    for (std::size_t i = 1; i < path.size() && std::abs(dir) == 0.0; ++i)
        dir = path[i] - path[0];
    if (std::abs(dir) == 0.0) return 1.0;
    dir /= std::abs(dir);

    cplx zCur = t0 * dir;
    cplx fPrev = f(zCur);
    cplx s = std::sqrt(fPrev);

    for (std::size_t i = 1; i < path.size(); ++i) {
        cplx target = path[i];
        cplx segFrom = zCur;
        double len = std::abs(target - segFrom);
        if (len < 1e-15) continue;
        double u = 0.0;
        double du = std::min(1.0, 0.3 / len);
        double uPrev = -1.0;
        while (u < 1.0 - 1e-12 && u != uPrev) {
            uPrev = u;
            du = std::min(du, 1.0 - u);
            int halving = 0;
            for (;;) {
                cplx zNext = segFrom + (u + du) * (target - segFrom);
                // keep steps short relative to the nearest zero/pole so the
                // argument of f cannot alias across a branch flip
                double dmin = std::min(distAvoid(zCur), distAvoid(zNext));
                if (std::abs(zNext - zCur) > 0.3 * dmin + 1e-12) {
                    du *= 0.5;
                    if (++halving > 60)
                        throw BranchAmbiguity(
                            "branch continuation: path meets a zero or pole");
                    continue;
                }
                cplx fNext = f(zNext);
                // exactly at a zero the square root is 0 regardless of branch
                if (std::abs(fNext) == 0.0 && std::abs(zNext - target) < 1e-10)
                    return 0.0;
                cplx ratio = fNext / fPrev;
                bool ok = std::isfinite(std::abs(ratio)) &&
                          std::fabs(std::arg(ratio)) < 1.2 &&
                          std::abs(ratio) > 0.2 && std::abs(ratio) < 5.0;
                // once the remaining step is at rounding scale, accept: f can
                // no longer vary except through a zero snapped to the target
                if (!ok && du * len < 1e-13 * (1.0 + std::abs(zCur))) ok = true;
                if (ok) {
                    s *= std::sqrt(ratio);
                    fPrev = fNext;
                    zCur = zNext;
                    u += du;
                    du *= 1.6;
                    break;
                }
                du *= 0.5;
                if (++halving > 60)
                    throw BranchAmbiguity(
                        "branch continuation: path meets a zero or pole");
            }
        }
    }
    // continuation decides the phase; the modulus is snapped exactly
    double mag = std::sqrt(std::abs(fPrev));
    if (std::abs(s) > 0.0) s *= mag / std::abs(s);
    return s;
}

// The truncation error of a Blaschke product grows like 1/(1-|z|); switch to
// the deep enumeration near the boundary.
const GroupEnumeration& productEnum(const CoveringMap& map, cplx z) {
    return (std::abs(z) > 0.9 && std::abs(z) < 1.0 / 0.9) ? map.enumeration()
                                                          : map.fastEnumeration();
}

std::vector<cplx> orbitAvoidPoints(const CoveringMap& map,
                                   const std::vector<cplx>& seeds, int maxLen) {
    std::vector<cplx> out;
    const auto& en = map.enumeration();
    std::size_t end = en.levelStart[std::min(maxLen, en.maxLen) + 1];
    for (std::size_t i = 0; i < end; ++i) {
        for (cplx s : seeds) {
            cplx p = en.elems[i](s);
            out.push_back(p);
            if (std::abs(p) > 1e-9) out.push_back(1.0 / std::conj(p));
        }
    }
    return out;
}

}  // namespace

ThetaFn::ThetaFn(const CoveringMap& map, int gap, double pos, int sheet)
    : map_(&map), gap_(gap), pos_(pos), sheet_(sheet) {
    const GapSet& e = map.set();
    if (gap < 1 || gap > e.ell()) throw InvalidInput("ThetaFn: gap index out of range");
    if (pos < e.gapLo(gap) - 1e-12 || pos > e.gapHi(gap) + 1e-12)
        throw InvalidInput("ThetaFn: position outside its closed gap");
    double snap = 1e-10 * (e.gapHi(gap) - e.gapLo(gap));
    if (pos_ < e.gapLo(gap) + snap) {
        pos_ = e.gapLo(gap);
        sheet_ = +1;
        trivialOne_ = true;
        zeta_ = map.zetaRef(gap);
        etaKind_ = 1;
        eta0_ = 1.0;
        return;
    }
    if (pos_ > e.gapHi(gap) - snap) {
        pos_ = e.gapHi(gap);
        sheet_ = +1;
        zeta_ = map.gapToCirclePoint(gap, pos_, +1);
        etaKind_ = 1;
        eta0_ = 1.0;
    } else {
        zeta_ = map.gapToCirclePoint(gap, pos_, sheet_);
        if (std::abs(zeta_) < 1.0 - 1e-12) {
            etaKind_ = 0;
            etaSeed_ = zeta_;
        } else if (std::abs(zeta_) > 1.0 + 1e-12) {
            etaKind_ = 2;
            etaSeed_ = 1.0 / std::conj(zeta_);
        } else {
            etaKind_ = 1;
        }
        if (etaKind_ != 1) {
            eta0_ = groupB(map.fastEnumeration(), cplx(0, 0), etaSeed_).value;
            if (etaKind_ == 2) eta0_ = 1.0 / eta0_;
        } else {
            eta0_ = 1.0;
        }
    }
    avoid_ = orbitAvoidPoints(map, {zeta_, map.zetaRef(gap)}, 4);
}

cplx ThetaFn::etaVal(cplx z) const {
    if (etaKind_ == 1) return 1.0;
    cplx b = groupB(productEnum(*map_, z), z, etaSeed_).value;
    return (etaKind_ == 2) ? 1.0 / b : b;
}

cplx ThetaFn::squared(cplx z) const {
    if (trivialOne_) return 1.0;
    cplx x = map_->evalXFast(z);
    cplx xpart = 1.0;
    if (std::isfinite(std::abs(x)) && std::abs(x) < 1e13)
        xpart = (x - pos_) / (x - map_->set().gapLo(gap_));
    return xpart * etaVal(z) / eta0_;
}

cplx ThetaFn::eval(cplx z, std::optional<cplx> waypoint) const {
    if (trivialOne_) return 1.0;
    if (std::abs(z) < 1e-14) return 1.0;
    auto f = [&](cplx zz) { return squared(zz); };
    return branchSqrtAlongPath(f, buildPath(z, avoid_, waypoint), avoid_);
}

Character ThetaFn::character() const {
    int l = map_->ell();
    Character c;
    c.values.resize(l);
    for (int k = 1; k <= l; ++k) {
        cplx v = eval(map_->group().generator(k)(cplx(0.0, 0.0)));
        c.values[k - 1] = v / std::abs(v);
    }
    return c;
}

ThetaFn buildTheta(const CoveringMap& map, int gap, const DirichletEntry& y) {
    return ThetaFn(map, gap, y.pos, y.sheet);
}

Character abelMap(const CoveringMap& map, int gap, const DirichletEntry& y) {
    return ThetaFn(map, gap, y.pos, y.sheet).character();
}

Character abelMapTorus(const CoveringMap& map, const DirichletData& y) {
    Character c = Character::identity(map.ell());
    for (int j = 1; j <= map.ell(); ++j) c = c.mul(abelMap(map, j, y[j - 1]));
    return c;
}

DirichletData abelInverse(const CoveringMap& map, const Character& target) {
    int l = map.ell();
    if (l == 0) return {};

    auto anglesToData = [&](const std::vector<double>& psi) {
        DirichletData y(l);
        for (int j = 1; j <= l; ++j) {
            cplx zeta = map.circlePoint(j, psi[j - 1]);
            auto pg = map.circlePointToGap(j, zeta);
            y[j - 1] = DirichletEntry{pg.first, pg.second};
        }
        return y;
    };
    auto residual = [&](const std::vector<double>& psi) {
        auto c = abelMapTorus(map, anglesToData(psi));
        std::vector<double> r(l);
        for (int j = 0; j < l; ++j)
            r[j] = wrapAngle(std::arg(c.values[j]) - std::arg(target.values[j]));
        return r;
    };

    auto tryNewton = [&](std::vector<double> psi,
                         double tol) -> std::pair<bool, std::vector<double>> {
        for (int it = 0; it < 40; ++it) {
            auto r = residual(psi);
            double rn = 0.0;
            for (double v : r) rn = std::max(rn, std::fabs(v));
            if (rn < tol) return {true, psi};
            std::vector<std::vector<double>> J(l, std::vector<double>(l));
            for (int m = 0; m < l; ++m) {
                auto pp = psi;
                double h = 1e-5;
                pp[m] += h;
                auto rp = residual(pp);
                for (int jj = 0; jj < l; ++jj) J[jj][m] = wrapAngle(rp[jj] - r[jj]) / h;
            }
            std::vector<double> d(l);
            if (l == 1) {
                if (std::fabs(J[0][0]) < 1e-14) return {false, psi};
                d[0] = -r[0] / J[0][0];
            } else {
                double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
                if (std::fabs(det) < 1e-14) return {false, psi};
                d[0] = (-r[0] * J[1][1] + r[1] * J[0][1]) / det;
                d[1] = (-J[0][0] * r[1] + J[1][0] * r[0]) / det;
            }
            double dn = 0.0;
            for (double v : d) dn = std::max(dn, std::fabs(v));
            if (dn > 0.9)
                for (auto& v : d) v *= 0.9 / dn;
            for (int m = 0; m < l; ++m) psi[m] = wrapAngle(psi[m] + d[m]);
        }
        return {false, psi};
    };

    const double tol = 1e-8;
    // seed by sweeping each gap angle against the diagonal character entry,
    // with the other coordinates held at the base corners
    cplx zero(0.0, 0.0);
    std::vector<double> seed(l, 0.0);
    for (int j = 1; j <= l; ++j) {
        double best = 1e300, bestPsi = 0.0;
        for (int k = 0; k < 12; ++k) {
            double psi = -kPi + (2 * kPi * (k + 0.5)) / 12;
            cplx zeta = map.circlePoint(j, psi);
            auto pg = map.circlePointToGap(j, zeta);
            ThetaFn th(map, j, pg.first, pg.second);
            cplx v = th.eval(map.group().generator(j)(zero));
            double diff = std::fabs(
                wrapAngle(std::arg(v) - std::arg(target.values[j - 1])));
            if (diff < best) {
                best = diff;
                bestPsi = psi;
            }
        }
        seed[j - 1] = bestPsi;
    }
    auto res = tryNewton(seed, tol);
    if (res.first) return anglesToData(res.second);
    // fall back to a coarse joint grid
    int grid = (l == 1) ? 10 : 6;
    std::vector<std::pair<double, std::vector<double>>> seeds;
    std::vector<double> psi(l);
    std::function<void(int)> scan = [&](int j) {
        if (j == l) {
            auto r = residual(psi);
            double rn = 0.0;
            for (double v : r) rn = std::max(rn, std::fabs(v));
            seeds.emplace_back(rn, psi);
            return;
        }
        for (int k = 0; k < grid; ++k) {
            psi[j] = -kPi + (2 * kPi * (k + 0.5)) / grid;
            scan(j + 1);
        }
    };
    scan(0);
    std::sort(seeds.begin(), seeds.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < std::min<std::size_t>(seeds.size(), 5); ++i) {
        auto r2 = tryNewton(seeds[i].second, tol);
        if (r2.first) return anglesToData(r2.second);
    }
    throw NoConvergence("abelInverse: Newton failed from all seeds");
}

PsiFn::PsiFn(const CoveringMap& map, int gap) : map_(&map), gap_(gap) {
    if (gap != 1) avoid_ = orbitAvoidPoints(map, {map.zetaRef(gap), map.zetaRef(1)}, 4);
}

cplx PsiFn::eval(cplx z) const {
    if (gap_ == 1) return 1.0;
    if (std::abs(z) < 1e-14) return 1.0;
    double bj = map_->set().gapLo(gap_), b1 = map_->set().gapLo(1);
    auto f = [&](cplx zz) -> cplx {
        cplx xx = map_->evalXFast(zz);
        if (!std::isfinite(std::abs(xx)) || std::abs(xx) > 1e13) return 1.0;
        return (xx - bj) / (xx - b1);
    };
    return branchSqrtAlongPath(f, buildPath(z, avoid_, {}), avoid_);
}

Character PsiFn::character() const {
    int l = map_->ell();
    Character c;
    c.values.resize(l);
    if (gap_ == 1) return Character::identity(l);
    for (int k = 1; k <= l; ++k) {
        cplx v = eval(map_->group().generator(k)(cplx(0.0, 0.0)));
        c.values[k - 1] = v / std::abs(v);
    }
    return c;
}


namespace {

// classify a gap point for the eta factor of the bracket
struct EtaSpec {
    int kind;   // 0: seed in D, 1: boundary (no factor), 2: reflected seed
    cplx seed;
    cplx zeta;
    double pos;
};

EtaSpec classifyGapPoint(const CoveringMap& map, int gap, DirichletEntry e) {
    const GapSet& s = map.set();
    double lo = s.gapLo(gap), hi = s.gapHi(gap);
    double snap = 1e-10 * (hi - lo);
    EtaSpec out;
    if (e.pos < lo + snap) {
        out = {1, 0.0, map.zetaRef(gap), lo};
        return out;
    }
    if (e.pos > hi - snap) {
        out = {1, 0.0, map.gapToCirclePoint(gap, hi, +1), hi};
        return out;
    }
    cplx zeta = map.gapToCirclePoint(gap, e.pos, e.sheet);
    if (std::abs(zeta) < 1.0 - 1e-12) {
        out = {0, zeta, zeta, e.pos};
    } else if (std::abs(zeta) > 1.0 + 1e-12) {
        out = {2, 1.0 / std::conj(zeta), zeta, e.pos};
    } else {
        out = {1, 0.0, zeta, e.pos};
    }
    return out;
}

}  // namespace

ThetaRatio::ThetaRatio(const CoveringMap& map, int gap, const DirichletEntry& num,
                       const DirichletEntry& den)
    : map_(&map), gap_(gap) {
    auto n = classifyGapPoint(map, gap, num);
    auto d = classifyGapPoint(map, gap, den);
    posN_ = n.pos;
    posD_ = d.pos;
    zetaN_ = n.zeta;
    zetaD_ = d.zeta;
    kindN_ = n.kind;
    kindD_ = d.kind;
    seedN_ = n.seed;
    seedD_ = d.seed;
    if (posN_ == posD_ && std::abs(zetaN_ - zetaD_) < 1e-12) {
        trivial_ = true;
        return;
    }
    cplx e0 = 1.0;
    if (kindN_ != 1) {
        cplx b = groupB(map.fastEnumeration(), cplx(0, 0), seedN_).value;
        e0 *= (kindN_ == 2) ? 1.0 / b : b;
    }
    if (kindD_ != 1) {
        cplx b = groupB(map.fastEnumeration(), cplx(0, 0), seedD_).value;
        e0 /= (kindD_ == 2) ? 1.0 / b : b;
    }
    norm_ = 1.0 / e0;
    avoid_ = orbitAvoidPoints(map, {zetaN_, zetaD_}, 4);
}

cplx ThetaRatio::etaPart(cplx z) const {
    const auto& en = productEnum(*map_, z);
    cplx v = 1.0;
    if (kindN_ != 1) {
        cplx b = groupB(en, z, seedN_).value;
        v *= (kindN_ == 2) ? 1.0 / b : b;
    }
    if (kindD_ != 1) {
        cplx b = groupB(en, z, seedD_).value;
        v /= (kindD_ == 2) ? 1.0 / b : b;
    }
    return v;
}

cplx ThetaRatio::squared(cplx z) const {
    if (trivial_) return 1.0;
    cplx x = map_->evalXFast(z);
    cplx xpart = 1.0;
    if (std::isfinite(std::abs(x)) && std::abs(x) < 1e13)
        xpart = (x - posN_) / (x - posD_);
    return xpart * etaPart(z) * norm_;
}

cplx ThetaRatio::eval(cplx z) const {
    if (trivial_) return 1.0;
    if (std::abs(z) < 1e-14) return 1.0;
    auto f = [&](cplx zz) { return squared(zz); };
    return branchSqrtAlongPath(f, buildPath(z, avoid_, {}), avoid_);
}


SpecialFn::SpecialFn(const CoveringMap& map, const Divisor& d, double charTol)
    : map_(&map), div_(d) {
    int sum = 0;
    for (const auto& pt : d.points) sum += pt.order;
    if (sum != 0)
        throw AbelConditionViolated("specialFunction: divisor orders do not sum to zero");

    Character cond = abelInfinity(map).pow(d.nPlus);
    for (const auto& pt : d.points) {
        thetas_.emplace_back(map, pt.gap, pt.pos, pt.sheet);
        psis_.emplace_back(map, pt.gap);
        orders_.push_back(pt.order);
        Character sharp = thetas_.back().character().mul(psis_.back().character());
        cond = cond.mul(sharp.pow(pt.order));
    }
    chr_ = cond;
    if (cond.dist(Character::identity(map.ell())) > charTol)
        throw AbelConditionViolated("specialFunction: character condition fails");
}

cplx SpecialFn::eval(cplx z) const {
    cplx logAcc = static_cast<double>(div_.nPlus) * std::log(map_->B(z));
    for (std::size_t i = 0; i < thetas_.size(); ++i) {
        logAcc += static_cast<double>(orders_[i]) *
                  (std::log(thetas_[i].eval(z)) + std::log(psis_[i].eval(z)));
    }
    return std::exp(logAcc);
}

}  // namespace fingap
