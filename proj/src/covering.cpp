#include "fingap/covering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fingap/quadrature.hpp"

namespace fingap {

namespace {

// inverse Joukowski onto the unit disk: the root of z + 1/z = 2w inside |z|<=1
cplx joukowskiInv(cplx w) {
    cplx s = std::sqrt(w * w - 1.0);
    cplx z1 = w + s, z2 = w - s;
    return (std::abs(z1) <= std::abs(z2)) ? z1 : z2;
}

double goldenMin(const std::function<double(double)>& f, double a, double b, int iters) {
    const double q = 0.6180339887498949;
    double x1 = b - q * (b - a), x2 = a + q * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - q * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + q * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// continuous phase increment of B along the boundary between two angles
double phaseDelta(const std::function<cplx(double)>& Bofth, double th1, double th2,
                  cplx B1, cplx B2, int depth = 0) {
    double d = std::arg(B2 / B1);
    if (std::fabs(d) < 1.0 || depth > 42) return d;
    double mid = 0.5 * (th1 + th2);
    cplx Bm = Bofth(mid);
    return phaseDelta(Bofth, th1, mid, B1, Bm, depth + 1) +
           phaseDelta(Bofth, mid, th2, Bm, B2, depth + 1);
}

}  // namespace

cplx CoveringMap::B(cplx z) const {
    if (trivial_) return z;
    return groupB(en_, z, cplx(0.0, 0.0)).value;
}

cplx CoveringMap::BLogDeriv(cplx z) const {
    if (trivial_) return 1.0 / z;
    return groupBLogDeriv(en_, z, cplx(0.0, 0.0));
}

cplx CoveringMap::Phi(cplx x) const {
    return std::exp(-pot_->greenFunction(x).gComplex);
}

cplx CoveringMap::evalXInFundamental(cplx z, const GroupEnumeration& en) const {
    double az = std::abs(z);
    if (az < 1e-13) return cplx(INFINITY, 0.0);
    if (z.imag() < 0.0) return std::conj(evalXInFundamental(std::conj(z), en));

    // points on a gap circle carry real gap values; the chart resolves the
    // side of the Craig zero, which a g-targeted Newton cannot (both sides
    // solve |B| = e^{-G})
    for (int j = 1; j <= set_.ell(); ++j) {
        const auto& c = charts_[j - 1].circle;
        if (std::fabs(std::abs(z - c.center) - c.radius) < 1e-9)
            return cplx(circlePointToGap(j, z).first, 0.0);
    }

    // real diameter points: monotone 1-D inversion of the real Green's
    // function on the matching ray
    if (std::fabs(z.imag()) < 1e-14) {
        double t = z.real();
        double Bv = groupB(en, cplx(t, 0.0), cplx(0.0, 0.0)).value.real();
        double target = -std::log(std::fabs(Bv));
        bool rightRay = (t > 0.0);
        double edge = rightRay ? set_.hullHi() : set_.hullLo();
        double span = set_.hullHi() - set_.hullLo();
        double lo = 0.0, hi = span;  // offsets from the edge
        while (pot_->gUpper(rightRay ? edge + hi : edge - hi).real() < target)
            hi *= 2.0;
        for (int it = 0; it < 90; ++it) {
            double mid = 0.5 * (lo + hi);
            double G = pot_->gUpper(rightRay ? edge + mid : edge - mid).real();
            if (G < target) lo = mid; else hi = mid;
        }
        double off = 0.5 * (lo + hi);
        return cplx(rightRay ? edge + off : edge - off, 0.0);
    }

    auto Bloc = [&](cplx w) { return groupB(en, w, cplx(0.0, 0.0)).value; };
    double t0 = std::min(1.0, 0.05 / az);
    cplx z0 = t0 * z;
    cplx lam = std::log(Bloc(z0));  // principal log is safe near the origin

    cplx xSeed = xInfinity_ / z0;
    cplx gSeed = pot_->greenFunction(xSeed).gComplex;
    // align the log B branch with the canonical branch of g at the anchor
    double k = std::round((gSeed.imag() + lam.imag()) / (2.0 * kPi));
    lam -= cplx(0.0, 2.0 * kPi * k);

    GreenWalker walker(*pot_, xSeed, gSeed, 0.1 * tol_.quad);
    walker.solveFor(-lam, tol_.root * (1.0 + std::abs(lam)));

    double t = t0;
    cplx Bprev = Bloc(z0);
    while (t < 1.0) {
        double tn = std::min(1.0, t * 1.35 + 1e-3);
        for (int halving = 0;; ++halving) {
            cplx Bn = Bloc(tn * z);
            cplx dl = std::log(Bn / Bprev);
            if (std::abs(dl) <= 0.8) {
                lam += dl;
                Bprev = Bn;
                t = tn;
                break;
            }
            tn = t + 0.5 * (tn - t);
            if (halving > 50 || tn - t < 1e-13)
                throw BranchTrackingFailure("x-continuation: vanishing step");
        }
        walker.solveFor(-lam, tol_.root * (1.0 + std::abs(lam)));
    }
    return walker.x();
}

cplx CoveringMap::evalX(cplx z) const {
    if (trivial_) {
        double c = 0.5 * (set_.hullLo() + set_.hullHi());
        double h = 0.5 * (set_.hullHi() - set_.hullLo());
        if (std::abs(z) < 1e-300) return cplx(INFINITY, 0.0);
        return c + 0.5 * h * (z + 1.0 / z);
    }
    double az = std::abs(z);
    if (az > 1.0 + 1e-12) return evalX(1.0 / z);
    if (az > 1.0 - 1e-12) return cplx(xOnBoundary(std::arg(z)), 0.0);
    auto red = grp_.reduceToFundamental(z);
    return evalXInFundamental(red.first, en_);
}

cplx CoveringMap::evalXFast(cplx z) const {
    if (trivial_) return evalX(z);
    double az = std::abs(z);
    if (az > 1.0 + 1e-12) return evalXFast(1.0 / z);
    if (az > 1.0 - 1e-12) return cplx(xOnBoundary(std::arg(z)), 0.0);
    for (int j = 1; j <= set_.ell(); ++j) {
        const auto& cc = charts_[j - 1].circle;
        if (std::fabs(std::abs(z - cc.center) - cc.radius) < 1e-9)
            return cplx(circlePointToGap(j, z).first, 0.0);
    }
    auto red = grp_.reduceToFundamental(z);
    return evalXInFundamental(red.first, enFast_);
}

std::pair<cplx, int> CoveringMap::evalXSharp(cplx z) const {
    double az = std::abs(z);
    if (az > 1.0 + 1e-12) return {evalX(1.0 / z), -1};
    if (az >= 1.0 - 1e-12) return {evalX(z), 0};
    return {evalX(z), +1};
}

cplx CoveringMap::invertX(cplx x) const {
    if (trivial_) {
        double c = 0.5 * (set_.hullLo() + set_.hullHi());
        double h = 0.5 * (set_.hullHi() - set_.hullLo());
        if (std::abs(x) == INFINITY) return 0.0;
        return joukowskiInv((x - c) / h);
    }

    if (x.imag() == 0.0) {
        double xr = x.real();
        if (xr > set_.hullHi()) {
            double target = std::exp(-pot_->gUpper(xr).real());
            double lo = 1e-9, hi = 1.0 - 1e-12;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                if (B(cplx(mid, 0.0)).real() < target) lo = mid; else hi = mid;
            }
            return cplx(0.5 * (lo + hi), 0.0);
        }
        if (xr < set_.hullLo()) {
            double target = std::exp(-pot_->gUpper(xr).real());
            double lo = -1.0 + 1e-12, hi = -1e-9;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                if (std::abs(B(cplx(mid, 0.0))) < target) hi = mid; else lo = mid;
            }
            return cplx(0.5 * (lo + hi), 0.0);
        }
        int gap = set_.gapOf(xr);
        if (gap != 0) return gapToCirclePoint(gap, xr, +1);
        if (set_.contains(xr)) throw OutOfDomain("invertX: x lies in the spectrum");
    }

    cplx w = Phi(x);
    auto newton = [&](cplx z) -> std::pair<bool, cplx> {
        for (int it = 0; it < 60; ++it) {
            cplx bz = B(z);
            cplx r = bz - w;
            if (std::abs(r) < 3e-14 * (1.0 + std::abs(w))) return {true, z};
            cplx dz = r / (bz * BLogDeriv(z));
            double cap = 0.3;
            if (std::abs(dz) > cap) dz *= cap / std::abs(dz);
            z -= dz;
            if (std::abs(z) > 1.0 - 1e-12) z *= (1.0 - 1e-9) / std::abs(z);
        }
        return {false, z};
    };

    double c = 0.5 * (set_.hullLo() + set_.hullHi());
    double h = 0.5 * (set_.hullHi() - set_.hullLo());
    cplx seed = joukowskiInv((x - c) / h);
    if (std::abs(seed) > 1.0 - 1e-9) seed *= (1.0 - 1e-6) / std::abs(seed);
    auto res = newton(seed);
    if (!res.first) {
        double best = 1e300;
        cplx bestZ = seed;
        for (double r = 0.12; r < 0.96; r += 0.12) {
            for (int k = 0; k < 24; ++k) {
                cplx z = std::polar(r, 2.0 * kPi * k / 24.0);
                if (!grp_.inFundamental(z)) continue;
                double d = std::abs(B(z) - w);
                if (d < best) {
                    best = d;
                    bestZ = z;
                }
            }
        }
        res = newton(bestZ);
        if (!res.first) throw NoConvergence("invertX: Newton failed from all seeds");
    }
    cplx zOut = grp_.reduceToFundamental(res.second).first;
    // B(z) = Phi(x) is two-to-one around each Craig zero fold; verify the
    // branch, and when the twin was found chase x directly with a Newton on
    // the covering map itself (x' = B'/(B M))
    cplx xBack = evalXInFundamental(zOut, en_);
    if (std::abs(xBack - x) > 1e-7 * (1.0 + std::abs(x))) {
        auto xNewton = [&](cplx z) -> std::pair<bool, cplx> {
            for (int it = 0; it < 40; ++it) {
                cplx zr = grp_.reduceToFundamental(z).first;
                cplx xv = evalXInFundamental(zr, en_);
                cplx r = xv - x;
                if (std::abs(r) < 1e-9 * (1.0 + std::abs(x))) return {true, zr};
                cplx Bv = B(zr);
                cplx xp = Bv * BLogDeriv(zr) == cplx(0.0)
                              ? cplx(1.0)
                              : (Bv * BLogDeriv(zr)) / (Bv * pot_->Me(xv));
                cplx dz = -r / xp;
                double cap = 0.08;
                if (std::abs(dz) > cap) dz *= cap / std::abs(dz);
                z = zr + dz;
                if (std::abs(z) > 1.0 - 1e-12) z *= (1.0 - 1e-9) / std::abs(z);
            }
            return {false, z};
        };
        std::vector<cplx> seeds{zOut};
        for (int j = 1; j <= set_.ell(); ++j) {
            cplx zc = circlePoint(j, charts_[j - 1].psiCrit);
            seeds.push_back(2.0 * zc - zOut);
            seeds.push_back(zc + (x.imag() >= 0 ? -0.05 : 0.05) * cplx(0, 1));
        }
        for (cplx s : seeds) {
            auto res2 = xNewton(s);
            if (res2.first) return res2.second;
        }
        throw NoConvergence("invertX: branch verification failed");
    }
    return zOut;
}

double CoveringMap::xOnFundamentalArc(double theta) const {
    auto Bofth = [&](double th) { return B(std::polar(1.0, th)); };
    for (const auto& pc : pieces_) {
        if (theta < pc.thLo - 1e-12 || theta > pc.thHi + 1e-12) continue;
        std::size_t i = 0;
        while (i + 1 < pc.th.size() && pc.th[i + 1] <= theta) ++i;
        double u = pc.u[i] +
                   phaseDelta(Bofth, pc.th[i], theta, Bofth(pc.th[i]), Bofth(theta));
        double nLo = (pc.band == set_.numBands())
                         ? 0.0
                         : pot_->cumulativeFromRight(set_.beta(pc.band));
        double nHi = pot_->cumulativeFromRight(set_.alpha(pc.band));
        double n = std::min(nHi, std::max(nLo, u / kPi));
        return pot_->inverseCumulative(n);
    }
    throw OutOfDomain("xOnBoundary: angle not on a fundamental arc");
}

double CoveringMap::xOnBoundary(double theta) const {
    if (trivial_) {
        double c = 0.5 * (set_.hullLo() + set_.hullHi());
        double h = 0.5 * (set_.hullHi() - set_.hullLo());
        return c + h * std::cos(theta);
    }
    theta = std::fabs(wrapAngle(theta));  // conjugation symmetry
    cplx z = std::polar(1.0, theta);
    for (int it = 0;; ++it) {
        bool moved = false;
        for (int j = 1; j <= grp_.numGenerators() && !moved; ++j) {
            if (grp_.upperCircles()[j - 1].strictContains(z)) {
                z = grp_.generatorInv(j)(z);
                moved = true;
            } else if (grp_.lowerCircles()[j - 1].strictContains(z)) {
                z = grp_.generator(j)(z);
                moved = true;
            }
        }
        if (!moved) break;
        z /= std::abs(z);
        if (it > 2000)
            throw LimitSetProximity("xOnBoundary: reduction did not terminate");
    }
    return xOnFundamentalArc(std::fabs(wrapAngle(std::arg(z))));
}

cplx CoveringMap::circlePoint(int j, double psi) const {
    const auto& c = charts_[j - 1].circle;
    return c.center + std::polar(c.radius, psi);
}

double CoveringMap::circleAngle(int j, cplx zeta) const {
    return std::arg(zeta - charts_[j - 1].circle.center);
}

std::pair<double, int> CoveringMap::circlePointToGap(int j, cplx zeta) const {
    int sheet = (std::abs(zeta) <= 1.0) ? +1 : -1;
    cplx zin = (sheet == +1) ? zeta : 1.0 / zeta;
    const auto& ch = charts_[j - 1];
    {
        // near the |B| dip the Green inversion is quadratically degenerate;
        // recover the position by radial extrapolation from just inside
        double psiHere = std::arg(zin - ch.circle.center);
        if (std::fabs(wrapAngle(psiHere - ch.psiCrit)) < 1e-3) {
            double d = 1e-6;
            cplx x1 = evalXInFundamental(zin * (1.0 - d), en_);
            cplx x2 = evalXInFundamental(zin * (1.0 - 2.0 * d), en_);
            double pos = (2.0 * x1 - x2).real();
            pos = std::min(std::max(pos, set_.gapLo(j)), set_.gapHi(j));
            return {pos, sheet};
        }
    }
    double G = -std::log(std::abs(B(zin)));
    double craig = pot_->craigZeros()[j - 1];
    double psi = circleAngle(j, zin);
    // between the beta corner and the critical angle <=> left of the Craig zero
    double span = std::fabs(wrapAngle(ch.psiCrit - ch.psiBeta));
    double dBeta = std::fabs(wrapAngle(psi - ch.psiBeta));
    double dCrit = std::fabs(wrapAngle(psi - ch.psiCrit));
    bool betaSide = (dBeta <= span + 1e-9 && dCrit <= span + 1e-9);
    double lo = betaSide ? set_.gapLo(j) : craig;
    double hi = betaSide ? craig : set_.gapHi(j);
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double val = pot_->greenInGapFast(j, mid);
        bool goRight = betaSide ? (val < G) : (val > G);
        if (goRight) lo = mid; else hi = mid;
    }
    double pos = 0.5 * (lo + hi);
    double snap = 1e-13 * (set_.gapHi(j) - set_.gapLo(j));
    if (pos - set_.gapLo(j) < snap) return {set_.gapLo(j), +1};
    if (set_.gapHi(j) - pos < snap) return {set_.gapHi(j), +1};
    return {pos, sheet};
}

cplx CoveringMap::gapToCirclePoint(int j, double pos, int sheet) const {
    const auto& ch = charts_[j - 1];
    double lo = set_.gapLo(j), hi = set_.gapHi(j);
    double snap = 1e-10 * (hi - lo);
    if (pos < lo + snap) return ch.zetaBeta;
    if (pos > hi - snap) return ch.zetaAlpha;
    double craig = pot_->craigZeros()[j - 1];
    double Gt = pot_->greenInGap(j, pos);
    double psiEdge = (pos <= craig) ? ch.psiBeta : ch.psiAlpha;
    // bisect on the monotone half of the arc between the edge corner and the dip
    double a = psiEdge, b0 = ch.psiCrit;
    double da = wrapAngle(b0 - a);
    double s0 = 0.0, s1 = 1.0;
    for (int it = 0; it < 80; ++it) {
        double s = 0.5 * (s0 + s1);
        double val = -std::log(std::abs(B(circlePoint(j, a + da * s))));
        if (val < Gt) s0 = s; else s1 = s;
    }
    cplx zin = circlePoint(j, a + da * 0.5 * (s0 + s1));
    return (sheet == +1) ? zin : 1.0 / zin;
}

DirichletData CoveringMap::farDirichlet() const {
    DirichletData w(set_.ell());
    for (int j = 1; j <= set_.ell(); ++j) {
        w[j - 1].pos = charts_[j - 1].farPos;
        w[j - 1].sheet = -1;
    }
    return w;
}

void CoveringMap::buildCharts() {
    int l = set_.ell();
    for (int j = 1; j <= l; ++j) {
        auto& ch = charts_[j - 1];
        const auto& c = ch.circle;
        auto [a1, a2] = c.cornerAngles();
        // x decreases with increasing boundary angle, so the larger corner
        // angle is the beta_j end
        ch.zetaBeta = std::polar(1.0, a2);
        ch.zetaAlpha = std::polar(1.0, a1);
        ch.psiBeta = std::arg(ch.zetaBeta - c.center);
        ch.psiAlpha = std::arg(ch.zetaAlpha - c.center);
        ch.psiNear = std::arg(-c.center);
        double dA = wrapAngle(ch.psiNear - ch.psiBeta);
        double dB = wrapAngle(ch.psiAlpha - ch.psiNear);
        auto absB = [&](double s) {
            double psi = (s < 0.5) ? ch.psiBeta + dA * 2.0 * s
                                   : ch.psiNear + dB * (2.0 * s - 1.0);
            return std::abs(B(circlePoint(j, psi)));
        };
        double sMin = goldenMin(absB, 0.01, 0.99, 80);
        ch.psiCrit = (sMin < 0.5) ? ch.psiBeta + dA * 2.0 * sMin
                                  : ch.psiNear + dB * (2.0 * sMin - 1.0);
        ch.gMax = -std::log(absB(sMin));
        double acen = std::abs(c.center);
        ch.zetaFar = c.center / (acen * (acen - c.radius));
        cplx zNear = c.center * (1.0 - c.radius / acen);
        ch.farPos = circlePointToGap(j, zNear).first;
    }
}

void CoveringMap::buildBoundaryTables() {
    int l = set_.ell();
    std::vector<std::pair<double, double>> sh;
    for (const auto& ch : charts_) sh.push_back(ch.circle.cornerAngles());
    std::sort(sh.begin(), sh.end());
    for (std::size_t i = 0; i + 1 < sh.size(); ++i)
        if (sh[i].second >= sh[i + 1].first)
            throw GeometryError("boundary tables: shadow arcs overlap");

    auto Bofth = [&](double th) { return B(std::polar(1.0, th)); };
    pieces_.clear();
    phaseResid_ = 0.0;
    for (int i = 0; i <= l; ++i) {
        BoundaryPiece pc;
        pc.thLo = (i == 0) ? 0.0 : sh[i - 1].second;
        pc.thHi = (i == l) ? kPi : sh[i].first;
        pc.band = set_.numBands() - i;
        double xLo = (i == 0) ? set_.hullHi() : set_.beta(pc.band);
        double xHi = (i == l) ? set_.hullLo() : set_.alpha(pc.band);
        pc.uLo = (i == 0) ? 0.0 : kPi * pot_->cumulativeFromRight(xLo);
        int n = 48;
        pc.th.resize(n + 1);
        pc.u.resize(n + 1);
        for (int k = 0; k <= n; ++k) {
            double s = 0.5 * (1.0 - std::cos(kPi * k / n));
            pc.th[k] = pc.thLo + (pc.thHi - pc.thLo) * s;
        }
        pc.u[0] = pc.uLo;
        cplx Bp = Bofth(pc.th[0]);
        for (int k = 1; k <= n; ++k) {
            cplx Bn = Bofth(pc.th[k]);
            pc.u[k] = pc.u[k - 1] + phaseDelta(Bofth, pc.th[k - 1], pc.th[k], Bp, Bn);
            Bp = Bn;
        }
        double uHiExpect = kPi * pot_->cumulativeFromRight(xHi);
        phaseResid_ = std::max(phaseResid_, std::fabs(pc.u[n] - uHiExpect));
        pieces_.push_back(std::move(pc));
    }
}

void CoveringMap::buildSzegoNodes() {
    snodes_.clear();
    const auto& gl = gaussLegendre(16);
    auto Bofth = [&](double th) { return B(std::polar(1.0, th)); };
    auto addOnePanel = [&](double a, double b) {
        double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int i = 0; i < 16; ++i) {
            SzegoNode nd;
            nd.theta = c + h * gl.first[i];
            nd.weight = h * gl.second[i];
            // locate the piece and invert the cumulative measure, keeping the
            // edge distances in the angle variable where they stay accurate
            bool done = false;
            for (const auto& pc : pieces_) {
                if (nd.theta < pc.thLo - 1e-12 || nd.theta > pc.thHi + 1e-12) continue;
                std::size_t k = 0;
                while (k + 1 < pc.th.size() && pc.th[k + 1] <= nd.theta) ++k;
                double u = pc.u[k] + phaseDelta(Bofth, pc.th[k], nd.theta,
                                                Bofth(pc.th[k]), Bofth(nd.theta));
                double nLo = (pc.band == set_.numBands())
                                 ? 0.0
                                 : pot_->cumulativeFromRight(set_.beta(pc.band));
                double nHi = pot_->cumulativeFromRight(set_.alpha(pc.band));
                double n = std::min(nHi, std::max(nLo, u / kPi));
                auto bp = pot_->inverseCumulativeDetailed(n);
                nd.x = bp.x;
                nd.band = bp.band;
                nd.distLo = bp.distLo;
                nd.distHi = bp.distHi;
                done = true;
                break;
            }
            if (!done) throw OutOfDomain("szego nodes: node off the fundamental arcs");
            nd.K0 = 0.0;
            cplx w = std::polar(1.0, nd.theta);
            for (const auto& g : en_.elems) nd.K0 += std::abs(g.derivative(w));
            snodes_.push_back(nd);
        }
    };
    // cap panel widths so Poisson kernels of interior points stay resolved
    auto addPanel = [&](double a, double b) {
        int parts = std::max(1, static_cast<int>(std::ceil((b - a) / 0.01)));
        for (int i = 0; i < parts; ++i)
            addOnePanel(a + (b - a) * i / parts, a + (b - a) * (i + 1) / parts);
    };
    // each upper fundamental arc, graded geometrically into both corners;
    // the 1:2 ratio keeps the per-panel Gauss error of the corner log
    // singularities near machine precision
    for (const auto& pc : pieces_) {
        double a = pc.thLo, b = pc.thHi;
        double mid = 0.5 * (a + b);
        const int levels = 48;
        const double q = 0.5;
        double hi = mid;
        double L = mid - a;
        for (int kk = 0; kk < levels; ++kk) {
            double lo = a + L * std::pow(q, kk + 1);
            if (kk == levels - 1) lo = a + 1e-12 * L;
            addPanel(lo, hi);
            hi = lo;
        }
        double lo2 = mid;
        double L2 = b - mid;
        for (int kk = 0; kk < levels; ++kk) {
            double hi2 = b - L2 * std::pow(q, kk + 1);
            if (kk == levels - 1) hi2 = b - 1e-12 * L2;
            addPanel(lo2, hi2);
            lo2 = hi2;
        }
    }
}

cplx CoveringMap::foldedHerglotzKernel(double theta, cplx z) const {
    cplx w = std::polar(1.0, theta);
    cplx acc = 0.0;
    for (const auto& g : en_.elems) {
        cplx gw = g(w);
        double dg = std::abs(g.derivative(w));
        acc += dg * ((gw + z) / (gw - z) + (std::conj(gw) + z) / (std::conj(gw) - z));
    }
    return acc;
}

double CoveringMap::pushforwardIntegral(const std::function<double(double)>& f) const {
    if (trivial_) {
        auto g = [&](double th) { return f(xOnBoundary(th)); };
        return integrate(g, 0.0, 2.0 * kPi, tol_.quad) / (2.0 * kPi);
    }
    double acc = 0.0;
    for (const auto& nd : snodes_) acc += nd.weight * f(nd.x) * nd.K0;
    return 2.0 * acc / (2.0 * kPi);  // both half circles by conjugation symmetry
}

CoveringMap CoveringMap::calibrate(const GapSet& set, CalibrationOptions opt) {
    CoveringMap map;
    map.set_ = set;
    map.tol_ = opt.numTol;
    map.pot_ = std::make_shared<Potential>(set, opt.numTol);
    int l = set.ell();
    map.trivial_ = (l == 0);
    if (map.trivial_) {
        map.xInfinity_ = 0.25 * (set.hullHi() - set.hullLo());
        map.c0_ = Character::identity(0);
        return map;
    }
    if (l > opt.maxEll)
        throw InvalidInput("calibrate: gap count above the configured limit");

    double c = 0.5 * (set.hullLo() + set.hullHi());
    double h = 0.5 * (set.hullHi() - set.hullLo());
    std::vector<double> u(2 * l);
    for (int j = 1; j <= l; ++j) {
        u[2 * (j - 1)] = std::acos(std::min(1.0, std::max(-1.0, (set.gapHi(j) - c) / h)));
        u[2 * (j - 1) + 1] = std::acos(std::min(1.0, std::max(-1.0, (set.gapLo(j) - c) / h)));
    }

    auto cum = map.pot_->bandCumulative();
    const auto& craig = map.pot_->craigZeros();
    std::vector<double> gMax(l);
    for (int j = 1; j <= l; ++j) gMax[j - 1] = map.pot_->greenInGap(j, craig[j - 1]);

    auto residual = [&](const std::vector<double>& uu,
                        FuchsianGroup* outGrp = nullptr,
                        GroupEnumeration* outEn = nullptr) {
        std::vector<Orthocircle> circ;
        for (int j = 1; j <= l; ++j) {
            double aLo = uu[2 * (j - 1)], aHi = uu[2 * (j - 1) + 1];
            if (!(aLo > 1e-6 && aHi < kPi - 1e-6 && aHi - aLo > 1e-6))
                throw GeometryError("calibrate: corner angles out of order");
            circ.push_back(circleFromCornerAngles(aLo, aHi, j));
        }
        // gap j+1 sits at smaller boundary angles than gap j
        for (int j = 0; j + 1 < l; ++j)
            if (circ[j + 1].cornerAngles().second >= circ[j].cornerAngles().first)
                throw GeometryError("calibrate: shadow arcs collide");
        auto grp = FuchsianGroup::fromCircles(circ);
        // enumeration depth: stop once the orbit defect tail is negligible,
        // or at the deepest level fitting the element budget
        GroupEnumeration en;
        for (int K = 6; K <= opt.maxWordLen; K += 2) {
            GroupEnumeration trial;
            try {
                trial = grp.enumerate(K, opt.elementCap);
            } catch (const BudgetExceeded&) {
                if (en.elems.empty()) throw;
                break;
            }
            en = std::move(trial);
            double lvl = 0.0;
            for (std::size_t i = en.levelStart[K]; i < en.levelStart[K + 1]; ++i)
                lvl += 1.0 - std::abs(en.elems[i](cplx(0, 0)));
            if (lvl < 3e-11) break;
        }
        auto ch = characterOf(grp, en, cplx(0.0, 0.0));
        std::vector<double> r(2 * l);
        for (int j = 1; j <= l; ++j) {
            // with gamma_j = z0 + r^2/(z - conj z0), B picks up the cumulative
            // band measure with a negative winding on gamma_j (positive on its
            // inverse)
            r[2 * (j - 1)] =
                wrapAngle(std::arg(ch.values[j - 1]) + 2.0 * kPi * cum[j - 1]);
            const auto& cc = circ[j - 1];
            double psiB = std::arg(std::polar(1.0, cc.cornerAngles().second) - cc.center);
            double psiA = std::arg(std::polar(1.0, cc.cornerAngles().first) - cc.center);
            double psiN = std::arg(-cc.center);
            double dA = wrapAngle(psiN - psiB), dB2 = wrapAngle(psiA - psiN);
            auto absB = [&](double s) {
                double psi = (s < 0.5) ? psiB + dA * 2.0 * s : psiN + dB2 * (2.0 * s - 1.0);
                return std::abs(
                    groupB(en, cc.center + std::polar(cc.radius, psi), cplx(0, 0)).value);
            };
            double sMin = goldenMin(absB, 0.02, 0.98, 60);
            r[2 * (j - 1) + 1] = std::log(absB(sMin)) + gMax[j - 1];
        }
        if (outGrp) *outGrp = grp;
        if (outEn) *outEn = std::move(en);
        return r;
    };

    auto norm2 = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };

    std::vector<double> r = residual(u);
    double rn = norm2(r);
    int n = 2 * l;
    for (int iter = 0; iter < 60 && rn > opt.tol; ++iter) {
        std::vector<std::vector<double>> J(n, std::vector<double>(n));
        for (int m = 0; m < n; ++m) {
            auto up = u;
            double step = 1e-7;
            up[m] += step;
            std::vector<double> rp;
            try {
                rp = residual(up);
            } catch (const GeometryError&) {
                up[m] -= 2 * step;
                rp = residual(up);
                step = -step;
            }
            for (int kk = 0; kk < n; ++kk) J[kk][m] = (rp[kk] - r[kk]) / step;
        }
        std::vector<double> d(r);
        for (auto& v : d) v = -v;
        {
            auto A = J;
            for (int cc2 = 0; cc2 < n; ++cc2) {
                int piv = cc2;
                for (int rr = cc2 + 1; rr < n; ++rr)
                    if (std::fabs(A[rr][cc2]) > std::fabs(A[piv][cc2])) piv = rr;
                std::swap(A[cc2], A[piv]);
                std::swap(d[cc2], d[piv]);
                if (std::fabs(A[cc2][cc2]) < 1e-300)
                    throw NoConvergence("calibrate: singular Jacobian");
                for (int rr = cc2 + 1; rr < n; ++rr) {
                    double f = A[rr][cc2] / A[cc2][cc2];
                    for (int kk = cc2; kk < n; ++kk) A[rr][kk] -= f * A[cc2][kk];
                    d[rr] -= f * d[cc2];
                }
            }
            for (int cc2 = n - 1; cc2 >= 0; --cc2) {
                for (int kk = cc2 + 1; kk < n; ++kk) d[cc2] -= A[cc2][kk] * d[kk];
                d[cc2] /= A[cc2][cc2];
            }
        }
        double lambda = 1.0;
        bool ok = false;
        for (int bt = 0; bt < 12; ++bt, lambda *= 0.5) {
            auto ut = u;
            for (int m = 0; m < n; ++m) ut[m] += lambda * d[m];
            try {
                auto rt = residual(ut);
                double rtn = norm2(rt);
                if (rtn < rn * (1.0 - 0.1 * lambda) || rtn < opt.tol) {
                    u = ut;
                    r = rt;
                    rn = rtn;
                    ok = true;
                    break;
                }
            } catch (const GeometryError&) {
            }
        }
        if (!ok) throw NoConvergence("calibrate: line search stalled");
    }
    if (rn > opt.tol * 100.0)
        throw NoConvergence("calibrate: Newton did not reach tolerance");

    FuchsianGroup grp;
    GroupEnumeration en;
    residual(u, &grp, &en);
    map.grp_ = std::move(grp);
    map.en_ = std::move(en);
    map.c0_ = characterOf(map.grp_, map.en_, cplx(0.0, 0.0));
    {
        // truncated enumeration for inner-loop evaluations
        int K = 4;
        for (; K < map.en_.maxLen; ++K) {
            double lvl = 0.0;
            for (std::size_t i = map.en_.levelStart[K]; i < map.en_.levelStart[K + 1]; ++i)
                lvl += 1.0 - std::abs(map.en_.elems[i](cplx(0, 0)));
            if (lvl < 3e-9) break;
        }
        map.enFast_ = map.grp_.enumerate(K, opt.elementCap);
    }

    double bp0 = 1.0;
    for (std::size_t i = 1; i < map.en_.elems.size(); ++i)
        bp0 *= std::abs(map.en_.elems[i](cplx(0.0, 0.0)));
    map.xInfinity_ = map.pot_->capacity() / bp0;

    map.charts_.resize(l);
    for (int j = 1; j <= l; ++j) map.charts_[j - 1].circle = map.grp_.upperCircles()[j - 1];
    map.buildCharts();
    map.buildBoundaryTables();
    map.buildSzegoNodes();
    return map;
}

}  // namespace fingap
