#include "fingap/potential.hpp"

#include <cmath>

#include "fingap/quadrature.hpp"

namespace fingap {

namespace {

double prodOverZeros(const std::vector<double>& zeros, double t) {
    double p = 1.0;
    for (double x : zeros) p *= (t - x);
    return p;
}

// sqrt(|R|) with the two endpoints of band j divided out.
double sqrtRestOfBand(const GapSet& set, int j, double t) {
    double s = 1.0;
    for (int k = 1; k <= set.numBands(); ++k) {
        if (k == j) continue;
        s *= std::fabs(t - set.alpha(k)) * std::fabs(t - set.beta(k));
    }
    return std::sqrt(s);
}

// sqrt of |R| with one endpoint factor divided out; stable at t == edge.
double sqrtAbsRWithout(const GapSet& set, double edge, double t) {
    double s = 1.0;
    for (double e : set.endpoints())
        if (e != edge) s *= std::fabs(t - e);
    return std::sqrt(s);
}

}  // namespace

std::vector<double> solveCraigZeros(const GapSet& set, const Tolerances& tol) {
    int l = set.ell();
    if (l == 0) throw InvalidInput("solveCraigZeros: set has no gaps");

    // F_k(x) = int over gap k of prod_j(t-x_j)/sqrt|R(t)| dt, via the cosine
    // substitution that removes both endpoint singularities.
    auto F = [&](const std::vector<double>& xs, int k) {
        double a = set.gapLo(k), b = set.gapHi(k);
        auto integrand = [&](double t) {
            // |R| with the two gap endpoints divided out
            double s = 1.0;
            for (double e : set.endpoints())
                if (e != a && e != b) s *= std::fabs(t - e);
            return prodOverZeros(xs, t) / std::sqrt(s);
        };
        return integrateChebWeighted(integrand, a, b, tol.quad);
    };

    std::vector<double> xs(l);
    for (int k = 1; k <= l; ++k) xs[k - 1] = set.gapMid(k);

    for (int iter = 0; iter < 60; ++iter) {
        std::vector<double> r(l);
        double rn = 0.0;
        for (int k = 1; k <= l; ++k) {
            r[k - 1] = F(xs, k);
            rn = std::max(rn, std::fabs(r[k - 1]));
        }
        if (rn < tol.root) return xs;

        // Finite-difference Jacobian.
        std::vector<std::vector<double>> J(l, std::vector<double>(l));
        for (int m = 0; m < l; ++m) {
            double h = 1e-7 * (set.gapHi(m + 1) - set.gapLo(m + 1));
            auto xp = xs;
            xp[m] += h;
            for (int k = 1; k <= l; ++k) J[k - 1][m] = (F(xp, k) - r[k - 1]) / h;
        }
        // Solve J d = -r by Gaussian elimination with partial pivoting.
        std::vector<double> d(r);
        for (auto& v : d) v = -v;
        for (int c = 0; c < l; ++c) {
            int piv = c;
            for (int rr = c + 1; rr < l; ++rr)
                if (std::fabs(J[rr][c]) > std::fabs(J[piv][c])) piv = rr;
            std::swap(J[c], J[piv]);
            std::swap(d[c], d[piv]);
            if (std::fabs(J[c][c]) < 1e-300)
                throw NoConvergence("solveCraigZeros: singular Jacobian");
            for (int rr = c + 1; rr < l; ++rr) {
                double f = J[rr][c] / J[c][c];
                for (int cc = c; cc < l; ++cc) J[rr][cc] -= f * J[c][cc];
                d[rr] -= f * d[c];
            }
        }
        for (int c = l - 1; c >= 0; --c) {
            for (int cc = c + 1; cc < l; ++cc) d[c] -= J[c][cc] * d[cc];
            d[c] /= J[c][c];
        }
        for (int m = 0; m < l; ++m) {
            double lo = set.gapLo(m + 1), hi = set.gapHi(m + 1);
            double nx = xs[m] + d[m];
            // keep iterates strictly inside their gaps
            double margin = 1e-12 * (hi - lo);
            nx = std::min(std::max(nx, lo + margin), hi - margin);
            xs[m] = nx;
        }
    }
    throw NoConvergence("solveCraigZeros: Newton did not converge");
}

Potential::Potential(GapSet set, Tolerances tol) : set_(std::move(set)), tol_(tol) {
    if (set_.ell() > 0) craig_ = solveCraigZeros(set_, tol_);

    int nb = set_.numBands();
    harm_.resize(nb);
    for (int j = 1; j <= nb; ++j) harm_[j - 1] = partialBandMeasure(j, kPi);

    cumFromRight_.assign(nb, 0.0);
    double acc = 0.0;
    for (int j = nb; j >= 1; --j) {
        acc += harm_[j - 1];
        cumFromRight_[j - 1] = acc;  // N(alpha_j)
    }

    // per-gap Green tables: the integrand of greenInGap is analytic in the
    // cosine angle, so a uniform Hermite table reaches ~1e-10
    gapTables_.resize(set_.ell());
    for (int j = 1; j <= set_.ell(); ++j) {
        auto& tb = gapTables_[j - 1];
        const int N = 256;
        tb.G.resize(N + 1);
        tb.dG.resize(N + 1);
        double lo = set_.gapLo(j), hi = set_.gapHi(j);
        double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        auto F = [&](double phi) {
            double t = m + h * std::cos(phi);
            double rest = 1.0;
            for (double e2 : set_.endpoints())
                if (e2 != lo && e2 != hi) rest *= std::fabs(t - e2);
            return -prodOverZeros(craig_, t) / (set_.gapSign(j) * std::sqrt(rest));
        };
        tb.G[0] = 0.0;
        tb.dG[0] = F(0.0);
        for (int k = 1; k <= N; ++k) {
            double a = kPi * (k - 1) / N, b = kPi * k / N;
            tb.G[k] = tb.G[k - 1] + integrate(F, a, b, 1e-13);
            tb.dG[k] = F(kPi * k / N);
        }
    }

    // log ca(e) from G(z) = log|z| - log ca + O(1/z) with Richardson in 1/z.
    double scale = std::max(std::fabs(set_.hullLo()), std::fabs(set_.hullHi()));
    double z0 = 1e4 * std::max(scale, 1.0);
    auto e = [&](double z) { return std::log(z) - greenFunction(cplx(z, 0.0)).G; };
    double e1 = e(z0), e2 = e(2 * z0), e3 = e(4 * z0);
    double a1 = 2 * e2 - e1, a2 = 2 * e3 - e2;
    double lc = (4 * a2 - a1) / 3.0;
    if (std::fabs(a2 - a1) > 1e-6)
        throw NoConvergence("capacity: extrapolation did not settle");
    logCap_ = lc;
}

cplx Potential::Me(cplx z) const {
    cplx num = 1.0;
    for (double x : craig_) num *= (z - x);
    return -num / set_.sqrtR(z);
}

cplx Potential::MePrime(cplx z) const {
    // M'/M = sum 1/(z-x_j) - R'/(2R)
    cplx logd = 0.0;
    for (double x : craig_) logd += 1.0 / (z - x);
    cplx rp = 0.0;
    for (double e : set_.endpoints()) rp += 1.0 / (z - e);
    logd -= 0.5 * rp;
    return Me(z) * logd;
}

double Potential::distToSpectrum(cplx z) const {
    double d = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= set_.numBands(); ++j) {
        double x = std::min(std::max(z.real(), set_.alpha(j)), set_.beta(j));
        d = std::min(d, std::abs(z - cplx(x, 0.0)));
    }
    return d;
}

double Potential::equilibriumDensity(double x) const {
    if (!set_.strictlyInside(x))
        throw OutOfDomain("equilibriumDensity: x not inside a band");
    return std::fabs(prodOverZeros(craig_, x)) / (kPi * std::sqrt(std::fabs(set_.R(x))));
}

double Potential::partialBandMeasure(int j, double phiHi) const {
    double a = set_.alpha(j), b = set_.beta(j);
    double m = 0.5 * (a + b), h = 0.5 * (b - a);
    // t = m + h cos(phi); the sqrt singularities cancel against h sin(phi).
    auto F = [&](double phi) {
        double t = m + h * std::cos(phi);
        return std::fabs(prodOverZeros(craig_, t)) / (kPi * sqrtRestOfBand(set_, j, t));
    };
    return integrate(F, 0.0, phiHi, tol_.quad * 0.1);
}

double Potential::bandAngleOf(double x, int j) const {
    double a = set_.alpha(j), b = set_.beta(j);
    double c = (x - 0.5 * (a + b)) / (0.5 * (b - a));
    c = std::min(1.0, std::max(-1.0, c));
    return std::acos(c);
}

std::vector<double> Potential::bandCumulative() const {
    // rho([alpha_1, beta_j]) = 1 - N(beta_j) = sum_{k<=j} harm_k
    std::vector<double> out(set_.ell());
    double acc = 0.0;
    for (int j = 1; j <= set_.ell(); ++j) {
        acc += harm_[j - 1];
        out[j - 1] = acc;
    }
    return out;
}

double Potential::cumulativeFromRight(double x) const {
    int j = set_.bandOf(x);
    if (j == 0) throw OutOfDomain("cumulativeFromRight: x not in e");
    // N(x) = N(beta_j) + measure of [x, beta_j]; phi runs from 0 at beta_j.
    double nAtBeta = (j == set_.numBands()) ? 0.0 : cumFromRight_[j];  // N(alpha_{j+1}) == N(beta_j)
    return nAtBeta + partialBandMeasure(j, bandAngleOf(x, j));
}

double Potential::inverseCumulative(double u) const {
    return inverseCumulativeDetailed(u).x;
}

Potential::BandPoint Potential::inverseCumulativeDetailed(double u) const {
    if (u < -1e-12 || u > 1 + 1e-12) throw OutOfDomain("inverseCumulative: u outside [0,1]");
    u = std::min(1.0, std::max(0.0, u));
    int nb = set_.numBands();
    // locate band: N(alpha_j) >= u >= N(beta_j)
    int j = nb;
    for (int k = 1; k <= nb; ++k) {
        double nHi = cumFromRight_[k - 1];
        double nLo = (k == nb) ? 0.0 : cumFromRight_[k];
        if (u <= nHi + 1e-15 && u >= nLo - 1e-15) {
            j = k;
            break;
        }
    }
    double nLo = (j == nb) ? 0.0 : cumFromRight_[j];
    double target = u - nLo;  // partial measure from beta_j leftwards, in [0, harm_j]
    double a = set_.alpha(j), b = set_.beta(j);
    double m = 0.5 * (a + b), h = 0.5 * (b - a);
    // solve from the nearer edge so the bracketing integrals stay small and
    // relatively accurate; x near an edge loses half its digits otherwise
    auto F = [&](double phi) {
        double t = m + h * std::cos(phi);
        double p = 1.0;
        for (double xj : craig_) p *= (t - xj);
        return std::fabs(p) / (kPi * sqrtRestOfBand(set_, j, t));
    };
    double lo = 0.0, hi = kPi;
    if (target < 0.5 * harm_[j - 1]) {
        for (int it = 0; it < 70; ++it) {
            double mid = 0.5 * (lo + hi);
            if (integrate(F, 0.0, mid, 1e-13) < target) lo = mid; else hi = mid;
        }
    } else {
        double tail = harm_[j - 1] - target;
        for (int it = 0; it < 70; ++it) {
            double mid = 0.5 * (lo + hi);
            if (integrate(F, mid, kPi, 1e-13) > tail) lo = mid; else hi = mid;
        }
    }
    double phi = 0.5 * (lo + hi);
    BandPoint out;
    out.band = j;
    out.x = m + h * std::cos(phi);
    double sh = std::sin(0.5 * phi), ch = std::cos(0.5 * phi);
    out.distHi = 2.0 * h * sh * sh;  // beta_j - x
    out.distLo = 2.0 * h * ch * ch;  // x - alpha_j
    return out;
}

double Potential::greenInGap(int j, double x) const {
    // G' = -M on the real axis off e; anchored at G(alpha_{j+1}) = 0.  In the
    // angle variable t = m + h cos(phi) both edge factors of sqrt|R| cancel and
    // the integrand is smooth on the whole closed gap.
    double lo = set_.gapLo(j), hi = set_.gapHi(j);
    if (!(x >= lo && x <= hi)) throw OutOfDomain("greenInGap: x not in gap");
    double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double phiX = std::acos(std::min(1.0, std::max(-1.0, (x - m) / h)));
    auto F = [&](double phi) {
        double t = m + h * std::cos(phi);
        double rest = 1.0;
        for (double e : set_.endpoints())
            if (e != lo && e != hi) rest *= std::fabs(t - e);
        return -prodOverZeros(craig_, t) / (set_.gapSign(j) * std::sqrt(rest));
    };
    return integrate(F, 0.0, phiX, tol_.quad);
}

double Potential::greenInGapFast(int j, double x) const {
    double lo = set_.gapLo(j), hi = set_.gapHi(j);
    if (!(x >= lo && x <= hi)) throw OutOfDomain("greenInGapFast: x not in gap");
    const auto& tb = gapTables_[j - 1];
    int N = static_cast<int>(tb.G.size()) - 1;
    double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double phi = std::acos(std::min(1.0, std::max(-1.0, (x - m) / h)));
    double s = phi * N / kPi;
    int k = std::min(N - 1, static_cast<int>(s));
    double t = s - k;
    double dx = kPi / N;
    // cubic Hermite on [k, k+1]
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return h00 * tb.G[k] + h10 * dx * tb.dG[k] + h01 * tb.G[k + 1] +
           h11 * dx * tb.dG[k + 1];
}

cplx Potential::gUpper(double x) const {
    if (x >= set_.hullHi()) {
        double hi = set_.hullHi();
        auto F = [&](double t) {
            return prodOverZeros(craig_, t) / sqrtAbsRWithout(set_, hi, t);
        };
        double g = (x == hi) ? 0.0 : integrateSqrtEndpoint(F, hi, x, true, tol_.quad);
        return cplx(g, 0.0);
    }
    int band = set_.bandOf(x);
    if (band != 0) return cplx(0.0, kPi * cumulativeFromRight(x));
    int gap = set_.gapOf(x);
    if (gap != 0) return cplx(greenInGap(gap, x), kPi * cumFromRight_[gap]);  // N(alpha_{j+1})
    // x < alpha_1
    double lo = set_.hullLo();
    auto F = [&](double t) {
        return -prodOverZeros(craig_, t) / (set_.gapSign(0) * sqrtAbsRWithout(set_, lo, t));
    };
    double g = integrateSqrtEndpoint(F, x, lo, false, tol_.quad);
    return cplx(g, kPi);
}

GreenValue Potential::greenFunction(cplx z) const {
    GreenValue out;
    if (z.imag() == 0.0) {
        double x = z.real();
        if (set_.contains(x)) {
            out.G = 0.0;
            out.gComplex = gUpper(x);
            return out;
        }
        out.gComplex = gUpper(x);
        out.G = out.gComplex.real();
        return out;
    }
    if (z.imag() < 0.0) {
        GreenValue up = greenFunction(std::conj(z));
        out.G = up.G;
        out.gComplex = std::conj(up.gComplex);
        out.pathWaypoints.reserve(up.pathWaypoints.size());
        for (cplx w : up.pathWaypoints) out.pathWaypoints.push_back(std::conj(w));
        return out;
    }

    // Path beta_{l+1} -> beta_{l+1}+iH -> Re z + iH -> z avoids the cut.
    double H = std::max(z.imag(), 0.5 * (set_.hullHi() - set_.hullLo()));
    cplx P0(set_.hullHi(), 0.0), P1(set_.hullHi(), H), P2(z.real(), H), P3 = z;
    auto Mfun = [&](cplx w) { return Me(w); };

    cplx g = 0.0;
    // first leg with sqrt substitution at the band edge: w = beta + i s^2
    {
        double S = std::sqrt(H);
        auto f = [&](double s) -> cplx {
            cplx w = P0 + cplx(0.0, s * s);
            return -Mfun(w) * cplx(0.0, 2.0 * s);
        };
        g += integrateC(f, 0.0, S, tol_.quad);
    }
    auto leg = [&](cplx A, cplx B) -> cplx {
        if (std::abs(B - A) < 1e-300) return 0.0;
        auto f = [&](double t) -> cplx {
            cplx w = A + t * (B - A);
            return -Mfun(w) * (B - A);
        };
        return integrateC(f, 0.0, 1.0, tol_.quad);
    };
    g += leg(P1, P2);
    g += leg(P2, P3);

    out.G = g.real();
    out.gComplex = g;
    out.pathWaypoints = {P0, P1, P2, P3};
    return out;
}

PotentialData Potential::data() const {
    PotentialData d;
    d.craigZeros = craig_;
    d.capacity = capacity();
    d.harmonicMeasures = harm_;
    d.bandCumulative = bandCumulative();
    return d;
}

GreenWalker::GreenWalker(const Potential& pot, cplx x0, cplx g0, double tol)
    : pot_(&pot), x_(x0), g_(g0), tol_(tol) {}

void GreenWalker::stepTo(cplx xNext) {
    cplx d = xNext - x_;
    if (std::abs(d) == 0.0) return;
    cplx from = x_;
    auto f = [&](double t) { return -pot_->Me(from + t * d) * d; };
    g_ += integrateC(f, 0.0, 1.0, tol_);
    x_ = xNext;
}

void GreenWalker::solveFor(cplx target, double tol) {
    for (int it = 0; it < 80; ++it) {
        cplx r = g_ - target;
        // g' = -M can be small near critical points, so also accept once the
        // implied position update is at rounding scale
        if (std::abs(r) < tol &&
        	std::abs(r) < 1e-3 * std::abs(pot_->Me(x_)) * (1.0 + std::abs(x_)))
            return;
        if (std::abs(r) < tol * 1e-2) return;
        cplx M = pot_->Me(x_);
        cplx dx;
        if (std::abs(M) > 1e-7) {
            dx = r / M;  // g' = -M
        } else {
            // second order step near a critical point of g:
            // r - M dx - (M'/2) dx^2 = 0
            cplx Mp = pot_->MePrime(x_);
            cplx s = std::sqrt(M * M + 2.0 * Mp * r);
            cplx d1 = (-M + s) / Mp, d2 = (-M - s) / Mp;
            dx = (std::abs(d1) < std::abs(d2)) ? d1 : d2;
            if (!std::isfinite(std::abs(dx)))
                throw BranchTrackingFailure("green walker: stalled at a critical point");
        }
        double cap = 0.45 * pot_->distToSpectrum(x_) + 1e-14;
        if (std::abs(dx) > cap) dx *= cap / std::abs(dx);
        stepTo(x_ + dx);
    }
    throw BranchTrackingFailure("green walker: Newton did not converge");
}

}  // namespace fingap
