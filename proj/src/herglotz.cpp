#include "fingap/herglotz.hpp"

#include <algorithm>
#include <cmath>

namespace fingap {

namespace {

constexpr double kSnapRel = 1e-10;

double polyEval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

cplx polyEvalC(const std::vector<double>& c, cplx z) {
    cplx v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
    return v;
}

// Canonicalize a Dirichlet entry: snap to endpoints, force sheet +1 there.
DirichletEntry canonical(const GapSet& set, int j, DirichletEntry e) {
    double lo = set.gapLo(j), hi = set.gapHi(j);
    if (e.pos < lo - 1e-9 * (hi - lo) || e.pos > hi + 1e-9 * (hi - lo))
        throw InvalidInput("DirichletEntry: position outside its closed gap");
    double snap = kSnapRel * (hi - lo);
    if (e.pos < lo + snap) {
        e.pos = lo;
        e.sheet = +1;
    } else if (e.pos > hi - snap) {
        e.pos = hi;
        e.sheet = +1;
    }
    if (e.sheet != +1 && e.sheet != -1)
        throw InvalidInput("DirichletEntry: sheet must be +1 or -1");
    return e;
}

std::vector<double> solveDense(std::vector<std::vector<double>> A,
                               std::vector<double> rhs) {
    int n = static_cast<int>(rhs.size());
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        std::swap(rhs[c], rhs[piv]);
        if (std::fabs(A[c][c]) < 1e-13)
            throw DegenerateInterpolation("interpolation nodes nearly coincide");
        for (int r = c + 1; r < n; ++r) {
            double f = A[r][c] / A[c][c];
            for (int cc = c; cc < n; ++cc) A[r][cc] -= f * A[c][cc];
            rhs[r] -= f * rhs[c];
        }
    }
    for (int c = n - 1; c >= 0; --c) {
        for (int cc = c + 1; cc < n; ++cc) rhs[c] -= A[c][cc] * rhs[cc];
        rhs[c] /= A[c][c];
    }
    return rhs;
}

std::vector<double> polyFromRoots(const std::vector<double>& roots, double lead = 1.0) {
    std::vector<double> c{lead};
    for (double r : roots) {
        std::vector<double> nxt(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            nxt[k + 1] += c[k];
            nxt[k] += -r * c[k];
        }
        c = std::move(nxt);
    }
    return c;
}

}  // namespace

HerglotzRep HerglotzRep::build(const GapSet& set, const DirichletData& yIn) {
    int l = set.ell();
    if (static_cast<int>(yIn.size()) != l)
        throw InvalidInput("buildMinimalHerglotz: need one Dirichlet entry per gap");

    HerglotzRep rep;
    rep.set_ = set;
    rep.y_.resize(l);
    for (int j = 1; j <= l; ++j) rep.y_[j - 1] = canonical(set, j, yIn[j - 1]);

    auto d = set.sqrtSeriesAtInfinity(l + 4);

    // Top two coefficients of p are forced by p + sqrt(R) = O(z^{l-1});
    // the remaining l come from interpolating p(pos_j) = sigma_j sqrt(R)_phys.
    std::vector<double> q;
    if (l > 0) {
        std::vector<std::vector<double>> V(l, std::vector<double>(l));
        std::vector<double> rhs(l);
        for (int j = 0; j < l; ++j) {
            double x = rep.y_[j].pos;
            double target = 0.0;
            if (x != set.gapLo(j + 1) && x != set.gapHi(j + 1))
                target = rep.y_[j].sheet * set.gapSign(j + 1) *
                         std::sqrt(std::fabs(set.R(x)));
            double xl = std::pow(x, l);
            rhs[j] = target + xl * x + d[1] * xl;
            double pw = 1.0;
            for (int k = 0; k < l; ++k) {
                V[j][k] = pw;
                pw *= x;
            }
        }
        q = solveDense(std::move(V), std::move(rhs));
    }

    rep.p_.assign(l + 2, 0.0);
    rep.p_[l + 1] = -1.0;
    rep.p_[l] = -d[1];
    for (int k = 0; k < l; ++k) rep.p_[k] = q[k];

    // kappa_i = [z^{l-1-i}](p + sqrt R); m ~ (kappa_0/c)/z forces c = -kappa_0.
    auto kap = [&](int i) {
        double pc = (l - 1 - i >= 0) ? rep.p_[l - 1 - i] : 0.0;
        return pc + d[2 + i];
    };
    double k0 = kap(0);
    if (std::fabs(k0) < 1e-14)
        throw NoConvergence("buildMinimalHerglotz: degenerate leading coefficient");
    rep.c_ = -k0;
    rep.n1_ = kap(1) / k0;
    rep.n2_ = kap(2) / k0;

    std::vector<double> roots(l);
    for (int j = 0; j < l; ++j) roots[j] = rep.y_[j].pos;
    rep.a_ = polyFromRoots(roots, rep.c_);
    return rep;
}

cplx HerglotzRep::eval(cplx z, int sheet) const {
    cplx az = polyEvalC(a_, z);
    cplx num = polyEvalC(p_, z) + static_cast<double>(sheet) * set_.sqrtR(z);
    if (std::abs(az) < 1e-13 * (1.0 + std::abs(num)))
        throw PoleHit("evalM: z within the configured radius of a pole");
    return num / az;
}

double HerglotzRep::evalP(double x) const { return polyEval(p_, x); }
double HerglotzRep::evalA(double x) const { return polyEval(a_, x); }

double HerglotzRep::weight(double x) const {
    int band = set_.bandOf(x);
    if (band == 0 || !set_.strictlyInside(x))
        throw OutOfDomain("weight: x not inside a band");
    double im = set_.gapSign(band) * std::sqrt(std::fabs(set_.R(x)));
    return im / (polyEval(a_, x) * kPi);
}

std::vector<std::pair<double, double>> HerglotzRep::pointMasses() const {
    std::vector<std::pair<double, double>> out;
    for (int j = 0; j < set_.ell(); ++j) {
        const auto& e = y_[j];
        if (e.sheet != +1) continue;
        if (e.pos == set_.gapLo(j + 1) || e.pos == set_.gapHi(j + 1)) continue;
        double srPhys = set_.gapSign(j + 1) * std::sqrt(std::fabs(set_.R(e.pos)));
        double ap = 0.0;
        for (std::size_t k = 1; k < a_.size(); ++k)
            ap += static_cast<double>(k) * a_[k] * std::pow(e.pos, static_cast<double>(k - 1));
        out.emplace_back(e.pos, -2.0 * srPhys / ap);
    }
    return out;
}

SpectralMeasure spectralMeasure(const HerglotzRep& rep) {
    return SpectralMeasure{rep, rep.pointMasses()};
}

StripResult HerglotzRep::strip() const {
    int l = set_.ell();
    StripResult out;
    double e1 = 0.0, e2 = 0.0;
    for (int i = 0; i < l; ++i) {
        e1 += y_[i].pos;
        for (int j = i + 1; j < l; ++j) e2 += y_[i].pos * y_[j].pos;
    }
    double al1 = -e1, al2 = e2;
    out.b1 = n1_ - al1;
    double a1sq = (n2_ - n1_ * al1 + al1 * al1 - al2) - out.b1 * out.b1;
    if (!(a1sq > 0.0)) throw NoConvergence("strip: nonpositive a1^2");
    out.a1 = std::sqrt(a1sq);

    if (l == 0) return out;

    // p^2 - R: top two coefficients cancel exactly; remaining degree is 2l.
    std::vector<double> p2(2 * l + 3, 0.0);
    for (std::size_t i = 0; i < p_.size(); ++i)
        for (std::size_t j = 0; j < p_.size(); ++j) p2[i + j] += p_[i] * p_[j];
    std::vector<double> Rc{1.0};
    for (double e : set_.endpoints()) {
        std::vector<double> nxt(Rc.size() + 1, 0.0);
        for (std::size_t k = 0; k < Rc.size(); ++k) {
            nxt[k + 1] += Rc[k];
            nxt[k] += -e * Rc[k];
        }
        Rc = std::move(nxt);
    }
    std::vector<double> diff(2 * l + 1, 0.0);
    for (int k = 0; k <= 2 * l; ++k) diff[k] = p2[k] - Rc[k];

    // divide out the known pole projections
    std::vector<double> quo = diff;
    for (int j = 0; j < l; ++j) {
        double r = y_[j].pos;
        std::vector<double> nq(quo.size() - 1, 0.0);
        double carry = 0.0;
        for (int k = static_cast<int>(quo.size()) - 1; k >= 1; --k) {
            carry = quo[k] + carry * r;
            nq[k - 1] = carry;
        }
        quo = std::move(nq);
    }

    out.next.resize(l);
    for (int j = 1; j <= l; ++j) {
        double lo = set_.gapLo(j), hi = set_.gapHi(j);
        double flo = polyEval(quo, lo), fhi = polyEval(quo, hi);
        double mid = polyEval(quo, set_.gapMid(j));
        double scale = std::max({std::fabs(flo), std::fabs(fhi), std::fabs(mid), 1e-300});
        double r;
        if (std::fabs(flo) < 1e-12 * scale) {
            r = lo;
        } else if (std::fabs(fhi) < 1e-12 * scale) {
            r = hi;
        } else if (flo * fhi > 0.0) {
            throw RootSeparationFailure("strip: could not isolate a zero in a gap");
        } else {
            double a = lo, b = hi;
            for (int it = 0; it < 200 && (b - a) > 1e-17 * (hi - lo); ++it) {
                double m = 0.5 * (a + b);
                if (polyEval(quo, m) * flo > 0) a = m; else b = m;
            }
            r = 0.5 * (a + b);
        }
        DirichletEntry e;
        e.pos = r;
        double pr = polyEval(p_, r);
        double sgn = (pr < 0 ? -1.0 : 1.0) * set_.gapSign(j);
        e.sheet = (sgn < 0) ? +1 : -1;  // sigma' = -sign(p(r)) * branch sign
        out.next[j - 1] = canonical(set_, j, e);
    }
    return out;
}

JacobiCoeffs orbitJacobi(const GapSet& set, const DirichletData& y, int N) {
    if (N < 1) throw InvalidInput("orbitJacobi: N >= 1 required");
    JacobiCoeffs out;
    out.offset = 1;
    out.a.reserve(N);
    out.b.reserve(N);
    DirichletData cur = y;
    for (int n = 0; n < N; ++n) {
        auto st = HerglotzRep::build(set, cur).strip();
        out.a.push_back(st.a1);
        out.b.push_back(st.b1);
        cur = st.next;
    }
    return out;
}

DirichletEntry gapPointFromAngle(const GapSet& set, int j, double psi) {
    psi = wrapAngle(psi);
    double mid = set.gapMid(j), h = 0.5 * (set.gapHi(j) - set.gapLo(j));
    DirichletEntry e;
    e.pos = mid + h * std::cos(psi);
    e.sheet = (psi >= 0.0) ? +1 : -1;
    return e;
}

double angleFromGapPoint(const GapSet& set, int j, const DirichletEntry& e) {
    double mid = set.gapMid(j), h = 0.5 * (set.gapHi(j) - set.gapLo(j));
    double c = std::min(1.0, std::max(-1.0, (e.pos - mid) / h));
    double psi = std::acos(c);
    return (e.sheet >= 0) ? psi : -psi;
}

DirichletData unstrip(const GapSet& set, const DirichletData& y) {
    int l = set.ell();
    if (l == 0) return {};
    std::vector<double> target(l);
    for (int j = 0; j < l; ++j) target[j] = angleFromGapPoint(set, j + 1, y[j]);

    auto forward = [&](const std::vector<double>& psi) {
        DirichletData d(l);
        for (int j = 0; j < l; ++j) d[j] = gapPointFromAngle(set, j + 1, psi[j]);
        auto st = HerglotzRep::build(set, d).strip();
        std::vector<double> out(l);
        for (int j = 0; j < l; ++j) out[j] = angleFromGapPoint(set, j + 1, st.next[j]);
        return out;
    };

    auto tryNewton = [&](std::vector<double> psi) -> std::pair<bool, std::vector<double>> {
        for (int iter = 0; iter < 80; ++iter) {
            auto f = forward(psi);
            std::vector<double> r(l);
            double rn = 0.0;
            for (int j = 0; j < l; ++j) {
                r[j] = wrapAngle(f[j] - target[j]);
                rn = std::max(rn, std::fabs(r[j]));
            }
            if (rn < 1e-12) return {true, psi};
            std::vector<std::vector<double>> J(l, std::vector<double>(l));
            std::vector<double> rhs(l);
            for (int m = 0; m < l; ++m) {
                auto pp = psi;
                double h = 1e-6;
                pp[m] += h;
                auto fp = forward(pp);
                for (int j = 0; j < l; ++j) J[j][m] = wrapAngle(fp[j] - f[j]) / h;
            }
            for (int j = 0; j < l; ++j) rhs[j] = -r[j];
            std::vector<double> d;
            try {
                d = solveDense(J, rhs);
            } catch (const NumericsError&) {
                return {false, psi};
            }
            double dn = 0.0;
            for (double v : d) dn = std::max(dn, std::fabs(v));
            if (dn > 0.8)
                for (auto& v : d) v *= 0.8 / dn;
            for (int j = 0; j < l; ++j) psi[j] = wrapAngle(psi[j] + d[j]);
        }
        return {false, psi};
    };

    auto res = tryNewton(target);
    for (int attempt = 0; attempt < 16 * l && !res.first; ++attempt) {
        std::vector<double> seed = target;
        for (int j = 0; j < l; ++j)
            seed[j] = wrapAngle(seed[j] + ((attempt >> j) % 4) * kPi / 2.0 + 0.1);
        res = tryNewton(seed);
    }
    if (!res.first) throw NoConvergence("unstrip: torus Newton failed");
    DirichletData out(l);
    for (int j = 0; j < l; ++j) out[j] = gapPointFromAngle(set, j + 1, res.second[j]);
    return out;
}

JacobiCoeffs extendLeft(const GapSet& set, const DirichletData& y, int K) {
    if (K < 1) throw InvalidInput("extendLeft: K >= 1 required");
    JacobiCoeffs out;
    out.offset = 1 - K;
    std::vector<double> aRev, bRev;
    DirichletData cur = y;
    for (int k = 0; k < K; ++k) {
        cur = unstrip(set, cur);
        auto st = HerglotzRep::build(set, cur).strip();
        aRev.push_back(st.a1);  // a_0, a_{-1}, ...
        bRev.push_back(st.b1);
    }
    out.a.assign(aRev.rbegin(), aRev.rend());
    out.b.assign(bRev.rbegin(), bRev.rend());
    return out;
}

cplx continuedFractionM(const JacobiCoeffs& coeffs, cplx z, int depth) {
    cplx m = 0.0;
    int n = std::min<int>(depth, static_cast<int>(coeffs.a.size()));
    for (int k = n; k >= 1; --k) {
        double a = coeffs.aAt(k), b = coeffs.bAt(k);
        m = 1.0 / (-z + b - a * a * m);
    }
    return m;
}

}  // namespace fingap
