#include "fingap/verify.hpp"

#include <cmath>
#include <random>

#include "fingap/covering.hpp"
#include "fingap/green.hpp"
#include "fingap/herglotz.hpp"
#include "fingap/jost.hpp"
#include "fingap/quadrature.hpp"
#include "fingap/theta.hpp"

namespace fingap {

namespace {

DirichletData randomTorusPoint(const GapSet& e, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    DirichletData y(e.ell());
    for (int j = 1; j <= e.ell(); ++j) y[j - 1] = gapPointFromAngle(e, j, u(rng));
    return y;
}

DirichletData randomCirclePoint(const CoveringMap& m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    DirichletData y(m.ell());
    for (int j = 1; j <= m.ell(); ++j) {
        auto pg = m.circlePointToGap(j, m.circlePoint(j, u(rng)));
        y[j - 1] = {pg.first, pg.second};
    }
    return y;
}

std::vector<cplx> fundamentalSamples(const CoveringMap& m, int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ur(0.05, 0.9), ua(-kPi, kPi);
    std::vector<cplx> out;
    while (static_cast<int>(out.size()) < n) {
        cplx z = std::polar(ur(rng), ua(rng));
        if (m.group().inFundamental(z)) out.push_back(z);
    }
    return out;
}

struct Suite {
    std::vector<CheckResult> results;
    void add(const std::string& name, double resid, double budget) {
        results.push_back({name, resid <= budget, resid, budget});
    }
};

}  // namespace

std::vector<CheckResult> runVerifySuite(const GapSet& set, std::uint64_t seed,
                                        int maxWordLen, int maxEll) {
    Suite S;
    std::mt19937_64 rng(seed);
    int l = set.ell();
    Potential pot(set);

    // --- potential ---
    {
        double s = 0.0;
        for (double h : pot.harmonicMeasures()) s += h;
        S.add("potential.harmonic_sum", std::fabs(s - 1.0), 1e-10);

        double minG = 1e300;
        std::uniform_real_distribution<double> ux(set.hullLo() - 2.0, set.hullHi() + 2.0);
        std::uniform_real_distribution<double> uy(-2.0, 2.0);
        for (int i = 0; i < 40; ++i) {
            cplx z(ux(rng), uy(rng));
            if (std::fabs(z.imag()) < 1e-3 && set.distToSet(z.real()) < 1e-3) continue;
            minG = std::min(minG, pot.green(z));
        }
        S.add("potential.green_positive", std::max(0.0, -minG), 1e-12);

        double scale = std::max(1.0, std::fabs(set.hullHi()) + std::fabs(set.hullLo()));
        double zfar = 1e6 * scale;
        double asym = std::fabs(std::log(zfar) - pot.green(cplx(zfar, 0.0)) -
                                pot.logCapacity());
        S.add("potential.green_asymptotic", asym, 1e-4);

        double edgeResid = 0.0;
        double b = set.hullHi(), a = set.hullLo();
        double r1 = pot.green(cplx(b + 1e-4, 0)) / 1e-2;
        double r2 = pot.green(cplx(b + 1e-6, 0)) / 1e-3;
        edgeResid = std::max(edgeResid, std::fabs(r1 - r2) / std::fabs(r1));
        double l1 = pot.green(cplx(a - 1e-4, 0)) / 1e-2;
        double l2 = pot.green(cplx(a - 1e-6, 0)) / 1e-3;
        edgeResid = std::max(edgeResid, std::fabs(l1 - l2) / std::fabs(l1));
        S.add("potential.edge_sqrt", edgeResid, 2e-2);

        double grad = 0.0;
        for (int j = 1; j <= l; ++j)
            grad = std::max(grad, std::abs(pot.Me(cplx(pot.craigZeros()[j - 1], 0.0))));
        S.add("potential.craig_gradient", grad, 1e-8);

        double selfc = 0.0;
        for (int j = 1; j <= set.numBands(); ++j) {
            double lo = set.alpha(j), hi = set.beta(j), mid = 0.5 * (lo + hi);
            auto FA = [&](double t) {
                return pot.equilibriumDensity(t) * std::sqrt(std::fabs(t - lo));
            };
            auto FB = [&](double t) {
                return pot.equilibriumDensity(t) * std::sqrt(std::fabs(t - hi));
            };
            double v = integrateSqrtEndpoint(FA, lo, mid, true, 1e-11) +
                       integrateSqrtEndpoint(FB, mid, hi, false, 1e-11);
            selfc = std::max(selfc, std::fabs(v - pot.harmonicMeasures()[j - 1]));
        }
        S.add("potential.density_selfconsistency", selfc, 1e-9);
    }

    // --- torus ---
    {
        double herg = 0.0, mass = 0.0;
        std::uniform_real_distribution<double> ux(set.hullLo() - 2.0, set.hullHi() + 2.0);
        std::uniform_real_distribution<double> uy(1e-3, 3.0);
        for (int t = 0; t < 5; ++t) {
            auto y = randomTorusPoint(set, rng);
            auto rep = HerglotzRep::build(set, y);
            for (int i = 0; i < 200; ++i) {
                cplx z(ux(rng), uy(rng));
                herg = std::max(herg, -rep.eval(z).imag());
            }
            double total = 0.0;
            for (int j = 1; j <= set.numBands(); ++j) {
                double lo = set.alpha(j), hi = set.beta(j);
                double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
                auto F = [&](double phi) {
                    double tt = m + h * std::cos(phi);
                    return rep.weight(tt) * h * std::sin(phi);
                };
                total += integrate(F, 1e-9, kPi - 1e-9, 1e-11);
            }
            for (auto& pm : rep.pointMasses()) total += pm.second;
            mass = std::max(mass, std::fabs(total - 1.0));
        }
        S.add("torus.herglotz_positivity", std::max(0.0, herg), 1e-12);
        S.add("torus.measure_mass", mass, 1e-8);

        double wLo = 1e300, wHi = 0.0;
        for (int t = 0; t < 50; ++t) {
            auto rep = HerglotzRep::build(set, randomTorusPoint(set, rng));
            for (int j = 1; j <= set.numBands(); ++j)
                for (double f : {0.04, 0.3, 0.5, 0.7, 0.96}) {
                    double x = set.alpha(j) + f * (set.beta(j) - set.alpha(j));
                    double w = rep.weight(x), sr = std::sqrt(std::fabs(set.R(x)));
                    wLo = std::min(wLo, w / sr);
                    wHi = std::max(wHi, w * sr);
                }
        }
        bool finiteWin = wLo > 1e-9 && wHi < 1e9;
        S.results.push_back({"torus.weight_bounds", finiteWin, wHi / wLo, 1e12});

        double stripRes = 0.0;
        {
            auto y = randomTorusPoint(set, rng);
            auto rep = HerglotzRep::build(set, y);
            auto st = rep.strip();
            auto rep1 = HerglotzRep::build(set, st.next);
            for (int i = 0; i < 50; ++i) {
                cplx z(set.hullLo() + (set.hullHi() - set.hullLo()) * i / 49.0, 1.3);
                cplx m = rep.eval(z), m1 = rep1.eval(z);
                stripRes = std::max(stripRes,
                                    std::abs(m - 1.0 / (-z + st.b1 - st.a1 * st.a1 * m1)));
            }
        }
        S.add("torus.strip_identity", stripRes, 1e-9);

        double recon = 0.0;
        {
            auto y = randomTorusPoint(set, rng);
            auto rep = HerglotzRep::build(set, y);
            auto c = orbitJacobi(set, y, 200);
            double far = 2.0 * (set.hullHi() - set.hullLo());
            for (cplx z : {cplx(set.hullHi() + far, 0.0), cplx(set.gapMid(std::max(1, l)), far)})
                recon = std::max(recon, std::abs(rep.eval(z) - continuedFractionM(c, z, 200)));
        }
        S.add("torus.reconstruction", recon, 1e-8);

        if (l >= 1) {
            auto y = randomTorusPoint(set, rng);
            auto c = orbitJacobi(set, y, 420);
            int W = 20;
            double best = 1e300;
            for (int n = 2; n <= 380; ++n) {
                double d = 0.0;
                for (int k = 1; k <= W; ++k) {
                    d = std::max(d, std::fabs(c.aAt(k + n) - c.aAt(k)));
                    d = std::max(d, std::fabs(c.bAt(k + n) - c.bAt(k)));
                }
                best = std::min(best, d);
            }
            S.add("torus.recurrence", best, 1e-2);
        }
    }

    if (l == 0 || l > maxEll) return S.results;

    // --- calibrated machinery ---
    CalibrationOptions opt;
    opt.maxWordLen = maxWordLen;
    auto map = CoveringMap::calibrate(set, opt);
    const auto& en = map.enumeration();

    {
        // group combinatorics
        std::size_t expect = 1, mism = 0;
        for (int k = 1; k <= std::min(5, en.maxLen); ++k) {
            expect = (k == 1) ? 2 * static_cast<std::size_t>(l)
                              : expect * (2 * l - 1);
            if (en.levelSize(k) != expect) ++mism;
        }
        S.add("fuchsian.word_count", static_cast<double>(mism), 0.0);

        double comp = 0.0;
        std::uniform_int_distribution<std::size_t> pick(0, en.elems.size() - 1);
        for (int t = 0; t < 30; ++t) {
            const auto& mEl = en.elems[pick(rng)];
            MobiusMap acc;
            for (auto it = mEl.word().rbegin(); it != mEl.word().rend(); ++it) {
                const MobiusMap& g =
                    (*it > 0) ? map.group().generator(*it) : map.group().generatorInv(-*it);
                acc = g.compose(acc);
            }
            cplx z(0.21, -0.34);
            comp = std::max(comp, std::abs(acc(z) - mEl(z)));
        }
        S.add("fuchsian.composition", comp, 1e-10);

        double contract = 0.0;
        auto pts = fundamentalSamples(map, 10, rng);
        for (const auto& g : en.elems)
            for (cplx z : pts) contract = std::max(contract, std::abs(g(z)) - 1.0);
        S.add("fuchsian.contraction", std::max(0.0, contract), 0.0);

        double distort = 0.0;
        for (const auto& g : en.elems) {
            double d0 = std::abs(g.derivative(cplx(0, 0)));
            for (cplx z : pts)
                distort = std::max(distort, std::abs(g.derivative(z)) / d0);
        }
        S.results.push_back({"fuchsian.distortion", distort < 1e4, distort, 1e4});

        auto ad = boundaryArcDecay(map.group(), en);
        S.add("fuchsian.arc_decay", std::max(0.0, -ad.D0), 0.0);

        auto ps1 = poincareSeries(en, 1.0, cplx(0, 0));
        auto ps2 = poincareSeries(en, 2.0, cplx(0, 0));
        double ratio1 = ps1.levelSums[en.maxLen] / ps1.levelSums[en.maxLen - 1];
        double ratio2 = ps2.levelSums[en.maxLen] / ps2.levelSums[en.maxLen - 1];
        S.add("fuchsian.poincare_decay", std::max(ratio1, ratio2), 0.95);
    }

    {
        // blaschke identities
        double inv = 0.0;
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        std::size_t modEnd = en.levelStart[std::min(3, en.maxLen) + 1];
        std::uniform_int_distribution<std::size_t> pick(0, modEnd - 1);
        for (int t = 0; t < 30; ++t) {
            cplx z(u(rng), u(rng)), w(u(rng), u(rng));
            const auto& g = en.elems[pick(rng)];
            inv = std::max(inv, std::fabs(std::abs(elementaryB(g(z), g(w))) -
                                          std::abs(elementaryB(z, w))));
        }
        S.add("blaschke.invariance", inv, 1e-8);

        double h = 1e-5, thq = 0.5 * map.szegoNodes()[40].theta + 0.03;
        cplx b1 = map.B(std::polar(1.0, thq)), b2 = map.B(std::polar(1.0, thq + h));
        double dArg = wrapAngle(std::arg(b2 / b1)) / h;
        double sum = 0.0;
        for (const auto& g : en.elems)
            sum += std::abs(g.derivative(std::polar(1.0, thq)));
        S.add("blaschke.derivative_identity", std::fabs(dArg - sum) / sum, 1e-4);

        double push = 0.0;
        for (int p = 0; p <= 4; ++p) {
            auto f = [p](double x) { return std::pow(x, p); };
            double lhs = map.pushforwardIntegral(f);
            double rhs = 0.0;
            for (int j = 1; j <= set.numBands(); ++j) {
                double lo = set.alpha(j), hi = set.beta(j), mid = 0.5 * (lo + hi);
                auto FA = [&](double t) {
                    return f(t) * pot.equilibriumDensity(t) * std::sqrt(std::fabs(t - lo));
                };
                auto FB = [&](double t) {
                    return f(t) * pot.equilibriumDensity(t) * std::sqrt(std::fabs(t - hi));
                };
                rhs += integrateSqrtEndpoint(FA, lo, mid, true, 1e-11) +
                       integrateSqrtEndpoint(FB, mid, hi, false, 1e-11);
            }
            push = std::max(push, std::fabs(lhs - rhs));
        }
        S.add("blaschke.pushforward", push, 1e-6);

        double mono = 0.0;
        for (const auto& g : en.elems) {
            for (double th : {0.2, 1.0, 2.5, -1.4}) {
                double a1 = std::arg(g(std::polar(1.0, th)));
                double a2 = std::arg(g(std::polar(1.0, th + 1e-6)));
                mono = std::min(mono, wrapAngle(a2 - a1));
            }
        }
        S.add("blaschke.monotone_phase", std::max(0.0, -mono), 1e-12);
    }

    {
        // covering identities
        auto pts = fundamentalSamples(map, 100, rng);
        double autoRes = 0.0, conj = 0.0, green = 0.0;
        for (cplx z : pts) {
            cplx x = map.evalX(z);
            for (int j = 1; j <= l; ++j) {
                cplx x2 = map.evalX(map.group().generator(j)(z));
                autoRes = std::max(autoRes, std::abs(x - x2) / (1.0 + std::abs(x)));
            }
            conj = std::max(conj, std::abs(std::conj(map.evalX(std::conj(z))) - x));
            green = std::max(green, std::fabs(std::abs(map.B(z)) -
                                              std::exp(-pot.greenFunction(x).G)));
        }
        S.add("covering.automorphy", autoRes, 1e-6);
        S.add("covering.conjugation", conj, 1e-9);
        S.add("covering.green_identity", green, 1e-6);

        cplx zs(1e-6, 0.0);
        S.add("covering.leading_coeff",
              std::abs(map.B(zs) / zs - pot.capacity() / map.xInfinity()), 1e-4);

        double rt = 0.0;
        std::uniform_real_distribution<double> ux(set.hullLo() - 3.0, set.hullHi() + 3.0);
        std::uniform_real_distribution<double> uy(-3.0, 3.0);
        int done = 0;
        while (done < 30) {
            cplx x(ux(rng), uy(rng));
            if (std::fabs(x.imag()) < 1e-3) continue;
            rt = std::max(rt, std::abs(map.evalX(map.invertX(x)) - x) / (1.0 + std::abs(x)));
            ++done;
        }
        for (int j = 1; j <= l; ++j) {
            for (double f : {0.2, 0.55, 0.87}) {
                double x = set.gapLo(j) + f * (set.gapHi(j) - set.gapLo(j));
                rt = std::max(rt, std::abs(map.evalX(map.invertX(cplx(x, 0.0))) - x));
            }
        }
        S.add("covering.roundtrip", rt, 1e-8);

        double chr = 0.0;
        auto cum = pot.bandCumulative();
        for (int j = 1; j <= l; ++j) {
            cplx got = std::conj(map.characterOfB().values[j - 1]);
            chr = std::max(chr, std::abs(got - std::polar(1.0, 2 * kPi * cum[j - 1])));
        }
        S.add("covering.character", chr, 1e-6);
    }

    {
        // theta and the Abel map
        auto y = randomCirclePoint(map, rng);
        std::vector<ThetaFn> ths;
        for (int j = 1; j <= l; ++j) ths.emplace_back(map, j, y[j - 1].pos, y[j - 1].sheet);

        double autoRes = 0.0, sq = 0.0, uniq = 0.0;
        auto pts = fundamentalSamples(map, 8, rng);
        for (const auto& th : ths) {
            auto chr = th.character();
            for (cplx z : pts) {
                cplx v = th.eval(z);
                sq = std::max(sq, std::abs(v * v - th.squared(z)));
                for (int j = 1; j <= l; ++j) {
                    cplx lhs = th.eval(map.group().generator(j)(z));
                    autoRes = std::max(autoRes, std::abs(lhs - chr.values[j - 1] * v));
                }
            }
            cplx tgt = pts[0];
            cplx direct = th.eval(tgt);
            for (cplx wp : {cplx(0.4, 0.45), cplx(-0.45, 0.4)})
                uniq = std::max(uniq, std::abs(th.eval(tgt, wp) - direct));
        }
        S.add("theta.character_automorphy", autoRes, 1e-6);
        S.add("theta.squared", sq, 1e-10);
        S.add("theta.uniqueness", uniq, 1e-8);

        auto rep = HerglotzRep::build(set, y);
        auto st = rep.strip();
        std::vector<ThetaFn> thU;
        for (int j = 1; j <= l; ++j)
            thU.emplace_back(map, j, st.next[j - 1].pos, st.next[j - 1].sheet);
        double formula = 0.0;
        for (cplx z : pts) {
            cplx lhs = -rep.eval(map.evalX(z));
            cplx rhs = map.B(z) / pot.capacity();
            for (int j = 0; j < l; ++j) rhs *= thU[j].eval(z) / ths[j].eval(z);
            formula = std::max(formula, std::abs(lhs - rhs));
        }
        S.add("theta.formula", formula, 1e-6);

        auto aU = abelMapTorus(map, st.next);
        auto aY = abelMapTorus(map, y);
        S.add("theta.abel_linearization",
              aU.dist(aY.mul(abelInfinity(map).inv())), 1e-6);

        auto rec = abelInverse(map, aY);
        double rtd = 0.0;
        for (int j = 1; j <= l; ++j) {
            cplx zy = map.gapToCirclePoint(j, y[j - 1].pos, y[j - 1].sheet);
            cplx zr = map.gapToCirclePoint(j, rec[j - 1].pos, rec[j - 1].sheet);
            rtd = std::max(rtd, std::abs(zy - zr));
        }
        S.add("theta.abel_roundtrip", rtd, 1e-6);
    }

    {
        // raw Jost / Jost functions and solutions
        auto y = randomCirclePoint(map, rng);
        RawJost ry(map, y);
        std::vector<ThetaFn> ths;
        for (int j = 1; j <= l; ++j) ths.emplace_back(map, j, y[j - 1].pos, y[j - 1].sheet);
        auto pts = fundamentalSamples(map, 8, rng);
        double mn = 1e300, mx = 0.0;
        for (cplx z : pts) {
            cplx q = ry.eval(z);
            for (const auto& th : ths) q /= th.eval(z);
            mn = std::min(mn, std::abs(q));
            mx = std::max(mx, std::abs(q));
        }
        S.add("jost.constancy", (mx - mn) / mx, 1e-5);

        double chr = 0.0;
        {
            cplx z0 = pts[0];
            auto abel = abelMapTorus(map, y);
            for (int j = 1; j <= l; ++j) {
                cplx ratio = ry.eval(map.group().generator(j)(z0)) / ry.eval(z0);
                ratio /= std::abs(ratio);
                chr = std::max(chr, std::abs(ratio - abel.values[j - 1]));
            }
        }
        S.add("jost.character", chr, 1e-6);

        auto st = HerglotzRep::build(set, y).strip();
        double coc = std::fabs(st.a1 / pot.capacity() -
                               jostPhi(map, st.next) / jostPhi(map, y));
        S.add("jost.cocycle", coc, 1e-6);

        double sr = 0.0;
        {
            auto rep = HerglotzRep::build(set, y);
            RawJost rU(map, st.next);
            for (cplx z : pts) {
                cplx lhs = st.a1 * (-rep.eval(map.evalX(z)));
                cplx rhs = map.B(z) * rU.eval(z) / ry.eval(z);
                sr = std::max(sr, std::abs(lhs - rhs));
            }
        }
        S.add("jost.sum_rule", sr, 1e-6);

        double dual = 0.0;
        {
            JostFunction u(map, y);
            JostRatio direct(map, y, map.farDirichlet());
            for (cplx z : pts)
                dual = std::max(dual, std::abs(u.eval(z) - direct.eval(z)));
        }
        S.add("jost.theta_vs_integral", dual, 1e-7);

        JostSolutionSeq seq(map, y);
        double rec = 0.0;
        std::uniform_int_distribution<int> un(-4, 8);
        for (int t = 0; t < 10; ++t) {
            cplx z = pts[t % pts.size()];
            if (std::abs(z) < 0.15) continue;
            int n = un(rng);
            cplx x = map.evalX(z);
            cplx r = seq.a(n) * seq.u(n + 1, z) + (seq.b(n) - x) * seq.u(n, z) +
                     seq.a(n - 1) * seq.u(n - 1, z);
            rec = std::max(rec, std::abs(r) / (1.0 + std::abs(seq.u(n, z))));
        }
        S.add("jost.recurrence", rec, 1e-8);

        // Wronskian identity on band interiors
        double wr = 0.0;
        for (int j = 1; j <= set.numBands(); ++j) {
            double x = set.alpha(j) + 0.43 * (set.beta(j) - set.alpha(j));
            cplx z = map.invertX(cplx(x, 1e-9));
            if (z.imag() < 0) z = std::conj(z);
            z /= std::abs(z);
            cplx up0 = seq.u(0, z), up1 = seq.u(1, z);
            cplx um0 = std::conj(up0), um1 = std::conj(up1);
            cplx lhs = seq.a(0) * (up1 * um0 - up0 * um1);
            auto rep = HerglotzRep::build(set, y);
            cplx u0 = JostFunction(map, y).eval(z);
            cplx rhs = 2.0 * kPi * cplx(0, 1) * std::norm(u0) * rep.weight(x);
            wr = std::max(wr, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
        }
        S.add("jost.wronskian", wr, 1e-6);

        // edge positivity windows
        double eLo = 1e300, eHi = 0.0, eLoA = 1e300, eHiA = 0.0;
        for (int n = 0; n <= 60; ++n) {
            cplx ub = seq.u(n, cplx(1.0, 0.0));
            eLo = std::min(eLo, ub.real());
            eHi = std::max(eHi, ub.real());
            cplx ua = seq.u(n, cplx(-1.0, 0.0));
            double v = ((n % 2) ? -1.0 : 1.0) * ua.real();
            eLoA = std::min(eLoA, v);
            eHiA = std::max(eHiA, v);
        }
        bool win = eLo > 0.0 && eHiA > 0.0 && eLoA > 0.0 && eHi < 1e3;
        S.results.push_back({"jost.edge_positivity", win, eHi / std::max(eLo, 1e-300), 1e6});

        // phase derivative on a band interior
        double ph = 0.0;
        {
            int j = set.numBands();
            double x0 = set.alpha(j) + 0.5 * (set.beta(j) - set.alpha(j));
            double h = 1e-4;
            auto thOf = [&](double x) {
                cplx z = map.invertX(cplx(x, 1e-9));
                if (z.imag() < 0) z = std::conj(z);
                return std::arg(map.B(z / std::abs(z)));
            };
            double d = wrapAngle(thOf(x0 + h) - thOf(x0 - h)) / (2 * h);
            ph = std::fabs(std::fabs(d) - kPi * pot.equilibriumDensity(x0));
        }
        S.add("jost.phase_derivative", ph, 1e-4);
    }

    {
        // Green's functions
        auto y = randomCirclePoint(map, rng);
        GreenEvaluator ge(map, y);
        auto win = ge.solutions().window(-320, 320);
        double match = 0.0;
        auto oracle = [&](double x, int n, int m) {
            int N = 641;
            std::vector<double> d0(N), d1(N - 1), d2(N, 0.0), low(N - 1), r(N, 0.0);
            for (int i = 0; i < N; ++i) d0[i] = win.bAt(i - 320) - x;
            for (int i = 0; i + 1 < N; ++i) d1[i] = win.aAt(i - 320);
            low.assign(d1.begin(), d1.end());
            r[m + 320] = 1.0;
            for (int i = 0; i + 1 < N; ++i) {
                if (std::fabs(low[i]) > std::fabs(d0[i])) {
                    std::swap(d0[i], low[i]);
                    std::swap(d1[i], d0[i + 1]);
                    std::swap(d2[i], d1[i + 1]);
                    std::swap(r[i], r[i + 1]);
                }
                double f = low[i] / d0[i];
                d0[i + 1] -= f * d1[i];
                d1[i + 1] -= f * d2[i];
                r[i + 1] -= f * r[i];
            }
            std::vector<double> sol(N);
            for (int i = N - 1; i >= 0; --i) {
                double acc2 = r[i];
                if (i + 1 < N) acc2 -= d1[i] * sol[i + 1];
                if (i + 2 < N) acc2 -= d2[i] * sol[i + 2];
                sol[i] = acc2 / d0[i];
            }
            return sol[n + 320];
        };
        std::vector<double> testX{set.hullHi() + 1.0, set.hullLo() - 1.3};
        for (int j = 1; j <= l; ++j) testX.push_back(set.gapMid(j) + 0.1 * (set.gapHi(j) - set.gapMid(j)));
        for (double x : testX) {
            auto p = makeOffSpectrumPoint(map, x);
            match = std::max(match, std::abs(ge.wholeLine(p, 0, 2) + oracle(x, 0, 2)));
            match = std::max(match, std::abs(ge.wholeLine(p, -1, 1) + oracle(x, -1, 1)));
        }
        S.add("green.resolvent_match", match, 1e-6);

        double slack = 1e300;
        for (double x : testX) {
            auto p = makeOffSpectrumPoint(map, x);
            double G = pot.green(cplx(x, 0.0));
            double dist = set.distToSet(x);
            for (auto [n, m] : {std::pair{0, 0}, std::pair{0, 3}, std::pair{-2, 4}}) {
                double lhs = std::abs(ge.wholeLine(p, n, m));
                slack = std::min(slack, 3.0 * std::exp(-G * std::abs(n - m)) /
                                                std::sqrt(dist) -
                                            lhs);
            }
        }
        S.results.push_back({"green.decay_slack", slack >= 0.0, -slack, 0.0});

        int mism = 0;
        for (int t = 0; t < 3; ++t) {
            auto yy = randomCirclePoint(map, rng);
            for (double edge : set.endpoints())
                if (detectResonance(map, yy, edge) != detectResonanceByFit(set, yy, edge))
                    ++mism;
        }
        S.add("green.resonance_agreement", static_cast<double>(mism), 0.0);
    }

    return S.results;
}

}  // namespace fingap
