#include "fingap/jost.hpp"

#include <algorithm>
#include <cmath>

#include "fingap/herglotz.hpp"

namespace fingap {

DirichletData basePoint(const GapSet& set) {
    DirichletData y(set.ell());
    for (int j = 1; j <= set.ell(); ++j) y[j - 1] = {set.gapLo(j), +1};
    return y;
}

namespace {

// in-disk Blaschke seeds: one per gap mass (physical-sheet interior pole)
std::vector<cplx> massSeeds(const CoveringMap& map, const DirichletData& y) {
    std::vector<cplx> out;
    const GapSet& e = map.set();
    for (int j = 1; j <= e.ell(); ++j) {
        const auto& d = y[j - 1];
        if (d.sheet != +1) continue;
        double snap = 1e-10 * (e.gapHi(j) - e.gapLo(j));
        if (d.pos < e.gapLo(j) + snap || d.pos > e.gapHi(j) - snap) continue;
        out.push_back(map.gapToCirclePoint(j, d.pos, +1));
    }
    return out;
}

}  // namespace

JostRatio::JostRatio(const CoveringMap& map, const DirichletData& y,
                     const DirichletData& yRef)
    : map_(&map) {
    const GapSet& e = map.set();
    xiNum_ = massSeeds(map, y);
    xiDen_ = massSeeds(map, yRef);

    auto repY = HerglotzRep::build(e, y);
    auto repR = HerglotzRep::build(e, yRef);
    // stable log|a(x)| at a node: factors whose roots sit at the node's own
    // band edges are evaluated from the cancellation-free edge distances
    auto logAbsA = [&e](const HerglotzRep& rep, const CoveringMap::SzegoNode& nd) {
        double acc = std::log(std::fabs(rep.leadingA()));
        for (const auto& d : rep.dirichlet()) {
            double r = d.pos;
            double term;
            if (nd.band >= 1 && r == e.alpha(nd.band)) {
                term = nd.distLo;
            } else if (nd.band >= 1 && r == e.beta(nd.band)) {
                term = nd.distHi;
            } else {
                term = std::fabs(nd.x - r);
            }
            acc += std::log(std::max(term, 1e-300));
        }
        return acc;
    };
    const auto& nodes = map.szegoNodes();
    h_.resize(nodes.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        // log(w_ref / w_y) = log(a_y / a_ref) on the spectrum
        h_[i] = logAbsA(repY, nodes[i]) - logAbsA(repR, nodes[i]);
        acc += nodes[i].weight * h_[i] * 2.0 * nodes[i].K0;
    }
    double lead = 1.0;
    for (cplx xi : xiNum_)
        lead *= std::abs(groupB(map.fastEnumeration(), cplx(0, 0), xi).value);
    for (cplx xi : xiDen_)
        lead /= std::abs(groupB(map.fastEnumeration(), cplx(0, 0), xi).value);
    atZero_ = lead * std::exp(acc / (4.0 * kPi));
}

cplx JostRatio::eval(cplx z) const {
    const auto& nodes = map_->szegoNodes();
    cplx integ = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (h_[i] == 0.0) continue;
        integ += nodes[i].weight * h_[i] * map_->foldedHerglotzKernel(nodes[i].theta, z);
    }
    cplx out = std::exp(integ / (4.0 * kPi));
    for (cplx xi : xiNum_) out *= groupB(map_->fastEnumeration(), z, xi).value;
    for (cplx xi : xiDen_) out /= groupB(map_->fastEnumeration(), z, xi).value;
    return out;
}

double JostRatio::atZero() const { return atZero_; }

RawJost::RawJost(const CoveringMap& map, const DirichletData& y)
    : ratio_(map, y, basePoint(map.set())) {}

double jostPhi(const CoveringMap& map, const DirichletData& y) {
    return RawJost(map, y).phi();
}

JostFunction::JostFunction(const CoveringMap& map, const DirichletData& y)
    : map_(&map) {
    DirichletData w = map.farDirichlet();
    phiY_ = jostPhi(map, y);
    phiW_ = jostPhi(map, w);
    for (int j = 1; j <= map.ell(); ++j)
        ratios_.emplace_back(map, j, y[j - 1], w[j - 1]);
}

cplx JostFunction::eval(cplx z) const {
    cplx out = phiY_ / phiW_;
    for (const auto& r : ratios_) out *= r.eval(z);
    return out;
}

JostSolutionSeq::JostSolutionSeq(const CoveringMap& map, const DirichletData& y)
    : map_(&map) {
    fwd_.push_back(y);
}

void JostSolutionSeq::ensure(int n) const {
    const GapSet& e = map_->set();
    if (n >= 0) {
        while (static_cast<int>(fwd_.size()) <= n + 1) {
            auto st = HerglotzRep::build(e, fwd_.back()).strip();
            aFwd_.push_back(st.a1);
            bFwd_.push_back(st.b1);
            fwd_.push_back(st.next);
        }
    } else {
        while (static_cast<int>(bwd_.size()) < -n) {
            const DirichletData& cur = bwd_.empty() ? fwd_[0] : bwd_.back();
            auto prev = unstrip(e, cur);
            auto st = HerglotzRep::build(e, prev).strip();
            bwd_.push_back(prev);
            aBwd_.push_back(st.a1);
            bBwd_.push_back(st.b1);
        }
    }
}

const DirichletData& JostSolutionSeq::yAt(int n) const {
    ensure(n);
    return (n >= 0) ? fwd_[n] : bwd_[-n - 1];
}

double JostSolutionSeq::a(int n) const {
    // a_n = a_1(U^{n-1} y)
    if (n >= 1) {
        ensure(n);
        return aFwd_[n - 1];
    }
    ensure(n - 1);
    return aBwd_[-n];
}

double JostSolutionSeq::b(int n) const {
    if (n >= 1) {
        ensure(n);
        return bFwd_[n - 1];
    }
    ensure(n - 1);
    return bBwd_[-n];
}

JacobiCoeffs JostSolutionSeq::window(int nLo, int nHi) const {
    JacobiCoeffs c;
    c.offset = nLo;
    for (int n = nLo; n <= nHi; ++n) {
        c.a.push_back(a(n));
        c.b.push_back(b(n));
    }
    return c;
}

cplx JostSolutionSeq::u(int n, cplx z) const {
    ensure(n);
    auto it = uCache_.find(n);
    if (it == uCache_.end())
        it = uCache_.emplace(n, std::make_shared<JostFunction>(*map_, yAt(n))).first;
    cplx base = it->second->eval(z);
    return base * std::pow(map_->B(z), n) / a(n);
}

void orthogonalPolys(const JacobiCoeffs& c, cplx x, int n, std::vector<cplx>& p,
                     std::vector<cplx>& q) {
    p.assign(n + 1, 0.0);
    q.assign(n + 1, 0.0);
    p[0] = 1.0;
    if (n >= 1) {
        p[1] = (x - c.bAt(1)) / c.aAt(1);
        q[1] = 1.0 / c.aAt(1);
    }
    for (int k = 1; k < n; ++k) {
        p[k + 1] = ((x - c.bAt(k + 1)) * p[k] - c.aAt(k) * p[k - 1]) / c.aAt(k + 1);
        q[k + 1] = ((x - c.bAt(k + 1)) * q[k] - c.aAt(k) * q[k - 1]) / c.aAt(k + 1);
    }
}

Mat2 transferMatrix(const JacobiCoeffs& c, cplx x, int n) {
    std::vector<cplx> p, q;
    orthogonalPolys(c, x, n, p, q);
    double an = c.aAt(n);
    return {p[n], -q[n], an * p[n - 1], -an * q[n - 1]};
}

}  // namespace fingap
