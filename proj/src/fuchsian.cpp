#include "fingap/fuchsian.hpp"

#include <algorithm>
#include <cmath>

namespace fingap {

std::pair<double, double> Orthocircle::cornerAngles() const {
    // corners solve Re(conj(u) center) = 1 on |u| = 1
    double n2 = std::norm(center);
    double base = std::atan2(center.imag(), center.real());
    double delta = std::acos(1.0 / std::sqrt(n2));
    double a1 = wrapAngle(base - delta), a2 = wrapAngle(base + delta);
    if (a1 > a2) std::swap(a1, a2);
    return {a1, a2};
}

Orthocircle circleFromCornerAngles(double a1, double a2, int gapIndex, int half) {
    // solve Re(conj(u) z0) = 1 for u = e^{i a1}, e^{i a2}
    double c1 = std::cos(a1), s1 = std::sin(a1);
    double c2 = std::cos(a2), s2 = std::sin(a2);
    double det = c1 * s2 - s1 * c2;
    if (std::fabs(det) < 1e-14)
        throw GeometryError("circleFromCornerAngles: degenerate corner pair");
    double x = (s2 - s1) / det, y = (c1 - c2) / det;
    Orthocircle c;
    c.center = cplx(x, y);
    double r2 = x * x + y * y - 1.0;
    if (r2 <= 0.0) throw GeometryError("circleFromCornerAngles: not an orthocircle");
    c.radius = std::sqrt(r2);
    c.gapIndex = gapIndex;
    c.half = half;
    return c;
}

MobiusMap::MobiusMap(cplx a, cplx b, cplx c, cplx d, std::vector<std::int8_t> word)
    : a_(a), b_(b), c_(c), d_(d), det_(a * d - b * c), word_(std::move(word)) {
    if (std::abs(det_) < 1e-300) throw GeometryError("MobiusMap: singular matrix");
    rescale();
}

MobiusMap::MobiusMap(cplx a, cplx b, cplx c, cplx d, cplx det,
                     std::vector<std::int8_t> word)
    : a_(a), b_(b), c_(c), d_(d), det_(det), word_(std::move(word)) {
    rescale();
}

void MobiusMap::rescale() {
    double s = std::max(std::max(std::abs(a_), std::abs(b_)),
                        std::max(std::abs(c_), std::abs(d_)));
    if (s <= 0.0) throw GeometryError("MobiusMap: zero matrix");
    a_ /= s;
    b_ /= s;
    c_ /= s;
    d_ /= s;
    det_ /= s * s;
}

cplx MobiusMap::operator()(cplx z) const { return (a_ * z + b_) / (c_ * z + d_); }

cplx MobiusMap::derivative(cplx z) const {
    cplx den = c_ * z + d_;
    return det_ / (den * den);
}

MobiusMap MobiusMap::compose(const MobiusMap& rhs) const {
    std::vector<std::int8_t> w = word_;
    w.insert(w.end(), rhs.word_.begin(), rhs.word_.end());
    // cancel inverse pairs at the seam
    std::vector<std::int8_t> red;
    red.reserve(w.size());
    for (std::int8_t s : w) {
        if (!red.empty() && red.back() == -s) red.pop_back();
        else red.push_back(s);
    }
    return MobiusMap(a_ * rhs.a_ + b_ * rhs.c_, a_ * rhs.b_ + b_ * rhs.d_,
                     c_ * rhs.a_ + d_ * rhs.c_, c_ * rhs.b_ + d_ * rhs.d_,
                     det_ * rhs.det_, std::move(red));
}

MobiusMap MobiusMap::inverse() const {
    std::vector<std::int8_t> w(word_.rbegin(), word_.rend());
    for (auto& s : w) s = static_cast<std::int8_t>(-s);
    return MobiusMap(d_, -b_, -c_, a_, det_, std::move(w));
}

FuchsianGroup FuchsianGroup::fromCircles(std::vector<Orthocircle> upperCircles) {
    FuchsianGroup g;
    for (std::size_t i = 0; i < upperCircles.size(); ++i) {
        const auto& c = upperCircles[i];
        double ortho = std::norm(c.center) - 1.0 - c.radius * c.radius;
        if (std::fabs(ortho) > 1e-9 * (1.0 + std::norm(c.center)))
            throw GeometryError("FuchsianGroup: circle not orthogonal to the unit circle");
        if (c.center.imag() <= c.radius)
            throw GeometryError("FuchsianGroup: circle meets the real axis");
        for (std::size_t k = 0; k < i; ++k) {
            double d = std::abs(c.center - upperCircles[k].center);
            if (d <= c.radius + upperCircles[k].radius)
                throw GeometryError("FuchsianGroup: circles overlap");
        }
    }
    g.upper_ = std::move(upperCircles);
    for (const auto& c : g.upper_) {
        Orthocircle lc = c;
        lc.center = std::conj(c.center);
        lc.half = -1;
        g.lower_.push_back(lc);
    }
    int j = 1;
    for (const auto& c : g.upper_) {
        // gamma_j = (inversion in C_j^+) o conjugation:
        // z -> z0 + r^2/(z - conj(z0)) = (z0 z - 1)/(z - conj(z0))
        MobiusMap gen(c.center, -1.0, 1.0, -std::conj(c.center),
                      {static_cast<std::int8_t>(j)});
        g.gens_.push_back(gen);
        g.genInvs_.push_back(gen.inverse());
        ++j;
    }
    return g;
}

GroupEnumeration FuchsianGroup::enumerate(int maxLen, std::size_t cap) const {
    GroupEnumeration en;
    en.maxLen = maxLen;
    int l = numGenerators();
    en.elems.push_back(MobiusMap());
    en.levelStart.push_back(0);
    std::size_t prevBegin = 0, prevEnd = 1;
    std::vector<std::int8_t> letters;
    for (int j = 1; j <= l; ++j) {
        letters.push_back(static_cast<std::int8_t>(j));
        letters.push_back(static_cast<std::int8_t>(-j));
    }
    for (int k = 1; k <= maxLen; ++k) {
        en.levelStart.push_back(en.elems.size());
        for (std::size_t i = prevBegin; i < prevEnd; ++i) {
            std::int8_t first = en.elems[i].word().empty() ? 0 : en.elems[i].word().front();
            for (std::int8_t s : letters) {
                if (s == -first) continue;
                const MobiusMap& gen = (s > 0) ? gens_[s - 1] : genInvs_[-s - 1];
                if (en.elems.size() >= cap)
                    throw BudgetExceeded("enumerateGroup: element cap exceeded");
                en.elems.push_back(gen.compose(en.elems[i]));
            }
        }
        prevBegin = en.levelStart[k];
        prevEnd = en.elems.size();
    }
    en.levelStart.push_back(en.elems.size());
    return en;
}

std::pair<cplx, MobiusMap> FuchsianGroup::reduceToFundamental(cplx z, int iterCap) const {
    MobiusMap acc;
    int l = numGenerators();
    for (int it = 0; it < iterCap; ++it) {
        bool moved = false;
        for (int j = 1; j <= l && !moved; ++j) {
            if (upper_[j - 1].strictContains(z)) {
                z = genInvs_[j - 1](z);
                acc = genInvs_[j - 1].compose(acc);
                moved = true;
            } else if (lower_[j - 1].strictContains(z)) {
                z = gens_[j - 1](z);
                acc = gens_[j - 1].compose(acc);
                moved = true;
            }
        }
        if (!moved) return {z, acc};
    }
    throw IterationCap("reduceToFundamental: iteration cap reached (near the limit set?)");
}

bool FuchsianGroup::inFundamental(cplx z) const {
    if (std::abs(z) > 1.0 + 1e-12) return false;
    for (const auto& c : upper_)
        if (c.strictContains(z)) return false;
    for (const auto& c : lower_)
        if (c.strictContains(z)) return false;
    return true;
}

PoincareResult poincareSeries(const GroupEnumeration& en, double s, cplx z) {
    PoincareResult out;
    int K = en.maxLen;
    out.levelSums.assign(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        double acc = 0.0;
        for (std::size_t i = en.levelStart[k]; i < en.levelStart[k + 1]; ++i)
            acc += std::pow(std::abs(en.elems[i].derivative(z)), s);
        out.levelSums[k] = acc;
        out.partialSum += acc;
    }
    if (K >= 2 && out.levelSums[K - 1] > 0.0) {
        double q = out.levelSums[K] / out.levelSums[K - 1];
        out.tailEstimate = (q < 1.0) ? out.levelSums[K] * q / (1.0 - q)
                                     : std::numeric_limits<double>::infinity();
    }
    return out;
}

double criticalExponentEstimate(const GroupEnumeration& en, cplx z) {
    auto decays = [&](double s) {
        auto r = poincareSeries(en, s, z);
        return r.levelSums[en.maxLen] < 0.95 * r.levelSums[en.maxLen - 1];
    };
    if (!decays(2.0)) return 2.0;
    double lo = 0.0, hi = 2.0;
    for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        if (decays(mid)) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
}

ArcDecay boundaryArcDecay(const FuchsianGroup& grp, const GroupEnumeration& en) {
    std::vector<std::pair<double, double>> shadows;
    for (const auto& c : grp.upperCircles()) shadows.push_back(c.cornerAngles());
    for (const auto& c : grp.lowerCircles()) shadows.push_back(c.cornerAngles());
    std::sort(shadows.begin(), shadows.end());
    std::vector<std::pair<double, double>> arcs;  // fundamental arcs, ccw
    for (std::size_t i = 0; i < shadows.size(); ++i) {
        double from = shadows[i].second;
        double to = (i + 1 < shadows.size()) ? shadows[i + 1].first
                                             : shadows[0].first + 2 * kPi;
        arcs.emplace_back(from, to);
    }

    ArcDecay out;
    int K = en.maxLen;
    out.levelArcLength.assign(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        double acc = 0.0;
        for (std::size_t i = en.levelStart[k]; i < en.levelStart[k + 1]; ++i) {
            const auto& g = en.elems[i];
            for (const auto& arc : arcs) {
                cplx ua = g(std::polar(1.0, arc.first));
                cplx ub = g(std::polar(1.0, arc.second));
                double da = std::arg(ub) - std::arg(ua);
                while (da < 0) da += 2 * kPi;
                acc += da;
            }
        }
        out.levelArcLength[k] = acc;
    }
    out.boundaryResidual.assign(K + 1, 0.0);
    double used = 0.0;
    for (int k = 0; k <= K; ++k) {
        used += out.levelArcLength[k];
        out.boundaryResidual[k] = std::max(2 * kPi - used, 0.0);
    }
    int n = K;  // skip the truncation-noisy last level in the fit
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < n; ++k) {
        double y = std::log(std::max(out.boundaryResidual[k], 1e-300));
        sx += k;
        sy += y;
        sxx += static_cast<double>(k) * k;
        sxy += k * y;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.D0 = -slope;
    out.C0 = std::exp((sy - slope * sx) / n);
    return out;
}

}  // namespace fingap
