#include "fingap/gapset.hpp"

#include <algorithm>
#include <cmath>

namespace fingap {

double wrapAngle(double a) {
    a = std::fmod(a, 2 * kPi);
    if (a > kPi) a -= 2 * kPi;
    if (a <= -kPi) a += 2 * kPi;
    return a;
}

GapSet::GapSet(std::vector<double> endpoints) : pts_(std::move(endpoints)) {
    if (pts_.size() < 2 || pts_.size() % 2 != 0)
        throw InvalidInput("GapSet: need an even number (>=2) of endpoints");
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i)
        if (!(pts_[i] < pts_[i + 1]))
            throw InvalidInput("GapSet: endpoints must be strictly increasing");
    ell_ = static_cast<int>(pts_.size() / 2) - 1;
}

GapSet GapSet::fromBands(const std::vector<std::pair<double, double>>& bands) {
    std::vector<double> p;
    p.reserve(2 * bands.size());
    for (const auto& b : bands) {
        p.push_back(b.first);
        p.push_back(b.second);
    }
    return GapSet(p);
}

cplx GapSet::R(cplx z) const {
    cplx r = 1.0;
    for (double e : pts_) r *= (z - e);
    return r;
}

double GapSet::R(double x) const {
    double r = 1.0;
    for (double e : pts_) r *= (x - e);
    return r;
}

cplx GapSet::sqrtR(cplx z) const {
    // Half-sum of principal logs; cuts of individual factors cancel off e
    // and the result is positive for real z > beta_{l+1}.
    cplx s = 0.0;
    for (double e : pts_) s += std::log(z - e);
    return std::exp(0.5 * s);
}

double GapSet::gapSign(int j) const {
    // (l+1-j) bands lie to the right of gap j.
    return ((ell_ + 1 - j) % 2 == 0) ? 1.0 : -1.0;
}

cplx GapSet::sqrtRUpper(double x) const {
    int j = bandOf(x);
    if (j == 0) throw OutOfDomain("sqrtRUpper: x not in a band");
    return cplx(0.0, gapSign(j) * std::sqrt(std::fabs(R(x))));
}

std::vector<double> GapSet::sqrtSeriesAtInfinity(int nterms) const {
    // R(z) = z^{2l+2} (1 + c_1/z + ...), c_k = (-1)^k e_k(endpoints).
    int n = static_cast<int>(pts_.size());
    std::vector<double> c(std::max(nterms + 1, n + 1), 0.0);
    c[0] = 1.0;
    for (int i = 0; i < n; ++i)
        for (int k = std::min(i + 1, static_cast<int>(c.size()) - 1); k >= 1; --k)
            c[k] += -pts_[i] * c[k - 1];
    std::vector<double> d(nterms + 1, 0.0);
    d[0] = 1.0;
    for (int k = 1; k <= nterms; ++k) {
        double acc = (k < static_cast<int>(c.size())) ? c[k] : 0.0;
        for (int i = 1; i < k; ++i) acc -= d[i] * d[k - i];
        d[k] = 0.5 * acc;
    }
    return d;
}

bool GapSet::contains(double x) const { return bandOf(x) != 0; }

bool GapSet::strictlyInside(double x) const {
    for (int j = 1; j <= numBands(); ++j)
        if (x > alpha(j) && x < beta(j)) return true;
    return false;
}

int GapSet::bandOf(double x) const {
    for (int j = 1; j <= numBands(); ++j)
        if (x >= alpha(j) && x <= beta(j)) return j;
    return 0;
}

int GapSet::gapOf(double x) const {
    for (int j = 1; j <= ell_; ++j)
        if (x > gapLo(j) && x < gapHi(j)) return j;
    return 0;
}

double GapSet::distToSet(double x) const {
    if (contains(x)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (double e : pts_) d = std::min(d, std::fabs(x - e));
    return d;
}

}  // namespace fingap
