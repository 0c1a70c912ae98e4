#include <cmath>
#include <complex>

#include "doctest.h"
#include "fingap/gapset.hpp"
#include "fingap/quadrature.hpp"

using namespace fingap;

TEST_CASE("GapSet validation") {
    CHECK_THROWS_AS(GapSet({1.0, 1.0}), InvalidInput);
    CHECK_THROWS_AS(GapSet({0.0, 1.0, 0.5}), InvalidInput);
    CHECK_THROWS_AS(GapSet({0.0, 1.0, 0.5, 2.0}), InvalidInput);

    GapSet e({-3.0, -1.0, 1.0, 3.0});
    CHECK(e.ell() == 1);
    CHECK(e.alpha(1) == -3.0);
    CHECK(e.beta(2) == 3.0);
    CHECK(e.gapLo(1) == -1.0);
    CHECK(e.gapHi(1) == 1.0);
}

TEST_CASE("R sign structure: R <= 0 exactly on e") {
    GapSet e({-3.0, -1.0, 1.0, 3.0});
    CHECK(e.R(-2.0) <= 0.0);
    CHECK(e.R(2.0) <= 0.0);
    CHECK(e.R(0.0) > 0.0);
    CHECK(e.R(4.0) > 0.0);
    CHECK(e.R(-4.0) > 0.0);
    CHECK(e.R(3.0) == 0.0);
}

TEST_CASE("sqrtR branch conventions") {
    GapSet e({-3.0, -1.0, 1.0, 3.0});

    // positive on (beta_{l+1}, inf)
    CHECK(e.sqrtR(cplx(4.0, 0.0)).real() > 0.0);
    CHECK(std::fabs(e.sqrtR(cplx(4.0, 0.0)).imag()) < 1e-14);

    // real in gaps with alternating sign
    cplx g = e.sqrtR(cplx(0.0, 1e-14));
    CHECK(g.real() * e.gapSign(1) > 0.0);
    CHECK(e.gapSign(1) == -1.0);   // one band to the right of gap 1
    CHECK(e.gapSign(0) == 1.0);    // two bands right of (-inf, alpha_1)

    // squared identity off the set
    for (cplx z : {cplx(0.5, 0.7), cplx(-2.0, 0.3), cplx(5.0, -1.0)}) {
        cplx s = e.sqrtR(z);
        CHECK(std::abs(s * s - e.R(z)) < 1e-10 * std::abs(e.R(z)));
    }

    // boundary values on bands are purely imaginary and conjugate across the cut
    double x = 2.0;
    cplx up = e.sqrtR(cplx(x, 1e-12));
    cplx bd = e.sqrtRUpper(x);
    CHECK(std::abs(up - bd) < 1e-5);
    CHECK(std::fabs(bd.real()) < 1e-14);
}

TEST_CASE("sqrt series at infinity matches direct evaluation") {
    GapSet e({-2.0, 0.0, 1.0, 3.0});
    auto d = e.sqrtSeriesAtInfinity(6);
    double z = 37.0;
    double direct = e.sqrtR(cplx(z, 0.0)).real();
    double series = 0.0, p = std::pow(z, e.ell() + 1);
    for (std::size_t k = 0; k < d.size(); ++k, p /= z) series += d[k] * p;
    CHECK(std::fabs(series - direct) < 1e-9 * std::fabs(direct));
}

TEST_CASE("Gauss-Legendre sanity") {
    // int_{-1}^{1} x^8 = 2/9 exactly with >= 5 nodes
    const auto& [x, w] = gaussLegendre(16);
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += w[i] * std::pow(x[i], 8);
    CHECK(std::fabs(s - 2.0 / 9.0) < 1e-14);

    double v = integrate([](double t) { return std::exp(t); }, 0.0, 1.0, 1e-12);
    CHECK(std::fabs(v - (std::exp(1.0) - 1.0)) < 1e-12);
}

TEST_CASE("Chebyshev-weighted and sqrt-endpoint rules") {
    // int_{-2}^{2} dx / sqrt(4-x^2) = pi
    double v = integrateChebWeighted([](double) { return 1.0; }, -2.0, 2.0, 1e-12);
    CHECK(std::fabs(v - kPi) < 1e-12);

    // int_0^1 dt/sqrt(t) = 2 (weight handled by the rule; F == 1)
    double u = integrateSqrtEndpoint([](double) { return 1.0; }, 0.0, 1.0, true, 1e-12);
    CHECK(std::fabs(u - 2.0) < 1e-12);
    // int_0^1 cos(t)/sqrt(1-t) dt against a shifted series-free reference
    double v2 = integrateSqrtEndpoint([](double t) { return std::cos(t); }, 0.0, 1.0,
                                      false, 1e-12);
    double ref = integrate([](double s) { return 2.0 * std::cos(1.0 - s * s); }, 0.0, 1.0, 1e-13);
    CHECK(std::fabs(v2 - ref) < 1e-12);
}
