#include <cmath>
#include <random>

#include "doctest.h"
#include "fingap/potential.hpp"
#include "fingap/quadrature.hpp"

using namespace fingap;

namespace {

// Independent oracle: locate the single Craig zero of a two-band set by
// bisection on the defining gap integral, using plain adaptive quadrature on
// the sqrt-substituted integrand (no shared code path with the solver's
// Newton iteration).
double sqrtAbsROmitting(const GapSet& e, double edge, double t) {
    double s = 1.0;
    for (double p : e.endpoints())
        if (p != edge) s *= std::fabs(t - p);
    return std::sqrt(s);
}

double craigZeroBisectionOracle(const GapSet& e, double tol = 1e-13) {
    auto gapIntegral = [&](double x) {
        double a = e.gapLo(1), b = e.gapHi(1);
        // split at the midpoint; substitute u^2 at each singular endpoint
        double m = 0.5 * (a + b);
        auto fa = [&](double t) { return (t - x) / sqrtAbsROmitting(e, a, t); };
        auto fb = [&](double t) { return (t - x) / sqrtAbsROmitting(e, b, t); };
        return integrateSqrtEndpoint(fa, a, m, true, 1e-13) +
               integrateSqrtEndpoint(fb, m, b, false, 1e-13);
    };
    double lo = e.gapLo(1), hi = e.gapHi(1);
    double flo = gapIntegral(lo + 1e-9);
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        if (gapIntegral(mid) * flo > 0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

GapSet randomGapSet(std::mt19937_64& rng, int maxEll = 3) {
    std::uniform_int_distribution<int> ldist(1, maxEll);
    int l = ldist(rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> pts(2 * l + 2);
    double x = -3.0 + u(rng);
    for (auto& p : pts) {
        x += 0.3 + 2.0 * u(rng);
        p = x;
    }
    return GapSet(pts);
}

}  // namespace

TEST_CASE("Craig zeros: symmetric set has its zero at the gap midpoint") {
    GapSet e({-3.0, -1.0, 1.0, 3.0});
    auto xs = solveCraigZeros(e);
    REQUIRE(xs.size() == 1);
    CHECK(std::fabs(xs[0]) < 1e-12);
}

TEST_CASE("Craig zeros: asymmetric set matches the bisection oracle") {
    GapSet e({-2.0, 0.0, 1.0, 3.0});
    auto xs = solveCraigZeros(e);
    REQUIRE(xs.size() == 1);
    double oracle = craigZeroBisectionOracle(e);
    CHECK(xs[0] > 0.0);
    CHECK(xs[0] < 1.0);
    CHECK(std::fabs(xs[0] - oracle) < 1e-9);
}

TEST_CASE("Craig zeros: endpoint perturbation moves the zero continuously") {
    double delta = 1e-3;
    GapSet e1({-3.0, -1.0, 1.0, 3.0});
    GapSet e2({-3.0, -1.0, 1.0 + delta, 3.0});
    double x1 = solveCraigZeros(e1)[0];
    double x2 = solveCraigZeros(e2)[0];
    double oracle = craigZeroBisectionOracle(e2);
    CHECK(std::fabs(x2 - oracle) < 1e-9);
    CHECK(std::fabs(x2 - x1) < 10.0 * delta);
}

TEST_CASE("Craig zeros require at least one gap") {
    CHECK_THROWS_AS(solveCraigZeros(GapSet({-2.0, 2.0})), InvalidInput);
}

TEST_CASE("Equilibrium density") {
    SUBCASE("single band arcsine law") {
        Potential pot(GapSet({-2.0, 2.0}));
        CHECK(std::fabs(pot.equilibriumDensity(0.0) - 1.0 / (2.0 * kPi)) < 1e-13);
        // arcsine oracle at several interior points
        for (double x : {-1.7, -0.3, 0.9, 1.5}) {
            double oracle = 1.0 / (kPi * std::sqrt(4.0 - x * x));
            CHECK(std::fabs(pot.equilibriumDensity(x) - oracle) < 1e-12);
        }
    }
    SUBCASE("period-2 pullback oracle") {
        Potential pot(GapSet({-3.0, -1.0, 1.0, 3.0}));
        double x = std::sqrt(5.0);
        CHECK(std::fabs(pot.equilibriumDensity(x) - std::sqrt(5.0) / (4.0 * kPi)) < 1e-12);
        // general pullback rho(x) = |x| / (2 pi sqrt(4 - T(x)^2)), T = (x^2-5)/2
        for (double y : {1.2, 2.0, 2.8, -1.5}) {
            double T = (y * y - 5.0) / 2.0;
            double oracle = std::fabs(y) / (2.0 * kPi * std::sqrt(4.0 - T * T));
            CHECK(std::fabs(pot.equilibriumDensity(y) - oracle) < 1e-12);
        }
    }
    SUBCASE("symmetry") {
        Potential pot(GapSet({-3.0, -1.0, 1.0, 3.0}));
        CHECK(pot.equilibriumDensity(1.3) == doctest::Approx(pot.equilibriumDensity(-1.3)).epsilon(1e-13));
    }
    SUBCASE("domain errors") {
        Potential pot(GapSet({-2.0, 2.0}));
        CHECK_THROWS_AS(pot.equilibriumDensity(3.0), OutOfDomain);
        CHECK_THROWS_AS(pot.equilibriumDensity(2.0), OutOfDomain);
    }
}

TEST_CASE("Harmonic measures") {
    SUBCASE("single band") {
        Potential pot(GapSet({-2.0, 2.0}));
        auto h = pot.harmonicMeasures();
        REQUIRE(h.size() == 1);
        CHECK(std::fabs(h[0] - 1.0) < 1e-12);
    }
    SUBCASE("symmetric two bands") {
        Potential pot(GapSet({-3.0, -1.0, 1.0, 3.0}));
        auto h = pot.harmonicMeasures();
        REQUIRE(h.size() == 2);
        CHECK(std::fabs(h[0] - 0.5) < 1e-11);
        CHECK(std::fabs(h[1] - 0.5) < 1e-11);
    }
    SUBCASE("asymmetric two bands: independent quadrature oracle") {
        GapSet e({-2.0, 0.0, 1.0, 3.0});
        Potential pot(e);
        auto h = pot.harmonicMeasures();
        REQUIRE(h.size() == 2);
        CHECK(h[0] > 0.0);
        CHECK(h[0] < 1.0);
        CHECK(std::fabs(h[0] + h[1] - 1.0) < 1e-11);
        // oracle: integrate the density with the u^2 substitution at each edge
        double x1 = craigZeroBisectionOracle(e);
        auto rhoA = [&](double t) {
            return std::fabs(t - x1) / (kPi * sqrtAbsROmitting(e, -2.0, t));
        };
        auto rhoB = [&](double t) {
            return std::fabs(t - x1) / (kPi * sqrtAbsROmitting(e, 0.0, t));
        };
        double m = -1.0;
        double band1 = integrateSqrtEndpoint(rhoA, -2.0, m, true, 1e-12) +
                       integrateSqrtEndpoint(rhoB, m, 0.0, false, 1e-12);
        CHECK(std::fabs(h[0] - band1) < 1e-9);
    }
    SUBCASE("random sets sum to one") {
        std::mt19937_64 rng(12345);
        for (int i = 0; i < 8; ++i) {
            Potential pot(randomGapSet(rng));
            double s = 0.0;
            for (double v : pot.harmonicMeasures()) s += v;
            CHECK(std::fabs(s - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("Capacity") {
    SUBCASE("classical interval values") {
        CHECK(std::fabs(Potential(GapSet({-2.0, 2.0})).capacity() - 1.0) < 1e-8);
        CHECK(std::fabs(Potential(GapSet({0.0, 1.0})).capacity() - 0.25) < 1e-8);
    }
    SUBCASE("period-2 discriminant oracle") {
        CHECK(std::fabs(Potential(GapSet({-3.0, -1.0, 1.0, 3.0})).capacity() - std::sqrt(2.0)) < 1e-8);
    }
    SUBCASE("affine scaling") {
        // cap([a,b]) = (b-a)/4
        CHECK(std::fabs(Potential(GapSet({1.0, 6.0})).capacity() - 1.25) < 1e-8);
    }
}

TEST_CASE("Green's function") {
    SUBCASE("Joukowski closed form on [-2,2]") {
        Potential pot(GapSet({-2.0, 2.0}));
        double G = pot.green(cplx(3.0, 0.0));
        CHECK(std::fabs(G - std::log((3.0 + std::sqrt(5.0)) / 2.0)) < 1e-10);
        for (cplx z : {cplx(0.4, 1.1), cplx(-2.5, 0.2), cplx(1.0, 3.0)}) {
            cplx w = z + std::sqrt(z * z - 4.0);
            if (std::abs(w) < 2.0) w = z - std::sqrt(z * z - 4.0);
            double oracle = std::log(std::abs(w) / 2.0);
            CHECK(std::fabs(pot.green(z) - oracle) < 1e-10);
        }
    }
    SUBCASE("boundary and reference values") {
        Potential pot(GapSet({-3.0, -1.0, 1.0, 3.0}));
        CHECK(pot.green(cplx(3.0, 0.0)) == 0.0);
        CHECK(pot.green(cplx(2.0, 0.0)) == 0.0);
    }
    SUBCASE("gap maximum at the Craig zero") {
        Potential pot(GapSet({-3.0, -1.0, 1.0, 3.0}));
        double x1 = pot.craigZeros()[0];
        double G0 = pot.greenInGap(1, x1);
        CHECK(G0 > 0.0);
        double h = 1e-5;
        CHECK(pot.greenInGap(1, x1 + h) < G0);
        CHECK(pot.greenInGap(1, x1 - h) < G0);
        // G'(x) = -M(x) vanishes at the Craig zero
        double deriv = (pot.greenInGap(1, x1 + h) - pot.greenInGap(1, x1 - h)) / (2 * h);
        CHECK(std::fabs(deriv) < 1e-8);
        // and matches the closed form elsewhere in the gap
        double xq = 0.37;
        double derivQ = (pot.greenInGap(1, xq + h) - pot.greenInGap(1, xq - h)) / (2 * h);
        CHECK(std::fabs(derivQ + pot.Me(cplx(xq, 0.0)).real()) < 1e-7);
    }
    SUBCASE("positivity and asymptotics") {
        std::mt19937_64 rng(777);
        Potential pot(randomGapSet(rng, 2));
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 25; ++i) {
            cplx z(6.0 * u(rng), 4.0 * u(rng));
            if (z.imag() == 0.0 && pot.set().contains(z.real())) continue;
            CHECK(pot.green(z) >= -1e-12);
        }
        // log|z| - G(z) - log cap -> 0 along a ray
        double prev = 1e9;
        for (double r : {1e2, 1e3, 1e4}) {
            double resid = std::fabs(std::log(r) - pot.green(cplx(r, 0.0)) - pot.logCapacity());
            CHECK(resid < prev + 1e-14);
            prev = resid;
        }
        CHECK(prev < 1e-3);
    }
    SUBCASE("square root vanishing at band edges") {
        Potential pot(GapSet({-3.0, -1.0, 1.0, 3.0}));
        // limits G(x) (x-beta)^{-1/2} stable over two decades
        double b = 3.0;
        double r1 = pot.green(cplx(b + 1e-4, 0.0)) / std::sqrt(1e-4);
        double r2 = pot.green(cplx(b + 1e-6, 0.0)) / std::sqrt(1e-6);
        CHECK(r1 > 0.0);
        CHECK(std::fabs(r1 - r2) / r1 < 2e-2);
        double a = -3.0;
        double l1 = pot.green(cplx(a - 1e-4, 0.0)) / std::sqrt(1e-4);
        double l2 = pot.green(cplx(a - 1e-6, 0.0)) / std::sqrt(1e-6);
        CHECK(l1 > 0.0);
        CHECK(std::fabs(l1 - l2) / l1 < 2e-2);
        // interior gap edge
        double g1 = pot.greenInGap(1, -1.0 + 1e-4) / std::sqrt(1e-4);
        double g2 = pot.greenInGap(1, -1.0 + 1e-6) / std::sqrt(1e-6);
        CHECK(g1 > 0.0);
        CHECK(std::fabs(g1 - g2) / g1 < 2e-2);
    }
}

TEST_CASE("Density integrates to harmonic measures (self-consistency)") {
    GapSet e({-2.0, 0.0, 1.0, 3.0});
    Potential pot(e);
    auto h = pot.harmonicMeasures();
    for (int j = 1; j <= 2; ++j) {
        double a = e.alpha(j), b = e.beta(j), m = 0.5 * (a + b);
        // regularized density: rho(t) * sqrt(|t-edge|) stays smooth at the edge
        auto rhoA = [&](double t) {
            return pot.equilibriumDensity(t) * std::sqrt(std::fabs(t - a));
        };
        auto rhoB = [&](double t) {
            return pot.equilibriumDensity(t) * std::sqrt(std::fabs(t - b));
        };
        double v = integrateSqrtEndpoint(rhoA, a, m, true, 1e-11) +
                   integrateSqrtEndpoint(rhoB, m, b, false, 1e-11);
        CHECK(std::fabs(v - h[j - 1]) < 1e-9);
    }
}

TEST_CASE("Cumulative measure and its inverse") {
    Potential pot(GapSet({-2.0, 0.0, 1.0, 3.0}));
    auto h = pot.harmonicMeasures();
    CHECK(std::fabs(pot.cumulativeFromRight(3.0)) < 1e-12);
    CHECK(std::fabs(pot.cumulativeFromRight(-2.0) - 1.0) < 1e-11);
    CHECK(std::fabs(pot.cumulativeFromRight(1.0) - h[1]) < 1e-11);
    for (double u : {0.05, 0.3, 0.55, 0.8, 0.99}) {
        double x = pot.inverseCumulative(u);
        CHECK(pot.set().contains(x));
        CHECK(std::fabs(pot.cumulativeFromRight(x) - u) < 1e-9);
    }
}
