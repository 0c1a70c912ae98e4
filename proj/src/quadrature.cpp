#include "fingap/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace fingap {

static std::pair<std::vector<double>, std::vector<double>> computeGL(int n) {
    std::vector<double> x(n), w(n);
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        double p1 = 1.0, p2 = 0.0;
        for (int j = 0; j < n; ++j) {
            double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
        }
        pp = n * (z * p1 - p2) / (z * z - 1.0);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    return {x, w};
}

const std::pair<std::vector<double>, std::vector<double>>& gaussLegendre(int n) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, computeGL(n)).first;
    return it->second;
}

template <typename T>
static T glPanel(const std::function<T(double)>& f, double a, double b, int n) {
    const auto& [x, w] = gaussLegendre(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T s{};
    for (int i = 0; i < n; ++i) s += w[i] * f(c + h * x[i]);
    return h * s;
}

template <typename T>
static T adaptive(const std::function<T(double)>& f, double a, double b,
                  double tol, int depth, int maxDepth) {
    T coarse = glPanel<T>(f, a, b, 16);
    T fine = glPanel<T>(f, a, b, 32);
    double err = std::abs(fine - coarse);
    if (err <= tol * (1.0 + std::abs(fine)) || depth >= maxDepth) {
        if (depth >= maxDepth && err > 1e3 * tol * (1.0 + std::abs(fine)))
            throw QuadratureFailure("adaptive quadrature: refinement budget exceeded");
        return fine;
    }
    double mid = 0.5 * (a + b);
    return adaptive<T>(f, a, mid, tol * 0.6, depth + 1, maxDepth) +
           adaptive<T>(f, mid, b, tol * 0.6, depth + 1, maxDepth);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int maxDepth) {
    return adaptive<double>(f, a, b, tol, 0, maxDepth);
}

cplx integrateC(const std::function<cplx(double)>& f, double a, double b,
                double tol, int maxDepth) {
    return adaptive<cplx>(f, a, b, tol, 0, maxDepth);
}

double integrateChebWeighted(const std::function<double(double)>& F, double a,
                             double b, double tol) {
    double m = 0.5 * (a + b), h = 0.5 * (b - a);
    auto g = [&](double phi) { return F(m + h * std::cos(phi)); };
    return integrate(g, 0.0, kPi, tol);
}

double integrateSqrtEndpoint(const std::function<double(double)>& F, double a,
                             double b, bool singularAtLeft, double tol) {
    double S = std::sqrt(b - a);
    if (singularAtLeft) {
        auto g = [&](double s) { return 2.0 * F(a + s * s); };
        return integrate(g, 0.0, S, tol);
    }
    auto g = [&](double s) { return 2.0 * F(b - s * s); };
    return integrate(g, 0.0, S, tol);
}

}  // namespace fingap
