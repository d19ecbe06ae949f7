#include "impgreen/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace impgreen {

namespace {

// Legendre P_n(x) and derivative by the three-term recurrence.
void legendre_pair(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

GaussRule make_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-based initial guess, then Newton.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p, dp;
        for (int it = 0; it < 60; ++it) {
            legendre_pair(n, x, p, dp);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre_pair(n, x, p, dp);
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

// Orthonormal Hermite values scaled by e^{-x^2/2}; same roots as H_n,
// bounded magnitude for large n.
void hermite_weighted(int n, double x, std::vector<double>& q) {
    q.resize(n + 1);
    q[0] = std::exp(-0.5 * x * x) / std::pow(M_PI, 0.25);
    if (n == 0) return;
    q[1] = std::sqrt(2.0) * x * q[0];
    for (int k = 1; k < n; ++k)
        q[k + 1] = (x * q[k] - std::sqrt(k / 2.0) * q[k - 1]) / std::sqrt((k + 1) / 2.0);
}

GaussRule make_hermite(int n) {
    // bracket the positive roots of q_n on a fine grid, polish by bisection
    double xmax = std::sqrt(2.0 * n + 1.0) + 1.0;
    int grid = 40 * n;
    std::vector<double> q;
    auto qn = [&](double x) {
        hermite_weighted(n, x, q);
        return q[n];
    };
    std::vector<double> roots;
    double x0 = (n % 2 == 1) ? 0.0 : 1e-12; // odd n has a root at 0
    if (n % 2 == 1) roots.push_back(0.0);
    double prev = qn(x0), xprev = x0;
    for (int i = 1; i <= grid; ++i) {
        double x = xmax * i / grid;
        double val = qn(x);
        if (prev == 0.0) prev = 1e-300;
        if (val * prev < 0.0) {
            double a = xprev, b = x, fa = prev;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (a + b), fm = qn(mid);
                if (fa * fm <= 0.0) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev = val;
        xprev = x;
    }
    if (static_cast<int>(roots.size()) != (n + 1) / 2)
        throw std::runtime_error("gauss_hermite: root bracketing failed");
    GaussRule rule;
    rule.nodes.reserve(n);
    rule.weights.reserve(n);
    std::vector<double> qv;
    for (double xr : roots) {
        hermite_weighted(n, xr, qv);
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += qv[k] * qv[k];
        // Christoffel weight 1/sum p_k^2; q_k = p_k e^{-x^2/2}
        double w = std::exp(-xr * xr) / s;
        if (xr == 0.0) {
            rule.nodes.push_back(0.0);
            rule.weights.push_back(w);
        } else {
            rule.nodes.push_back(-xr);
            rule.weights.push_back(w);
            rule.nodes.push_back(xr);
            rule.weights.push_back(w);
        }
    }
    return rule;
}

template <typename F>
const GaussRule& cached(std::map<int, GaussRule>& cache, std::mutex& mtx, int n, F make) {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

} // namespace

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    return cached(cache, mtx, n, make_legendre);
}

const GaussRule& gauss_hermite(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    return cached(cache, mtx, n, make_hermite);
}

} // namespace impgreen
