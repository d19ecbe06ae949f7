#include "impgreen/specfun.hpp"

#include "impgreen/errors.hpp"
#include "impgreen/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace impgreen::specfun {

namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr int kLaguerreNodes = 160;

bool on_negative_axis(Cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0;
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// z^n for small integer n by repeated multiplication (keeps branches trivial)
Cplx ipow(Cplx z, int n) {
    Cplx r = 1.0;
    for (int k = 0; k < n; ++k) r *= z;
    return r;
}

} // namespace

BesselOrder::BesselOrder(int twice_value) : twice_(twice_value) {
    if (twice_value < 0)
        throw DomainError("BesselOrder: order must be a non-negative half-integer");
}

double harmonic_number(int n) {
    if (n < 0) throw DomainError("harmonic_number: n must be >= 0");
    double h = 0.0;
    for (int m = 1; m <= n; ++m) h += 1.0 / m;
    return h;
}

double majorant(MajorantKind kind, double mu, double r) {
    if (r <= 0.0) throw DomainError("majorant: r must be positive");
    if (mu < 0.0) throw DomainError("majorant: mu must be >= 0");
    if (r >= 1.0) return 1.0 / std::sqrt(r);
    switch (kind) {
        case MajorantKind::M:
            return mu == 0.0 ? 1.0 + std::abs(std::log(r)) : std::pow(r, -mu);
        case MajorantKind::N:
            return std::pow(r, -mu); // r^0 = 1 at mu = 0
        case MajorantKind::W: {
            if (mu == 0.0) {
                double l = std::log(r);
                return 1.0 + l * l;
            }
            return std::pow(r, -mu);
        }
    }
    return 0.0; // unreachable
}

namespace detail {

const std::vector<double>& reverse_bessel_coeffs(int n) {
    static std::vector<std::vector<double>> table;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    if (table.empty()) {
        table.push_back({1.0});      // theta_0
        table.push_back({1.0, 1.0}); // theta_1 = 1 + z
    }
    if (n > 15)
        throw DomainError("reverse_bessel_coeffs: order too large for exact coefficients");
    while (static_cast<int>(table.size()) <= n) {
        int m = static_cast<int>(table.size()) - 1; // have theta_m, build theta_{m+1}
        const auto& tm = table[m];
        const auto& tp = table[m - 1];
        std::vector<double> next(m + 2, 0.0);
        for (int k = 0; k <= m; ++k) next[k] += (2 * m + 1) * tm[k];
        for (int k = 0; k <= m - 1; ++k) next[k + 2] += tp[k];
        table.push_back(std::move(next));
    }
    return table[n];
}

namespace {

Cplx polyval(const std::vector<double>& c, Cplx z) {
    Cplx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

// w^(n + 1/2), principal branch
Cplx pow_half(Cplx w, int n) {
    return ipow(w, n) * std::sqrt(w);
}

} // namespace

// Ascending series about z = 0.  The sum cancels like e^{|z| + Re z}
// against the result, which bounds the usable window; the certificate
// reports exactly that loss.
Cplx k_scaled_int_series(int n, Cplx z, double& cert) {
    Cplx h = 0.5 * z;
    Cplx h2 = h * h;
    Cplx chi1 = 0.0;
    for (int k = 0; k < n; ++k)
        chi1 += (((k % 2 == 0) ? 0.5 : -0.5) * factorial(n - 1 - k) / factorial(k)) * ipow(h2, k);
    Cplx s2 = 0.0, s3 = 0.0;
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    Cplx term = sign / factorial(n);
    double hk = 0.0, hkn = harmonic_number(n);
    for (int k = 0;; ++k) {
        s2 += term;
        s3 += 0.5 * (hk + hkn) * term;
        if (k > 3 && std::abs(term) < 1e-18 * std::abs(s2)) break;
        if (k > 500) throw ConvergenceError("bessel_k_scaled: series did not converge");
        hk += 1.0 / (k + 1);
        hkn += 1.0 / (k + 1 + n);
        term *= h2 / static_cast<double>((k + 1) * (k + 1 + n));
    }
    Cplx hn = ipow(h, n);
    Cplx K = -(kEulerGamma + std::log(h)) * hn * s2 + hn * s3;
    if (n > 0) K += chi1 / hn;
    double az = std::abs(z);
    cert = 5.0 * kEps * std::exp(az + std::max(z.real(), 0.0)) * std::max(1.0, std::sqrt(az));
    return std::exp(z) * K;
}

// Rotated Gauss-Laguerre evaluation of
//   e^z K_n(z) = sqrt(pi)/Gamma(n+1/2) (1/2)^n z^{-1/2}
//                 int_0^inf e^{-w} w^{n-1/2} (2 + w/z)^{n-1/2} dw,
// valid for Re z > 0.  The integrand is mapped to a Gauss-Hermite rule
// through w = t^2.
Cplx k_scaled_int_laguerre(int n, Cplx z, double& cert) {
    const GaussRule& gh = gauss_hermite(kLaguerreNodes);
    Cplx inv_z = 1.0 / z;
    Cplx acc = 0.0;
    for (int i = 0; i < gh.size(); ++i) {
        double t2 = gh.nodes[i] * gh.nodes[i];
        Cplx base = 2.0 + t2 * inv_z;
        Cplx f = 1.0 / std::sqrt(base); // (2 + w/z)^{-1/2}
        if (n > 0) f *= ipow(base, n) * std::pow(t2, n);
        acc += gh.weights[i] * f;
    }
    // Gamma(n + 1/2) = sqrt(pi) (2n-1)!! / 2^n
    double dfact = 1.0;
    for (int k = 1; k <= n; ++k) dfact *= (2 * k - 1);
    double pref = 1.0 / dfact; // sqrt(pi)/Gamma(n+1/2) * (1/2)^n = 2^n/(2n-1)!!/2^n
    cert = 1e-14;
    return pref * acc / std::sqrt(z);
}

// Large-argument expansion with adaptive truncation at the smallest term.
Cplx k_scaled_int_asymptotic(int n, Cplx z, double& cert) {
    double fourmu2 = 4.0 * n * n;
    Cplx sum = 1.0, term = 1.0;
    double minterm = 1e300;
    for (int k = 1; k <= 60; ++k) {
        term *= (fourmu2 - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * z);
        double a = std::abs(term);
        if (a >= minterm) break; // divergence onset
        minterm = a;
        sum += term;
    }
    cert = 10.0 * minterm + 4.0 * kEps;
    return std::sqrt(M_PI / (2.0 * z)) * sum;
}

// Same expansion applied to the difference e^z (K_n - K_{n+1}); the
// coefficient difference is built by its own recurrence so the leading
// cancellation never happens in floating point.
Cplx k_diff_scaled_int_asymptotic(int n, Cplx z, double& cert) {
    double m0 = 4.0 * n * n;
    double m1 = 4.0 * (n + 1) * (n + 1);
    Cplx a_hi = 1.0;  // a_k(n+1)
    Cplx diff = 0.0;  // a_k(n) - a_k(n+1)
    Cplx sum = 0.0;
    double minterm = 1e300;
    for (int k = 1; k <= 60; ++k) {
        double odd2 = (2.0 * k - 1.0) * (2.0 * k - 1.0);
        Cplx c_lo = (m0 - odd2) / (8.0 * k * z);
        Cplx c_hi = (m1 - odd2) / (8.0 * k * z);
        diff = c_lo * diff + (c_lo - c_hi) * a_hi;
        a_hi *= c_hi;
        double a = std::abs(diff);
        if (a >= minterm && k > 2) break;
        minterm = std::min(minterm, a);
        sum += diff;
    }
    Cplx value = std::sqrt(M_PI / (2.0 * z)) * sum;
    cert = (10.0 * minterm + 4.0 * kEps * std::abs(sum)) / std::max(std::abs(sum), 1e-300);
    return value;
}

} // namespace detail

namespace {

// Branch selection for integer order n in {0, 1}; larger orders are
// lifted by the upward recurrence.
Cplx k_scaled_int_base(int n, Cplx z, double tol) {
    double az = std::abs(z);
    double cert_series = 5.0 * kEps * std::exp(az + std::max(z.real(), 0.0)) *
                         std::max(1.0, std::sqrt(az));
    if (cert_series <= tol) {
        double c;
        return detail::k_scaled_int_series(n, z, c);
    }
    if (az >= 14.0) {
        double c;
        Cplx v = detail::k_scaled_int_asymptotic(n, z, c);
        if (c <= tol) return v;
    }
    bool laguerre_ok = az >= 3.0 && az <= 40.0 &&
                       std::abs(std::arg(z)) <= M_PI_2 - 0.02;
    if (laguerre_ok) {
        double c;
        Cplx v = detail::k_scaled_int_laguerre(n, z, c);
        if (c <= tol) return v;
    }
    // last resort: best certificate wins, else report failure
    double cs, ca;
    Cplx vs = detail::k_scaled_int_series(n, z, cs);
    Cplx va = detail::k_scaled_int_asymptotic(n, z, ca);
    double best = std::min(cs, ca);
    if (best > tol)
        throw AccuracyError("bessel_k_scaled: no branch certifies tolerance at |z|=" +
                            std::to_string(az));
    return cs <= ca ? vs : va;
}

Cplx k_scaled_integer(int order, Cplx z, double tol) {
    if (order <= 1) return k_scaled_int_base(order, z, tol);
    // upward recurrence K_{m+1} = K_{m-1} + (2m/z) K_m (stable for K)
    Cplx km1 = k_scaled_int_base(0, z, tol);
    Cplx k = k_scaled_int_base(1, z, tol);
    for (int m = 1; m < order; ++m) {
        Cplx kp = km1 + (2.0 * m / z) * k;
        km1 = k;
        k = kp;
    }
    return k;
}

} // namespace

Cplx bessel_k_scaled(BesselOrder mu, Cplx z, double tol) {
    if (on_negative_axis(z))
        throw DomainError("bessel_k_scaled: z on the closed negative real axis");
    if (mu.is_integer()) return k_scaled_integer(mu.int_order(), z, tol);
    int n = mu.half_index();
    const auto& theta = detail::reverse_bessel_coeffs(n);
    return std::sqrt(M_PI / 2.0) * detail::polyval(theta, z) / detail::pow_half(z, n);
}

Cplx bessel_k_diff_scaled(BesselOrder mu, Cplx z, double tol) {
    if (on_negative_axis(z))
        throw DomainError("bessel_k_diff_scaled: z on the closed negative real axis");
    if (!mu.is_integer()) {
        // e^z (K_{n+1/2} - K_{n+3/2}) = sqrt(pi/2) (z theta_n - theta_{n+1}) / z^{n+3/2};
        // the polynomial subtraction is exact in integer coefficients.
        int n = mu.half_index();
        const auto& tn = detail::reverse_bessel_coeffs(n);
        const auto& tn1 = detail::reverse_bessel_coeffs(n + 1);
        std::vector<double> p(tn1.size(), 0.0);
        for (std::size_t k = 0; k < tn.size(); ++k) p[k + 1] = tn[k];
        for (std::size_t k = 0; k < tn1.size(); ++k) p[k] -= tn1[k];
        return std::sqrt(M_PI / 2.0) * detail::polyval(p, z) / detail::pow_half(z, n + 1);
    }
    int n = mu.int_order();
    double az = std::abs(z);
    if (az >= 14.0) {
        double c;
        Cplx v = detail::k_diff_scaled_int_asymptotic(n, z, c);
        if (c <= tol) return v;
    }
    // Direct subtraction: K_mu and K_{mu+1} approach each other like 1 + O(1/z),
    // so the subtraction amplifies errors by at most ~|z|.
    double sub_loss = std::max(1.0, az);
    Cplx a = k_scaled_integer(n, z, tol / sub_loss);
    Cplx b = k_scaled_integer(n + 1, z, tol / sub_loss);
    return a - b;
}

Cplx tricomi_u11(Cplx z) {
    if (z.real() <= 0.0) throw DomainError("tricomi_u11: requires Re z > 0");
    if (std::abs(z) <= 2.0) {
        // U(1,1,z) = e^z E_1(z) with the ascending series for E_1
        Cplx sum = 0.0, term = 1.0;
        for (int k = 1; k <= 60; ++k) {
            term *= -z / static_cast<double>(k);
            Cplx add = -term / static_cast<double>(k);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum) && k > 4) break;
        }
        return std::exp(z) * (-kEulerGamma - std::log(z) + sum);
    }
    // modified Lentz on E_1's continued fraction, scaled form:
    // e^z E_1(z) = 1/(z + 1/(1 + 1/(z + 2/(1 + 2/(z + ...)))))
    const double tiny = 1e-300;
    Cplx f = tiny, C = f, D = 0.0;
    auto step = [&](Cplx a, Cplx b) {
        D = b + a * D;
        if (D == Cplx(0.0)) D = tiny;
        C = b + a / C;
        if (C == Cplx(0.0)) C = tiny;
        D = 1.0 / D;
        Cplx delta = C * D;
        f *= delta;
        return std::abs(delta - 1.0);
    };
    step(1.0, z);
    for (int k = 1; k <= 400; ++k) {
        step(static_cast<double>(k), 1.0);
        double d = step(static_cast<double>(k), z);
        if (d < 1e-16) break;
    }
    return f;
}

} // namespace impgreen::specfun
