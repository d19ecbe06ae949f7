#include "impgreen/kernel.hpp"

#include "impgreen/errors.hpp"
#include "impgreen/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace impgreen::kernel {

namespace {

constexpr double kEps = 2.220446049250313e-16;

// (s^2 / 2pi)^(nu + 1/2) on the principal branch of s^2.  For
// arg s in (-pi/2, pi/2] this equals (s/sqrt(2 pi))^(2 nu + 1).
Cplx s_sq_pow(const KernelParams& params) {
    Cplx base = params.s * params.s / (2.0 * M_PI);
    int tn = params.twice_nu() + 1; // 2(nu+1/2)
    Cplx p = 1.0;
    for (int k = 0; k < tn / 2; ++k) p *= base;
    if (tn % 2 != 0) p *= std::sqrt(base);
    return p;
}

struct PanelResult {
    Cplx integral;
    double err;     // local refinement estimate
    double abs_sum; // sum of |contributions| for the roundoff floor
    double q_bare;  // max |q| (without e^{-sy}) seen on the panel
    int evals;
};

// One Gauss panel plus a bisection check.
template <typename F>
PanelResult panel_checked(const F& f, double a, double b, double tol, int n, int depth) {
    const GaussRule& gl = gauss_legendre(n);
    auto once = [&](double lo, double hi) {
        double h = 0.5 * (hi - lo), c = 0.5 * (lo + hi);
        Cplx acc = 0.0;
        double qmax = 0.0;
        for (int i = 0; i < n; ++i) {
            auto [val, qbare] = f(c + h * gl.nodes[i]);
            acc += gl.weights[i] * val;
            qmax = std::max(qmax, qbare);
        }
        return std::pair<Cplx, double>(h * acc, qmax);
    };
    auto [whole, q0] = once(a, b);
    auto [left, q1] = once(a, 0.5 * (a + b));
    auto [right, q2] = once(0.5 * (a + b), b);
    Cplx refined = left + right;
    double diff = std::abs(whole - refined);
    double qbar = std::max({q0, q1, q2});
    if (diff <= tol || depth >= 24)
        return {refined, diff, std::abs(left) + std::abs(right), qbar, 3 * n};
    PanelResult l = panel_checked(f, a, 0.5 * (a + b), 0.5 * tol, n, depth + 1);
    PanelResult r = panel_checked(f, 0.5 * (a + b), b, 0.5 * tol, n, depth + 1);
    return {l.integral + r.integral, l.err + r.err, l.abs_sum + r.abs_sum,
            std::max(qbar, std::max(l.q_bare, r.q_bare)), l.evals + r.evals + 3 * n};
}

PsiResult psi_direct(const transform::ZGeom& zg, double r_ref, const KernelParams& params,
                     const QuadratureSpec& quad) {
    const Cplx s = params.s;
    const double sigma = s.real();
    const double abs_s = std::abs(s);
    const double p = params.nu() + 2.0; // integrand decay exponent

    auto f = [&](double y) {
        Cplx q = transform::q_eval(zg, y, params);
        return std::pair<Cplx, double>(std::exp(-s * y) * q, std::abs(q));
    };

    // |psi| ~ |s|^{-1} max(1, |s| r)^{-(nu+1)} sets the absolute tolerance scale
    double scale = std::pow(std::max(1.0, abs_s * r_ref), -(params.nu() + 1.0)) / abs_s;
    double tol_abs = std::max(quad.rel_tol * scale, quad.abs_tol);

    PsiResult res;
    double b = split_point(s, r_ref);
    if (b > 0.0) {
        PanelResult pr = panel_checked(f, 0.0, b, tol_abs, quad.gauss_n, 0);
        res.value += pr.integral;
        res.err_est += 2.0 * pr.err + 50.0 * kEps * pr.abs_sum;
        res.evaluations += pr.evals;
        res.panels += 1;
    }

    // geometric panels; length capped so a Gauss panel resolves the phase
    double L = std::max(r_ref, 1.0 / abs_s);
    double cap = std::numeric_limits<double>::infinity();
    if (s.imag() != 0.0) cap = 1.25 * quad.gauss_n / std::abs(s.imag());
    L = std::min(L, cap);
    double y0 = b;
    int pan = 0;
    for (; pan < quad.max_panels; ++pan) {
        PanelResult pr = panel_checked(f, y0, y0 + L, tol_abs, quad.gauss_n, 0);
        res.value += pr.integral;
        res.err_est += 2.0 * pr.err + 50.0 * kEps * pr.abs_sum;
        res.evaluations += pr.evals;
        y0 += L;
        // analytic tail majorant: q decays like (y + r)^{-p} times e^{-sigma y}
        double tail = 3.0 * pr.q_bare * std::exp(-sigma * y0);
        tail *= std::min(sigma > 0.0 ? 1.0 / sigma : std::numeric_limits<double>::infinity(),
                         (y0 + r_ref) / (p - 1.0));
        if (tail <= std::max(quad.rel_tol * std::abs(res.value), quad.abs_tol)) {
            res.err_est += tail;
            break;
        }
        L = std::min(L * quad.panel_growth, cap);
    }
    res.panels += pan + 1;
    if (pan >= quad.max_panels)
        throw ConvergenceError("psi_eval: panel budget exhausted before the tail bound closed");
    res.value /= s;
    res.err_est /= abs_s;
    return res;
}

} // namespace

double split_point(Cplx s, double r) {
    return std::max(0.0, 1.0 / std::abs(s) - r);
}

PsiResult psi_eval(const CVec& z, const KernelParams& params, const QuadratureSpec& quad) {
    if (quad.panel_growth <= 1.0)
        throw DomainError("psi_eval: panel_growth must exceed 1");
    transform::ZGeom zg = transform::make_zgeom(z, params.beta);
    double r_ref = std::abs(zg.r);
    if (r_ref == 0.0) throw DomainError("psi_eval: z = 0");

    double args = std::abs(std::arg(params.s));
    if (args <= M_PI_2 - quad.theta_min)
        return psi_direct(zg, r_ref, params, quad);

    // limiting absorption: evaluate at s + eps|s| and extrapolate eps -> 0
    const double eps[3] = {1e-2, 1e-3, 1e-4};
    Cplx v[3];
    double e[3];
    int evals = 0, panels = 0;
    double abs_s = std::abs(params.s);
    for (int i = 0; i < 3; ++i) {
        KernelParams shifted = params;
        shifted.s = params.s + eps[i] * abs_s;
        PsiResult r = psi_direct(zg, r_ref, shifted, quad);
        v[i] = r.value;
        e[i] = r.err_est;
        evals += r.evaluations;
        panels += r.panels;
    }
    // quadratic extrapolation in eps through the three nodes at eps -> 0
    double x0 = eps[0], x1 = eps[1], x2 = eps[2];
    double c0 = (x1 * x2) / ((x0 - x1) * (x0 - x2));
    double c1 = (x0 * x2) / ((x1 - x0) * (x1 - x2));
    double c2 = (x0 * x1) / ((x2 - x0) * (x2 - x1));
    PsiResult out;
    out.value = c0 * v[0] + c1 * v[1] + c2 * v[2];
    out.err_est = std::abs(c0) * e[0] + std::abs(c1) * e[1] + std::abs(c2) * e[2] +
                  2.0 * std::abs(out.value - v[2]);
    out.evaluations = evals;
    out.panels = panels;
    out.limiting_absorption = true;
    return out;
}

std::size_t PsiCache::KeyHash::operator()(const Key& k) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint64_t v : {k.a, k.b, k.c, k.d}) {
        h ^= v;
        h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
}

PsiResult PsiCache::eval(const CVec& z) {
    transform::ZGeom zg = transform::make_zgeom(z, params_.beta);
    auto bits = [](double x) {
        if (x == 0.0) x = 0.0; // collapse -0.0
        std::uint64_t u;
        std::memcpy(&u, &x, sizeof(u));
        return u;
    };
    Key key{bits(zg.omega_sq.real()), bits(zg.omega_sq.imag()), bits(zg.z_d.real()),
            bits(zg.z_d.imag())};
    auto it = map_.find(key);
    if (it != map_.end()) {
        ++hits_;
        return it->second;
    }
    ++misses_;
    PsiResult r = psi_eval(z, params_, quad_);
    map_.emplace(key, r);
    return r;
}

Cplx g_nu_scaled(Cplx r, const KernelParams& params) {
    Cplx sr = params.s * r;
    Cplx ratio = params.s / r;
    int tn = params.twice_nu() + 1;
    Cplx p = 1.0;
    for (int k = 0; k < tn / 2; ++k) p *= ratio;
    if (tn % 2 != 0) p *= std::sqrt(ratio);
    Cplx kb = specfun::bessel_k_scaled(params.order_lo(), sr);
    double pref = std::pow(2.0 * M_PI, -(params.nu() + 1.5));
    return pref * p * kb;
}

Cplx g_nu(Cplx r, const KernelParams& params) {
    return std::exp(-params.s * r) * g_nu_scaled(r, params);
}

Cplx sigma_nu_scaled(Cplx r, Cplx z_coord, const KernelParams& params) {
    Cplx den = z_coord + params.beta * r;
    if (std::abs(den) == 0.0) throw DomainError("sigma_nu: z + beta r = 0");
    return (z_coord - params.beta * r) / den * g_nu_scaled(r, params);
}

Cplx sigma_nu(Cplx r, Cplx z_coord, const KernelParams& params) {
    return std::exp(-params.s * r) * sigma_nu_scaled(r, z_coord, params);
}

Cplx theta_illu(const CVec& x, const CVec& y, const KernelParams& params) {
    CVec z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) z[j] = x[j] - y[j];
    auto n = geom::norm_extension_diff(z, params.beta);
    return g_nu_scaled(n.r, params);
}

Cplx theta_refl(const CVec& x, const CVec& y, const KernelParams& params) {
    CVec z(x.size());
    for (std::size_t j = 0; j + 1 < x.size(); ++j) z[j] = x[j] - y[j];
    z.back() = x.back() + y.back();
    auto n = geom::norm_extension_diff(z, params.beta);
    return sigma_nu_scaled(n.r, z.back(), params);
}

Cplx theta_imp_of_z(const CVec& z, const KernelParams& params, const QuadratureSpec& quad,
                    PsiCache* cache) {
    PsiResult psi = cache ? cache->eval(z) : psi_eval(z, params, quad);
    return -(params.beta / M_PI) * s_sq_pow(params) * psi.value;
}

Cplx theta_imp(const CVec& x, const CVec& y, const KernelParams& params,
               const QuadratureSpec& quad, PsiCache* cache) {
    CVec z(x.size());
    for (std::size_t j = 0; j + 1 < x.size(); ++j) z[j] = x[j] - y[j];
    z.back() = x.back() + y.back();
    return theta_imp_of_z(z, params, quad, cache);
}

namespace detail {

GreenComponents green_components_any(const Vec& x, const Vec& y, const KernelParams& params,
                                     const QuadratureSpec& quad, PsiCache* cache) {
    if (x.size() != y.size() || static_cast<int>(x.size()) != params.d)
        throw DomainError("green_components: dimension mismatch");
    Vec z(x.size()), zm(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) z[j] = x[j] - y[j];
    for (std::size_t j = 0; j + 1 < x.size(); ++j) zm[j] = x[j] - y[j];
    zm.back() = x.back() + y.back();
    double r = 0.0, rm = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        r += z[j] * z[j];
        rm += zm[j] * zm[j];
    }
    r = std::sqrt(r);
    rm = std::sqrt(rm);
    if (r == 0.0) throw DomainError("green_components: coincident points");

    GreenComponents out;
    out.tau_illu = r;
    out.tau_refl = rm;
    out.theta_illu = g_nu_scaled(Cplx(r), params);
    out.theta_refl = sigma_nu_scaled(Cplx(rm), Cplx(zm.back()), params);
    CVec zmc(zm.begin(), zm.end());
    PsiResult psi = cache ? cache->eval(zmc) : psi_eval(zmc, params, quad);
    out.theta_imp = -(params.beta / M_PI) * s_sq_pow(params) * psi.value;
    out.psi_err_est = psi.err_est;

    Cplx damp_i = std::exp(-params.s * r);
    Cplx damp_r = std::exp(-params.s * rm);
    out.g_illu = damp_i * out.theta_illu;
    out.g_refl = damp_r * out.theta_refl;
    out.g_imp = damp_r * out.theta_imp;
    out.g_half = out.g_illu + out.g_refl + out.g_imp;
    return out;
}

} // namespace detail

GreenComponents green_components(const Vec& x, const Vec& y, const KernelParams& params,
                                 const QuadratureSpec& quad, PsiCache* cache) {
    if (x.empty() || y.empty() || x.back() <= 0.0 || y.back() <= 0.0)
        throw DomainError("green_components: points must lie in the open upper half-space");
    return detail::green_components_any(x, y, params, quad, cache);
}

Cplx closed_form_d3_beta1(const Vec& x, const Vec& y, Cplx s) {
    if (x.size() != 3 || y.size() != 3)
        throw DomainError("closed_form_d3_beta1: requires d = 3");
    if (!(s.real() > 0.0)) throw DomainError("closed_form_d3_beta1: requires Re s > 0");
    Vec z(3), zm(3);
    for (int j = 0; j < 3; ++j) z[j] = x[j] - y[j];
    zm[0] = z[0];
    zm[1] = z[1];
    zm[2] = x[2] + y[2];
    double r = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
    double rm = std::sqrt(zm[0] * zm[0] + zm[1] * zm[1] + zm[2] * zm[2]);
    if (r == 0.0) throw DomainError("closed_form_d3_beta1: coincident points");
    Cplx u = specfun::tricomi_u11(s * (rm + zm[2]));
    return std::exp(-s * r) / (4.0 * M_PI * r) + std::exp(-s * rm) / (4.0 * M_PI * rm) -
           (s / (2.0 * M_PI)) * std::exp(-s * rm) * u;
}

namespace {

Cplx green_value(const Vec& x, const Vec& y, const KernelParams& params,
                 const QuadratureSpec& quad, PsiCache* cache) {
    return detail::green_components_any(x, y, params, quad, cache).g_half;
}

} // namespace

double residual_boundary(const Vec& x_prime, const Vec& y, const KernelParams& params,
                         const QuadratureSpec& quad, double h) {
    if (static_cast<int>(x_prime.size()) != params.d - 1)
        throw DomainError("residual_boundary: x' must have d-1 components");
    Vec x(x_prime);
    x.push_back(0.0);
    PsiCache local(params, quad);
    auto G = [&](double xd) {
        Vec xx = x;
        xx.back() = xd;
        return green_value(xx, y, params, quad, &local);
    };
    Cplx g0 = G(0.0), g1 = G(h), g2 = G(2.0 * h);
    Cplx dG = (-3.0 * g0 + 4.0 * g1 - g2) / (2.0 * h); // dG/dx_d at the wall
    // outward normal is -e_d: boundary operator is -dG/dx_d + s beta G
    Cplx bc = -dG + params.s * params.beta * g0;
    return std::abs(bc) / std::abs(params.s * params.beta * g0);
}

double residual_helmholtz(const Vec& x, const Vec& y, const KernelParams& params,
                          const QuadratureSpec& quad, double h) {
    PsiCache local(params, quad);
    Cplx center = green_value(x, y, params, quad, &local);
    Cplx lap = 0.0;
    for (int j = 0; j < params.d; ++j) {
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        lap += green_value(xp, y, params, quad, &local) - 2.0 * center +
               green_value(xm, y, params, quad, &local);
    }
    lap /= h * h;
    Cplx res = -lap + params.s * params.s * center;
    return std::abs(res) / std::abs(params.s * params.s * center);
}

} // namespace impgreen::kernel
