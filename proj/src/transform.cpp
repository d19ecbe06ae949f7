#include "impgreen/transform.hpp"

#include "impgreen/errors.hpp"

#include <cmath>

namespace impgreen::transform {

KernelParams::KernelParams(Cplx s_, double beta_, int d_) : s(s_), beta(beta_), d(d_) {
    if (s == Cplx(0.0) || s.real() < 0.0)
        throw DomainError("KernelParams: frequency must lie in Re s >= 0, s != 0");
    if (beta <= 0.0) throw DomainError("KernelParams: impedance beta must be positive");
    if (d < 2) throw DomainError("KernelParams: dimension must be >= 2");
}

ZGeom make_zgeom(const CVec& z, double beta) {
    ZGeom g;
    g.beta = beta;
    g.omega_sq = 0.0;
    for (std::size_t j = 0; j + 1 < z.size(); ++j) g.omega_sq += z[j] * z[j];
    g.z_d = z.back();
    auto n = geom::norm_extension_diff(z, beta);
    g.r = n.r;
    g.r_plus = n.r_plus;
    return g;
}

Cplx chi_eval(const ZGeom& g, double y) {
    double b = g.beta;
    Cplx r2 = g.omega_sq + g.z_d * g.z_d; // = r^2 exactly
    return y * y + g.z_d * g.z_d + b * b * r2 + 2.0 * y * g.r + 2.0 * b * y * g.z_d +
           2.0 * b * g.r * g.z_d;
}

Cplx chi_eval(const CVec& z, double y, double beta) {
    if (y < 0.0) throw DomainError("chi_eval: y must be >= 0");
    return chi_eval(make_zgeom(z, beta), y);
}

TransformState mu_t_eval(const ZGeom& g, double y, const KernelParams& params) {
    if (y < 0.0) throw DomainError("mu_t_eval: y must be >= 0");
    double b = params.beta;
    TransformState st;
    st.omega_sq = g.omega_sq;
    st.a = y + g.r_plus;
    st.chi = chi_eval(g, y);
    if (!(st.chi.real() > 0.0))
        throw RegimeError("mu_t_eval: Re chi <= 0 (kappa outside certified range)");
    st.sqrt_chi = geom::principal_sqrt(st.chi);
    Cplx den = b * st.a + st.sqrt_chi;
    if (std::abs(den) == 0.0)
        throw RegimeError("mu_t_eval: beta*a + sqrt(chi) vanished");
    st.mu_tilde = (st.a * st.sqrt_chi + b * g.omega_sq) / den;
    st.t = (st.a * st.a - g.omega_sq) / den;
    st.dmu_dy = (st.a * st.a - g.omega_sq) / (st.sqrt_chi * den);
    st.dt_dy = st.mu_tilde / (st.t + b * st.mu_tilde);
    return st;
}

TransformState mu_t_eval(const CVec& z, double y, const KernelParams& params) {
    return mu_t_eval(make_zgeom(z, params.beta), y, params);
}

double y_of_t(const Vec& z, double t, double beta) {
    double zd = z.back();
    if (t < zd) throw DomainError("y_of_t: requires t >= z_d");
    double op2 = 0.0;
    for (std::size_t j = 0; j + 1 < z.size(); ++j) op2 += z[j] * z[j];
    double r = std::sqrt(op2 + zd * zd);
    double rp = r + beta * zd;
    return -rp + beta * t + std::sqrt(op2 + t * t);
}

Cplx power_nu_half(Cplx w, const KernelParams& params) {
    if (!(w.real() > 0.0))
        throw RegimeError("power_nu_half: Re(s mu) <= 0 would cross the branch cut");
    int tn = params.twice_nu() + 1; // 2(nu + 1/2)
    Cplx p = 1.0;
    for (int k = 0; k < tn / 2; ++k) p *= w;
    if (tn % 2 != 0) p *= std::sqrt(w);
    return p;
}

Cplx q_eval(const ZGeom& g, double y, const KernelParams& params) {
    const double b = params.beta;
    TransformState st = mu_t_eval(g, y, params);
    Cplx w = params.s * st.mu_tilde;
    Cplx pw = power_nu_half(w, params);
    Cplx kb = specfun::bessel_k_scaled(params.order_lo(), w);
    Cplx kd = specfun::bessel_k_diff_scaled(params.order_lo(), w);
    Cplx tpm = st.t + b * st.mu_tilde; // = sqrt(chi)
    // mu + beta t = a, so the qI bracket is mu' - mu a / chi
    Cplx qI = params.s * (st.dmu_dy - st.mu_tilde * st.a / st.chi) * kb / (tpm * pw);
    Cplx qII = params.s * params.s * st.dmu_dy * (st.mu_tilde / tpm) * kd / pw;
    return qI + qII;
}

Cplx q_eval(const CVec& z, double y, const KernelParams& params) {
    return q_eval(make_zgeom(z, params.beta), y, params);
}

} // namespace impgreen::transform
