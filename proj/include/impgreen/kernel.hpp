#ifndef IMPGREEN_KERNEL_HPP
#define IMPGREEN_KERNEL_HPP

#include "impgreen/transform.hpp"

#include <complex>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace impgreen::kernel {

using Cplx = std::complex<double>;
using Vec = geom::Vec;
using CVec = geom::CVec;
using transform::KernelParams;

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_panels = 64;
    double panel_growth = 2.0; // must be > 1
    // direct quadrature only for |arg s| <= pi/2 - theta_min; beyond that the
    // value is the limiting-absorption extrapolation over s + eps|s|
    double theta_min = 0.05;
    int gauss_n = 24;
};

// b = max{0, 1/|s| - r}: switch point between the small-|s(y+r)| and
// decaying regimes of the integrand majorant.
double split_point(Cplx s, double r);

struct PsiResult {
    Cplx value = 0.0;
    double err_est = 0.0; // conservative absolute error estimate
    int evaluations = 0;
    int panels = 0;
    bool limiting_absorption = false;
};

// psi_{nu,s}(z) = (1/s) int_0^inf e^{-s y} q_nu(z, y) dy by panelized
// Gauss quadrature with an analytic tail majorant.
PsiResult psi_eval(const CVec& z, const KernelParams& params, const QuadratureSpec& quad);
inline PsiResult psi_eval(const Vec& z, const KernelParams& params, const QuadratureSpec& quad) {
    return psi_eval(CVec(z.begin(), z.end()), params, quad);
}

// Memoizes psi over the rotational invariants (omega^2, z_d) of the
// difference vector; repeated tensor-node evaluations hit the cache.
class PsiCache {
  public:
    PsiCache(KernelParams params, QuadratureSpec quad)
        : params_(params), quad_(quad) {}

    PsiResult eval(const CVec& z);
    std::size_t size() const { return map_.size(); }
    long hits() const { return hits_; }
    long misses() const { return misses_; }

  private:
    struct Key {
        std::uint64_t a, b, c, d;
        bool operator==(const Key& o) const {
            return a == o.a && b == o.b && c == o.c && d == o.d;
        }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };
    KernelParams params_;
    QuadratureSpec quad_;
    std::unordered_map<Key, PsiResult, KeyHash> map_;
    long hits_ = 0, misses_ = 0;
};

// Full-space kernel g_nu(r) = (2 pi)^{-nu-3/2} (s/r)^{nu+1/2} K_{nu+1/2}(s r);
// the `scaled` variant carries e^{s r} g_nu(r) (no decaying exponential).
Cplx g_nu_scaled(Cplx r, const KernelParams& params);
Cplx g_nu(Cplx r, const KernelParams& params);

// sigma_nu(r, z) = ((z - beta r)/(z + beta r)) g_nu(r)
Cplx sigma_nu_scaled(Cplx r, Cplx z_coord, const KernelParams& params);
Cplx sigma_nu(Cplx r, Cplx z_coord, const KernelParams& params);

// Slowly varying factors on (possibly extended) point pairs.
Cplx theta_illu(const CVec& x, const CVec& y, const KernelParams& params);
Cplx theta_refl(const CVec& x, const CVec& y, const KernelParams& params);
Cplx theta_imp(const CVec& x, const CVec& y, const KernelParams& params,
               const QuadratureSpec& quad, PsiCache* cache = nullptr);
// -(beta/pi) (s^2/(2 pi))^{nu+1/2} psi(z), z = x - Ry
Cplx theta_imp_of_z(const CVec& z, const KernelParams& params,
                    const QuadratureSpec& quad, PsiCache* cache = nullptr);

struct GreenComponents {
    Cplx g_illu, g_refl, g_imp, g_half;
    Cplx theta_illu, theta_refl, theta_imp;
    double tau_illu, tau_refl;
    double psi_err_est = 0.0;
};

// Assembly on H_+ x H_+ (x_d > 0, y_d > 0, x != y).
GreenComponents green_components(const Vec& x, const Vec& y, const KernelParams& params,
                                 const QuadratureSpec& quad, PsiCache* cache = nullptr);

// d = 3, beta = 1 closed form: direct + image + Tricomi term.
Cplx closed_form_d3_beta1(const Vec& x, const Vec& y, Cplx s);

// |dG/dn_x + s beta G| / |s beta G| at x = (x', 0), one-sided second-order
// differences into H_+.
double residual_boundary(const Vec& x_prime, const Vec& y, const KernelParams& params,
                         const QuadratureSpec& quad, double h);

// |-Lap_x G + s^2 G| / |s^2 G| away from the source, centered differences.
double residual_helmholtz(const Vec& x, const Vec& y, const KernelParams& params,
                          const QuadratureSpec& quad, double h);

namespace detail {
// Evaluation without the open-half-space gate (boundary points allowed);
// used by the finite-difference residual probes.
GreenComponents green_components_any(const Vec& x, const Vec& y, const KernelParams& params,
                                     const QuadratureSpec& quad, PsiCache* cache);
} // namespace detail

} // namespace impgreen::kernel

#endif
