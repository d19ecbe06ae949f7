#ifndef IMPGREEN_TRANSFORM_HPP
#define IMPGREEN_TRANSFORM_HPP

#include "impgreen/geometry.hpp"
#include "impgreen/specfun.hpp"

#include <complex>
#include <vector>

namespace impgreen::transform {

using Cplx = std::complex<double>;
using Vec = geom::Vec;
using CVec = geom::CVec;

// Frequency, impedance and dimension; nu = (d-3)/2 is derived.
struct KernelParams {
    Cplx s;
    double beta = 1.0;
    int d = 3;

    KernelParams() = default;
    KernelParams(Cplx s_, double beta_, int d_);

    int twice_nu() const { return d - 3; }
    double nu() const { return 0.5 * (d - 3); }
    specfun::BesselOrder order_lo() const { return specfun::BesselOrder(d - 2); } // nu + 1/2
    specfun::BesselOrder order_hi() const { return specfun::BesselOrder(d); }     // nu + 3/2
};

// Difference-vector quantities that stay fixed along the y-integration.
struct ZGeom {
    Cplx omega_sq; // <z', z'> over the first d-1 coordinates
    Cplx z_d;
    Cplx r;      // holomorphic norm extension
    Cplx r_plus; // r + beta z_d
    double beta;
};

ZGeom make_zgeom(const CVec& z, double beta);
inline ZGeom make_zgeom(const Vec& z, double beta) {
    return make_zgeom(CVec(z.begin(), z.end()), beta);
}

struct TransformState {
    Cplx a;        // y + r_plus
    Cplx omega_sq;
    Cplx chi;      // a^2 - (1-beta^2) omega^2
    Cplx sqrt_chi;
    Cplx mu_tilde;
    Cplx t;
    Cplx dmu_dy;
    Cplx dt_dy;
};

// chi by the expanded form y^2 + z_d^2 + beta^2 r^2 + 2 y r + 2 beta y z_d
// + 2 beta r z_d (no cancellation for beta near 1).
Cplx chi_eval(const ZGeom& g, double y);
Cplx chi_eval(const CVec& z, double y, double beta);

// mu_tilde, t and their y-derivatives at a point of the transform domain.
// Requires Re chi > 0; throws RegimeError otherwise.
TransformState mu_t_eval(const ZGeom& g, double y, const KernelParams& params);
TransformState mu_t_eval(const CVec& z, double y, const KernelParams& params);

// Inverse map on the real domain: y = -r_+ + beta t + sqrt(||z'||^2 + t^2),
// strictly increasing on [z_d, inf).
double y_of_t(const Vec& z, double t, double beta);

// Integrand q_nu = q^I + q^II, assembled from exponentially scaled
// Macdonald values only.
Cplx q_eval(const ZGeom& g, double y, const KernelParams& params);
Cplx q_eval(const CVec& z, double y, const KernelParams& params);

// (s mu)^(nu + 1/2) on the principal branch; hard error if Re(s mu) <= 0.
Cplx power_nu_half(Cplx w, const KernelParams& params);

} // namespace impgreen::transform

#endif
