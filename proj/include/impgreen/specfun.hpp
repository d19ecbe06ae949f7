#ifndef IMPGREEN_SPECFUN_HPP
#define IMPGREEN_SPECFUN_HPP

#include <complex>
#include <vector>

namespace impgreen::specfun {

using Cplx = std::complex<double>;

inline constexpr double kEulerGamma = 0.57721566490153286060;

// Non-negative half-integer order mu in {0, 1/2, 1, 3/2, ...},
// stored as 2*mu to keep the invariant exact.
class BesselOrder {
  public:
    explicit BesselOrder(int twice_value);
    static BesselOrder integer(int n) { return BesselOrder(2 * n); }
    static BesselOrder half(int n) { return BesselOrder(2 * n + 1); } // n + 1/2

    double value() const { return 0.5 * twice_; }
    int twice() const { return twice_; }
    bool is_integer() const { return twice_ % 2 == 0; }
    // for half-integer orders mu = n + 1/2, the polynomial index n
    int half_index() const { return (twice_ - 1) / 2; }
    int int_order() const { return twice_ / 2; }
    BesselOrder next() const { return BesselOrder(twice_ + 2); }

  private:
    int twice_;
};

enum class MajorantKind { M, N, W };

// H_n = sum_{m=1..n} 1/m, H_0 = 0.
double harmonic_number(int n);

// e^z K_mu(z) for z off the closed negative real axis.  Half-integer
// orders use the exact reverse Bessel polynomial representation; integer
// orders select among an ascending series, a rotated Gauss-Laguerre
// integral (Re z > 0) and the large-argument expansion, whichever
// certifies the requested tolerance.
Cplx bessel_k_scaled(BesselOrder mu, Cplx z, double tol = 1e-11);

// e^z (K_mu(z) - K_{mu+1}(z)), cancellation-aware.
Cplx bessel_k_diff_scaled(BesselOrder mu, Cplx z, double tol = 1e-11);

// Piecewise majorants M_mu, N_mu, W_mu; all coincide with r^{-1/2} for r >= 1.
double majorant(MajorantKind kind, double mu, double r);

// Tricomi U(1,1,z) = e^z E_1(z) for Re z > 0.
Cplx tricomi_u11(Cplx z);

namespace detail {

// Exact integer coefficients of the reverse Bessel polynomial theta_n
// (theta_0 = 1, theta_1 = z+1, theta_{n+1} = (2n+1) theta_n + z^2 theta_{n-1}),
// lowest degree first.  Exactness requires n <= 15 in double.
const std::vector<double>& reverse_bessel_coeffs(int n);

// Individual integer-order branches for e^z K_n(z); each returns the value
// and writes an error certificate (a bound on the relative error).
Cplx k_scaled_int_series(int n, Cplx z, double& cert);
Cplx k_scaled_int_laguerre(int n, Cplx z, double& cert);
Cplx k_scaled_int_asymptotic(int n, Cplx z, double& cert);
Cplx k_diff_scaled_int_asymptotic(int n, Cplx z, double& cert);

} // namespace detail

} // namespace impgreen::specfun

#endif
