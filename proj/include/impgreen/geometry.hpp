#ifndef IMPGREEN_GEOMETRY_HPP
#define IMPGREEN_GEOMETRY_HPP

#include "impgreen/rng.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace impgreen::geom {

using Cplx = std::complex<double>;
using Vec = std::vector<double>;
using CVec = std::vector<Cplx>;

// Axes-parallel cuboid [a,b] = X_j [a_j, b_j], a_j < b_j.
struct Cuboid {
    Vec lower;
    Vec upper;

    Cuboid() = default;
    Cuboid(Vec a, Vec b);
    int dim() const { return static_cast<int>(lower.size()); }
    double diameter() const;
    Vec center() const;
};

struct CuboidMetrics {
    double diam_source;
    double diam_target;
    double dist;
};

CuboidMetrics cuboid_metrics(const Cuboid& b, const Cuboid& c);

// max{diam B, diam C} <= eta * dist(B, C)
bool is_admissible(const Cuboid& b, const Cuboid& c, double eta);

// Pair of cuboids with admissibility metadata.
struct BlockPair {
    Cuboid source; // [a,b]
    Cuboid target; // [c,d]
    double eta = 2.0;
    double delta = 0.0;  // dist
    double frak_d = 0.0; // max diameter
    bool admissible = false;
};

BlockPair make_block_pair(const Cuboid& source, const Cuboid& target, double eta);

// Closed ellipse with foci a_j, b_j; rho is the sum of the semi-axes.
struct BernsteinEllipse {
    double focus_low = 0.0;
    double focus_high = 0.0;
    double rho = 0.0;
    double semimajor = 0.0;
    double semiminor = 0.0;

    Cplx center() const { return {0.5 * (focus_low + focus_high), 0.0}; }
    // boundary parameterization center + a*cos(theta) + i b*sin(theta)
    Cplx boundary_point(double theta) const;
    Cplx interior_point(double radial, double theta) const; // radial in [0,1]
};

BernsteinEllipse ellipse_from_rho(double a, double b, double rho);
// rho = ((b-a)/2)(1 + 2 kappa/eta); kappa = 0 collapses to the interval
BernsteinEllipse ellipse_from_kappa(double a, double b, double eta, double kappa);

// Spatial point in which at most one coordinate is complex.
struct ExtendedPoint {
    Vec base;      // real coordinates
    int axis = -1; // index of the complex coordinate, -1 when fully real
    Cplx complex_coord = 0.0;

    static ExtendedPoint real(Vec v) { return {std::move(v), -1, 0.0}; }
    bool is_real() const { return axis < 0; }
    int dim() const { return static_cast<int>(base.size()); }
    Cplx coord(int j) const;
    CVec coords() const;
};

// Relative extension sizes per axis for a block pair.
struct ExtensionSpec {
    double kappa = 0.0;
    double eta = 1.0;
    Vec rho1; // per-axis semi-axes sums for the source cuboid
    Vec rho2; // and for the target cuboid
};

ExtensionSpec make_extension_spec(const BlockPair& pair, double kappa);

// Samples point pairs covering all 2d constituent sets of the one-axis
// extension region: per axis, ellipse-extended x against real y and real
// x against ellipse-extended y.  Boundary points are uniform in the
// ellipse parameter; interior points are random (ellipse interior plus
// real block fill).  Deterministic in the seed.
std::vector<std::pair<ExtendedPoint, ExtendedPoint>>
sample_extension_region(const BlockPair& pair, const ExtensionSpec& spec,
                        int n_boundary, int n_interior, std::uint64_t seed);

// (y', -y_d)
Vec reflect(const Vec& y);
ExtendedPoint reflect(const ExtendedPoint& y);

// sqrt(|z|) e^{i arg(z)/2} for Re z >= 0, z != 0
Cplx principal_sqrt(Cplx z);

struct NormExtension {
    Cplx r;
    Cplx r_plus;
};

// Holomorphic extension r = sqrt(<x-y, x-y>) (componentwise bilinear form)
// and r_+ = r + beta (x-y)_d.  Requires Re<x-y,x-y> > 0.
NormExtension norm_extension(const ExtendedPoint& x, const ExtendedPoint& y, double beta);
NormExtension norm_extension_diff(const CVec& z, double beta);

// Euclidean norm of x - y with the complex coordinate entering by modulus.
double modulus_norm(const ExtendedPoint& x, const ExtendedPoint& y);

// Real comparison point: the complex coordinate's real part clamped to the
// cuboid side (the distance-minimizing point of the extended coordinate).
Vec nearest_real_point(const ExtendedPoint& p, const Cuboid& box);

} // namespace impgreen::geom

#endif
