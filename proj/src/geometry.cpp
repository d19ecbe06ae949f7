#include "impgreen/geometry.hpp"

#include "impgreen/errors.hpp"

#include <algorithm>
#include <cmath>

namespace impgreen::geom {

Cuboid::Cuboid(Vec a, Vec b) : lower(std::move(a)), upper(std::move(b)) {
    if (lower.size() != upper.size() || lower.empty())
        throw DomainError("Cuboid: lower/upper dimension mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i]))
            throw DomainError("Cuboid: requires a_i < b_i on every axis");
}

double Cuboid::diameter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < lower.size(); ++i) {
        double e = upper[i] - lower[i];
        s += e * e;
    }
    return std::sqrt(s);
}

Vec Cuboid::center() const {
    Vec c(lower.size());
    for (std::size_t i = 0; i < lower.size(); ++i) c[i] = 0.5 * (lower[i] + upper[i]);
    return c;
}

CuboidMetrics cuboid_metrics(const Cuboid& b, const Cuboid& c) {
    if (b.dim() != c.dim()) throw DomainError("cuboid_metrics: dimension mismatch");
    double d2 = 0.0;
    for (int i = 0; i < b.dim(); ++i) {
        double gap = std::max({0.0, b.lower[i] - c.upper[i], c.lower[i] - b.upper[i]});
        d2 += gap * gap;
    }
    return {b.diameter(), c.diameter(), std::sqrt(d2)};
}

bool is_admissible(const Cuboid& b, const Cuboid& c, double eta) {
    if (eta <= 0.0) throw DomainError("is_admissible: eta must be positive");
    CuboidMetrics m = cuboid_metrics(b, c);
    return std::max(m.diam_source, m.diam_target) <= eta * m.dist;
}

BlockPair make_block_pair(const Cuboid& source, const Cuboid& target, double eta) {
    BlockPair p;
    p.source = source;
    p.target = target;
    p.eta = eta;
    CuboidMetrics m = cuboid_metrics(source, target);
    p.delta = m.dist;
    p.frak_d = std::max(m.diam_source, m.diam_target);
    p.admissible = is_admissible(source, target, eta);
    return p;
}

Cplx BernsteinEllipse::boundary_point(double theta) const {
    return center() + Cplx(semimajor * std::cos(theta), semiminor * std::sin(theta));
}

Cplx BernsteinEllipse::interior_point(double radial, double theta) const {
    return center() + Cplx(radial * semimajor * std::cos(theta), radial * semiminor * std::sin(theta));
}

BernsteinEllipse ellipse_from_rho(double a, double b, double rho) {
    if (!(a < b)) throw DomainError("ellipse_from_rho: requires a < b");
    double half = 0.5 * (b - a);
    if (rho < half) throw DomainError("ellipse_from_rho: rho below the collapsed value");
    BernsteinEllipse e;
    e.focus_low = a;
    e.focus_high = b;
    e.rho = rho;
    e.semimajor = (rho * rho + half * half) / (2.0 * rho);
    e.semiminor = (rho * rho - half * half) / (2.0 * rho);
    return e;
}

BernsteinEllipse ellipse_from_kappa(double a, double b, double eta, double kappa) {
    if (eta <= 0.0) throw DomainError("ellipse_from_kappa: eta must be positive");
    if (kappa < 0.0) throw DomainError("ellipse_from_kappa: kappa must be >= 0");
    double rho = 0.5 * (b - a) * (1.0 + 2.0 * kappa / eta);
    return ellipse_from_rho(a, b, rho);
}

Cplx ExtendedPoint::coord(int j) const {
    return j == axis ? complex_coord : Cplx(base[j], 0.0);
}

CVec ExtendedPoint::coords() const {
    CVec c(base.size());
    for (int j = 0; j < dim(); ++j) c[j] = coord(j);
    return c;
}

ExtensionSpec make_extension_spec(const BlockPair& pair, double kappa) {
    if (kappa < 0.0) throw DomainError("make_extension_spec: kappa must be >= 0");
    ExtensionSpec spec;
    spec.kappa = kappa;
    spec.eta = pair.eta;
    int d = pair.source.dim();
    spec.rho1.resize(d);
    spec.rho2.resize(d);
    double f = 1.0 + 2.0 * kappa / pair.eta;
    for (int j = 0; j < d; ++j) {
        spec.rho1[j] = 0.5 * (pair.source.upper[j] - pair.source.lower[j]) * f;
        spec.rho2[j] = 0.5 * (pair.target.upper[j] - pair.target.lower[j]) * f;
    }
    return spec;
}

namespace {

Vec random_point(const Cuboid& box, Rng& rng) {
    Vec p(box.dim());
    for (int j = 0; j < box.dim(); ++j) p[j] = rng.uniform(box.lower[j], box.upper[j]);
    return p;
}

ExtendedPoint extended_sample(const Cuboid& box, int axis, const BernsteinEllipse& ell,
                              Cplx coord, Rng& rng) {
    ExtendedPoint p;
    p.base = random_point(box, rng);
    p.axis = axis;
    p.complex_coord = coord;
    (void)ell;
    return p;
}

} // namespace

std::vector<std::pair<ExtendedPoint, ExtendedPoint>>
sample_extension_region(const BlockPair& pair, const ExtensionSpec& spec,
                        int n_boundary, int n_interior, std::uint64_t seed) {
    if (spec.kappa < 0.0) throw DomainError("sample_extension_region: kappa < 0");
    Rng rng(seed);
    std::vector<std::pair<ExtendedPoint, ExtendedPoint>> out;
    int d = pair.source.dim();
    out.reserve(2 * d * (n_boundary + n_interior));
    for (int j = 0; j < d; ++j) {
        BernsteinEllipse e1 = ellipse_from_rho(pair.source.lower[j], pair.source.upper[j],
                                               spec.rho1[j]);
        BernsteinEllipse e2 = ellipse_from_rho(pair.target.lower[j], pair.target.upper[j],
                                               spec.rho2[j]);
        // maximum-modulus quantities live on the ellipse boundary, so the
        // boundary samples carry the envelope; interior samples are filler
        for (int i = 0; i < n_boundary; ++i) {
            double theta = 2.0 * M_PI * i / std::max(1, n_boundary);
            out.emplace_back(extended_sample(pair.source, j, e1, e1.boundary_point(theta), rng),
                             ExtendedPoint::real(random_point(pair.target, rng)));
            out.emplace_back(ExtendedPoint::real(random_point(pair.source, rng)),
                             extended_sample(pair.target, j, e2, e2.boundary_point(theta), rng));
        }
        for (int i = 0; i < n_interior; ++i) {
            double rad = rng.uniform();
            double theta = rng.uniform(0.0, 2.0 * M_PI);
            out.emplace_back(extended_sample(pair.source, j, e1, e1.interior_point(rad, theta), rng),
                             ExtendedPoint::real(random_point(pair.target, rng)));
            rad = rng.uniform();
            theta = rng.uniform(0.0, 2.0 * M_PI);
            out.emplace_back(ExtendedPoint::real(random_point(pair.source, rng)),
                             extended_sample(pair.target, j, e2, e2.interior_point(rad, theta), rng));
        }
    }
    return out;
}

Vec reflect(const Vec& y) {
    Vec r = y;
    r.back() = -r.back();
    return r;
}

ExtendedPoint reflect(const ExtendedPoint& y) {
    ExtendedPoint r = y;
    r.base.back() = -r.base.back();
    if (r.axis == r.dim() - 1) r.complex_coord = -r.complex_coord;
    return r;
}

Cplx principal_sqrt(Cplx z) {
    if (z == Cplx(0.0)) throw DomainError("principal_sqrt: z = 0");
    if (z.real() < 0.0) throw DomainError("principal_sqrt: requires Re z >= 0");
    return std::sqrt(z); // std::sqrt is the principal branch
}

NormExtension norm_extension_diff(const CVec& z, double beta) {
    Cplx q = 0.0;
    for (const Cplx& c : z) q += c * c;
    if (!(q.real() > 0.0))
        throw RegimeError("norm_extension: Re<x-y,x-y> <= 0 (outside certified kappa range)");
    NormExtension n;
    n.r = principal_sqrt(q);
    n.r_plus = n.r + beta * z.back();
    return n;
}

NormExtension norm_extension(const ExtendedPoint& x, const ExtendedPoint& y, double beta) {
    if (x.dim() != y.dim()) throw DomainError("norm_extension: dimension mismatch");
    CVec z(x.dim());
    for (int j = 0; j < x.dim(); ++j) z[j] = x.coord(j) - y.coord(j);
    return norm_extension_diff(z, beta);
}

double modulus_norm(const ExtendedPoint& x, const ExtendedPoint& y) {
    double s = 0.0;
    for (int j = 0; j < x.dim(); ++j) {
        double m = std::abs(x.coord(j) - y.coord(j));
        s += m * m;
    }
    return std::sqrt(s);
}

Vec nearest_real_point(const ExtendedPoint& p, const Cuboid& box) {
    Vec out = p.base;
    if (!p.is_real()) {
        double re = p.complex_coord.real();
        out[p.axis] = std::clamp(re, box.lower[p.axis], box.upper[p.axis]);
    }
    return out;
}

} // namespace impgreen::geom
