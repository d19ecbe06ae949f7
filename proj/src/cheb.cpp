#include "impgreen/cheb.hpp"

#include "impgreen/errors.hpp"
#include "impgreen/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace impgreen::cheb {

std::vector<double> cheb_nodes(int m, double a, double b) {
    if (m < 0) throw DomainError("cheb_nodes: degree must be >= 0");
    if (!(a < b)) throw DomainError("cheb_nodes: requires a < b");
    std::vector<double> x(m + 1);
    for (int i = 0; i <= m; ++i) {
        double hat = std::cos((2.0 * i + 1.0) * M_PI / (2.0 * m + 2.0));
        x[i] = 0.5 * (a + b) + 0.5 * (b - a) * hat;
    }
    return x;
}

namespace {

std::vector<double> bary_weights(int m) {
    // barycentric weights for first-kind points: (-1)^i sin((2i+1)pi/(2m+2))
    std::vector<double> w(m + 1);
    for (int i = 0; i <= m; ++i) {
        double s = std::sin((2.0 * i + 1.0) * M_PI / (2.0 * m + 2.0));
        w[i] = (i % 2 == 0) ? s : -s;
    }
    return w;
}

long ipow_l(long b, int e) {
    long r = 1;
    for (int k = 0; k < e; ++k) r *= b;
    return r;
}

} // namespace

ChebyshevInterpolant::ChebyshevInterpolant(geom::BlockPair pair, int degree)
    : pair_(std::move(pair)), m_(degree), d_(pair_.source.dim()) {
    if (degree < 0) throw DomainError("ChebyshevInterpolant: degree must be >= 0");
    nodes_src_.resize(d_);
    nodes_tgt_.resize(d_);
    for (int j = 0; j < d_; ++j) {
        nodes_src_[j] = cheb_nodes(m_, pair_.source.lower[j], pair_.source.upper[j]);
        nodes_tgt_[j] = cheb_nodes(m_, pair_.target.lower[j], pair_.target.upper[j]);
    }
    bary_w_ = bary_weights(m_);
    n_side_ = ipow_l(m_ + 1, d_);
}

void ChebyshevInterpolant::assign_values(const std::vector<Cplx>& values) {
    if (static_cast<long>(values.size()) != n_side_ * n_side_)
        throw DomainError("assign_values: wrong tensor size");
    re_.resize(values.size());
    im_.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        re_[i] = values[i].real();
        im_[i] = values[i].imag();
    }
}

Cplx ChebyshevInterpolant::value_at(long mu_flat, long nu_flat) const {
    std::size_t idx = static_cast<std::size_t>(mu_flat) * n_side_ + nu_flat;
    return {re_[idx], im_[idx]};
}

void ChebyshevInterpolant::decode(long flat, std::vector<int>& digits) const {
    digits.resize(d_);
    for (int j = d_ - 1; j >= 0; --j) {
        digits[j] = static_cast<int>(flat % (m_ + 1));
        flat /= (m_ + 1);
    }
}

void ChebyshevInterpolant::cardinals(int axis, bool source_side, Cplx x,
                                     std::vector<Cplx>& out) const {
    const std::vector<double>& xi = source_side ? nodes_src_[axis] : nodes_tgt_[axis];
    out.assign(m_ + 1, Cplx(0.0));
    for (int i = 0; i <= m_; ++i) {
        if (x == Cplx(xi[i])) { // exact node hit
            out[i] = 1.0;
            return;
        }
    }
    Cplx denom = 0.0;
    for (int i = 0; i <= m_; ++i) {
        Cplx t = bary_w_[i] / (x - xi[i]);
        out[i] = t;
        denom += t;
    }
    for (int i = 0; i <= m_; ++i) out[i] /= denom;
}

namespace {

// out[i] = sum_k in[i*K + k] c[k]  (contracts the fastest-varying axis)
void contract_last_axis(const std::vector<double>& re_in, const std::vector<double>& im_in,
                        std::size_t n_out, int K, const std::vector<Cplx>& c,
                        std::vector<double>& re_out, std::vector<double>& im_out) {
    re_out.assign(n_out, 0.0);
    im_out.assign(n_out, 0.0);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double* rp = re_in.data() + i * K;
        const double* ip = im_in.data() + i * K;
        double ar = 0.0, ai = 0.0;
        for (int k = 0; k < K; ++k) {
            double cr = c[k].real(), ci = c[k].imag();
            ar += rp[k] * cr - ip[k] * ci;
            ai += rp[k] * ci + ip[k] * cr;
        }
        re_out[i] = ar;
        im_out[i] = ai;
    }
}

} // namespace

Cplx ChebyshevInterpolant::eval(const CVec& x, const CVec& y) const {
    std::vector<Cplx> card;
    std::vector<double> ra = re_, ia = im_, rb, ib;
    std::size_t n = ra.size();
    // target axes are the fastest block, contract them first
    for (int j = d_ - 1; j >= 0; --j) {
        cardinals(j, false, y[j], card);
        n /= (m_ + 1);
        contract_last_axis(ra, ia, n, m_ + 1, card, rb, ib);
        ra.swap(rb);
        ia.swap(ib);
    }
    for (int j = d_ - 1; j >= 0; --j) {
        cardinals(j, true, x[j], card);
        n /= (m_ + 1);
        contract_last_axis(ra, ia, n, m_ + 1, card, rb, ib);
        ra.swap(rb);
        ia.swap(ib);
    }
    return {ra[0], ia[0]};
}

Cplx ChebyshevInterpolant::eval(const Vec& x, const Vec& y) const {
    return eval(CVec(x.begin(), x.end()), CVec(y.begin(), y.end()));
}

void ChebyshevInterpolant::contract_source(const Vec& x, std::vector<Cplx>& w) const {
    std::vector<Cplx> card;
    std::vector<double> ra = re_, ia = im_, rb, ib;
    std::size_t n = ra.size();
    // source axes form the slow block; peel them from the outside
    for (int j = 0; j < d_; ++j) {
        cardinals(j, true, Cplx(x[j]), card);
        std::size_t n_rest = n / (m_ + 1);
        rb.assign(n_rest, 0.0);
        ib.assign(n_rest, 0.0);
        for (int k = 0; k <= m_; ++k) {
            const double* rp = ra.data() + static_cast<std::size_t>(k) * n_rest;
            const double* ip = ia.data() + static_cast<std::size_t>(k) * n_rest;
            double cr = card[k].real(), ci = card[k].imag();
            for (std::size_t i = 0; i < n_rest; ++i) {
                rb[i] += rp[i] * cr - ip[i] * ci;
                ib[i] += rp[i] * ci + ip[i] * cr;
            }
        }
        ra.swap(rb);
        ia.swap(ib);
        n = n_rest;
    }
    w.resize(n_side_);
    for (long i = 0; i < n_side_; ++i)
        w[i] = {ra[static_cast<std::size_t>(i)], ia[static_cast<std::size_t>(i)]};
}

Cplx ChebyshevInterpolant::contract_target(const std::vector<Cplx>& w, const Vec& y) const {
    std::vector<Cplx> card;
    std::vector<double> ra(w.size()), ia(w.size()), rb, ib;
    for (std::size_t i = 0; i < w.size(); ++i) {
        ra[i] = w[i].real();
        ia[i] = w[i].imag();
    }
    std::size_t n = w.size();
    for (int j = d_ - 1; j >= 0; --j) {
        cardinals(j, false, Cplx(y[j]), card);
        n /= (m_ + 1);
        contract_last_axis(ra, ia, n, m_ + 1, card, rb, ib);
        ra.swap(rb);
        ia.swap(ib);
    }
    return {ra[0], ia[0]};
}

ChebyshevInterpolant build_interpolant(const PairTarget& target, const geom::BlockPair& pair,
                                       int degree) {
    ChebyshevInterpolant interp(pair, degree);
    const int d = interp.dim();
    const int n = degree + 1;
    const long n_side = interp.side_count();
    Vec x(d), y(d);
    std::vector<int> mu(d), nu(d);
    std::vector<Cplx> values(static_cast<std::size_t>(n_side) * n_side);
    for (long mf = 0; mf < n_side; ++mf) {
        interp.decode(mf, mu);
        for (int j = 0; j < d; ++j) x[j] = interp.nodes_source(j)[mu[j]];
        for (long nf = 0; nf < n_side; ++nf) {
            interp.decode(nf, nu);
            for (int j = 0; j < d; ++j) y[j] = interp.nodes_target(j)[nu[j]];
            values[static_cast<std::size_t>(mf) * n_side + nf] = target(x, y);
        }
    }
    (void)n;
    interp.assign_values(values);
    return interp;
}

std::string family_name(Family f) {
    switch (f) {
        case Family::Illu: return "illu";
        case Family::Refl: return "refl";
        case Family::Imp: return "imp";
        case Family::GHalf: return "ghalf";
    }
    return "?";
}

double certified_kappa_bound(Family f, double beta, double c_ell) {
    if (f == Family::Illu || f == Family::Refl) return 1.0 / 6.0;
    return beta * beta / (c_ell * (1.0 + beta) * (1.0 + beta) * (1.0 + beta));
}

namespace {

double lambda_reference(Family f, double nu, double x) {
    if (x >= 1.0) return std::pow(x, -nu - 1.0);
    if (nu >= 0.0) return std::pow(x, -2.0 * nu - 1.0);
    double l = std::log(x);
    if (f == Family::Imp || f == Family::GHalf) return 1.0 + l * l;
    return 1.0 + std::abs(l);
}

PairTarget make_family_target(Family f, const KernelParams& params, const QuadratureSpec& quad,
                              kernel::PsiCache& cache) {
    switch (f) {
        case Family::Illu:
            return [params](const Vec& x, const Vec& y) {
                return kernel::theta_illu(CVec(x.begin(), x.end()), CVec(y.begin(), y.end()),
                                          params);
            };
        case Family::Refl:
            return [params](const Vec& x, const Vec& y) {
                return kernel::theta_refl(CVec(x.begin(), x.end()), CVec(y.begin(), y.end()),
                                          params);
            };
        case Family::Imp:
            return [params, quad, &cache](const Vec& x, const Vec& y) {
                return kernel::theta_imp(CVec(x.begin(), x.end()), CVec(y.begin(), y.end()),
                                         params, quad, &cache);
            };
        case Family::GHalf:
            return [params, quad, &cache](const Vec& x, const Vec& y) {
                return kernel::green_components(x, y, params, quad, &cache).g_half;
            };
    }
    throw DomainError("unknown family");
}

Vec random_point_in(const geom::Cuboid& box, Rng& rng) {
    Vec p(box.dim());
    for (int j = 0; j < box.dim(); ++j) p[j] = rng.uniform(box.lower[j], box.upper[j]);
    return p;
}

} // namespace

RateReport convergence_study(Family family, const geom::BlockPair& pair,
                             const KernelParams& params, double kappa,
                             const std::vector<int>& degrees, const StudyConfig& cfg) {
    if (!pair.admissible)
        throw RegimeError("convergence_study: block pair is not eta-admissible");
    double bound = certified_kappa_bound(family, params.beta, cfg.c_ell);
    if (!(kappa >= 0.0) || kappa >= bound)
        throw RegimeError("convergence_study: kappa outside the certified range [0, " +
                          std::to_string(bound) + ")");
    RateReport rep;
    rep.family = family;
    rep.kappa = kappa;
    rep.eta = pair.eta;
    rep.degrees = degrees;
    rep.predicted_gamma = 1.0 + 2.0 * kappa / pair.eta;
    double g = rep.predicted_gamma;
    int d = pair.source.dim();
    rep.theory_constant = std::sqrt(static_cast<double>(d)) * std::pow(2.0, d + 1.5) /
                          std::pow(1.0 - 1.0 / (g * g), d);
    double sd = std::abs(params.s) * pair.delta;
    rep.reference_value = lambda_reference(family, params.nu(), sd);

    kernel::PsiCache cache(params, cfg.quad);
    PairTarget target = make_family_target(family, params, cfg.quad, cache);

    // fixed random sample pool; true values computed once
    Rng rng(cfg.seed);
    std::vector<Vec> xs, ys;
    std::vector<Cplx> truth(cfg.n_samples);
    xs.reserve(cfg.n_samples);
    ys.reserve(cfg.n_samples);
    for (int i = 0; i < cfg.n_samples; ++i) {
        xs.push_back(random_point_in(pair.source, rng));
        ys.push_back(random_point_in(pair.target, rng));
    }
    for (int i = 0; i < cfg.n_samples; ++i) {
        truth[i] = target(xs[i], ys[i]);
        rep.sup_scale = std::max(rep.sup_scale, std::abs(truth[i]));
    }

    rep.errors.resize(degrees.size());
    for (std::size_t k = 0; k < degrees.size(); ++k) {
        ChebyshevInterpolant interp = build_interpolant(target, pair, degrees[k]);
        double err = 0.0;
        for (int i = 0; i < cfg.n_samples; ++i)
            err = std::max(err, std::abs(truth[i] - interp.eval(xs[i], ys[i])));
        rep.errors[k] = err;
    }

    // evaluation noise floor: roundoff plus quadrature noise for the
    // integral-backed families
    double floor = 2e3 * 2.2e-16 * rep.sup_scale;
    if (family == Family::Imp || family == Family::GHalf)
        floor = std::max(floor, 30.0 * cfg.quad.rel_tol * rep.sup_scale);

    // fit the tail: skip the first third of the degree list, drop floored
    // errors, extend backwards if too few points remain
    std::size_t start = degrees.size() / 3;
    std::vector<std::size_t> keep;
    for (std::size_t k = start; k < degrees.size(); ++k)
        if (rep.errors[k] > floor) keep.push_back(k);
    if (keep.size() < 3) {
        keep.clear();
        for (std::size_t k = 0; k < degrees.size(); ++k)
            if (rep.errors[k] > floor) keep.push_back(k);
    }
    if (keep.size() < 2)
        for (std::size_t k = start; k < degrees.size(); ++k) keep.push_back(k);

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k : keep) {
        double mx = degrees[k];
        double ly = std::log(std::max(rep.errors[k], 1e-300));
        sx += mx;
        sy += ly;
        sxx += mx * mx;
        sxy += mx * ly;
    }
    double nfit = static_cast<double>(keep.size());
    double slope = (nfit * sxy - sx * sy) / (nfit * sxx - sx * sx);
    rep.fitted_rate = std::exp(-slope);
    rep.fit_first = degrees[keep.front()];
    rep.fit_last = degrees[keep.back()];

    double tau = 2.0 * params.nu() + 1.0;
    double env_scale = std::pow(std::abs(params.s), tau) * rep.reference_value *
                       rep.theory_constant;
    for (std::size_t k = 0; k < degrees.size(); ++k)
        rep.envelope_constant = std::max(
            rep.envelope_constant, rep.errors[k] / (env_scale * std::pow(g, -degrees[k])));

    rep.pass = rep.fitted_rate >= std::pow(rep.predicted_gamma, 0.9);
    return rep;
}

namespace {

struct CellSet {
    std::vector<geom::Cuboid> boxes;
    std::vector<std::vector<int>> members; // point indices per cell
};

CellSet partition_points(const std::vector<Vec>& pts, int grid_n) {
    int d = static_cast<int>(pts.front().size());
    Vec lo = pts.front(), hi = pts.front();
    for (const Vec& p : pts)
        for (int j = 0; j < d; ++j) {
            lo[j] = std::min(lo[j], p[j]);
            hi[j] = std::max(hi[j], p[j]);
        }
    for (int j = 0; j < d; ++j) {
        double pad = 1e-9 * std::max(1.0, std::abs(hi[j]) + std::abs(lo[j])) +
                     1e-12; // keep cells non-degenerate
        lo[j] -= pad;
        hi[j] += pad;
    }
    long n_cells = ipow_l(grid_n, d);
    CellSet cs;
    cs.members.resize(n_cells);
    std::vector<int> idx(d);
    for (std::size_t p = 0; p < pts.size(); ++p) {
        long flat = 0;
        for (int j = 0; j < d; ++j) {
            double t = (pts[p][j] - lo[j]) / (hi[j] - lo[j]);
            int c = std::min(grid_n - 1, static_cast<int>(t * grid_n));
            flat = flat * grid_n + c;
        }
        cs.members[flat].push_back(static_cast<int>(p));
    }
    cs.boxes.reserve(n_cells);
    for (long c = 0; c < n_cells; ++c) {
        Vec a(d), b(d);
        long rem = c;
        for (int j = d - 1; j >= 0; --j) {
            int cj = static_cast<int>(rem % grid_n);
            rem /= grid_n;
            a[j] = lo[j] + (hi[j] - lo[j]) * cj / grid_n;
            b[j] = lo[j] + (hi[j] - lo[j]) * (cj + 1) / grid_n;
        }
        cs.boxes.emplace_back(a, b);
    }
    return cs;
}

Cplx entry_refl_imp(const Vec& x, const Vec& y, const KernelParams& params,
                    const QuadratureSpec& quad, kernel::PsiCache* cache) {
    Vec zm(x.size());
    for (std::size_t j = 0; j + 1 < x.size(); ++j) zm[j] = x[j] - y[j];
    zm.back() = x.back() + y.back();
    double rm = 0.0;
    for (double c : zm) rm += c * c;
    rm = std::sqrt(rm);
    CVec zmc(zm.begin(), zm.end());
    Cplx theta = kernel::sigma_nu_scaled(Cplx(rm), Cplx(zm.back()), params) +
                 kernel::theta_imp_of_z(zmc, params, quad, cache);
    return std::exp(-params.s * rm) * theta;
}

} // namespace

MatvecResult assemble_matvec(const std::vector<Vec>& sources, const std::vector<Vec>& targets,
                             const KernelParams& params, const MatvecOptions& opts,
                             const std::vector<Cplx>& vec) {
    if (vec.size() != sources.size())
        throw DomainError("assemble_matvec: vector length must match source count");
    for (const Vec& p : sources)
        if (p.back() <= 0.0) throw DomainError("assemble_matvec: sources must lie in H_+");
    for (const Vec& p : targets)
        if (p.back() <= 0.0) throw DomainError("assemble_matvec: targets must lie in H_+");

    MatvecResult out;
    out.result.assign(targets.size(), Cplx(0.0));
    CellSet tcells = partition_points(targets, opts.grid_n);
    CellSet scells = partition_points(sources, opts.grid_n);
    kernel::PsiCache cache(params, opts.quad);
    Rng check_rng(opts.seed);

    std::vector<Cplx> w_illu, w_ri;
    for (std::size_t tc = 0; tc < tcells.boxes.size(); ++tc) {
        if (tcells.members[tc].empty()) continue;
        for (std::size_t sc = 0; sc < scells.boxes.size(); ++sc) {
            if (scells.members[sc].empty()) continue;
            // interpolation block: x side = targets, y side = sources
            geom::BlockPair pair =
                geom::make_block_pair(tcells.boxes[tc], scells.boxes[sc], opts.eta);
            const auto& ti = tcells.members[tc];
            const auto& si = scells.members[sc];
            BlockReport br;
            br.target_cell = static_cast<int>(tc);
            br.source_cell = static_cast<int>(sc);
            br.n_targets = static_cast<int>(ti.size());
            br.n_sources = static_cast<int>(si.size());

            if (!pair.admissible) {
                ++out.n_inadmissible;
                br.path = "dense";
                for (int t : ti)
                    for (int s : si)
                        out.result[t] +=
                            kernel::green_components(targets[t], sources[s], params, opts.quad,
                                                     &cache)
                                .g_half *
                            vec[s];
                out.blocks.push_back(br);
                continue;
            }

            ++out.n_admissible;
            double sd = std::abs(params.s) * pair.delta;
            if (sd <= 1.0) {
                // slowly oscillatory: the kernel itself is a degenerate sum
                br.path = "degenerate";
                auto target = [&](const Vec& x, const Vec& y) {
                    return kernel::green_components(x, y, params, opts.quad, &cache).g_half;
                };
                ChebyshevInterpolant interp = build_interpolant(target, pair, opts.degree);
                for (int t : ti) {
                    interp.contract_source(targets[t], w_illu);
                    for (int s : si)
                        out.result[t] += interp.contract_target(w_illu, sources[s]) * vec[s];
                }
                double emax = 0.0;
                for (int k = 0; k < opts.check_samples; ++k) {
                    int t = ti[check_rng.uniform_int(static_cast<int>(ti.size()))];
                    int s = si[check_rng.uniform_int(static_cast<int>(si.size()))];
                    Cplx exact =
                        kernel::green_components(targets[t], sources[s], params, opts.quad,
                                                 &cache)
                            .g_half;
                    Cplx got = interp.eval(targets[t], sources[s]);
                    emax = std::max(emax, std::abs(got - exact) / std::abs(exact));
                }
                br.sampled_max_rel_err = emax;
                if (opts.check_tol > 0.0 && emax > opts.check_tol)
                    throw BudgetError("assemble_matvec: degenerate block error above tolerance");
                out.blocks.push_back(br);
                continue;
            }

            // oscillatory: interpolate the slowly varying factors and put the
            // eikonal exponentials back per entry
            br.path = "factor";
            auto t_illu = [&](const Vec& x, const Vec& y) {
                return kernel::theta_illu(CVec(x.begin(), x.end()), CVec(y.begin(), y.end()),
                                          params);
            };
            auto t_ri = [&](const Vec& x, const Vec& y) {
                CVec xc(x.begin(), x.end()), yc(y.begin(), y.end());
                return kernel::theta_refl(xc, yc, params) +
                       kernel::theta_imp(xc, yc, params, opts.quad, &cache);
            };
            ChebyshevInterpolant i_illu = build_interpolant(t_illu, pair, opts.degree);
            ChebyshevInterpolant i_ri = build_interpolant(t_ri, pair, opts.degree);
            auto entry = [&](int t, int s, const std::vector<Cplx>& wi,
                             const std::vector<Cplx>& wr) {
                double r = 0.0, rm = 0.0;
                for (std::size_t j = 0; j < targets[t].size(); ++j) {
                    double dz = targets[t][j] - sources[s][j];
                    r += dz * dz;
                }
                for (std::size_t j = 0; j + 1 < targets[t].size(); ++j) {
                    double dz = targets[t][j] - sources[s][j];
                    rm += dz * dz;
                }
                double zd = targets[t].back() + sources[s].back();
                rm += zd * zd;
                r = std::sqrt(r);
                rm = std::sqrt(rm);
                return std::exp(-params.s * r) * i_illu.contract_target(wi, sources[s]) +
                       std::exp(-params.s * rm) * i_ri.contract_target(wr, sources[s]);
            };
            for (int t : ti) {
                i_illu.contract_source(targets[t], w_illu);
                i_ri.contract_source(targets[t], w_ri);
                for (int s : si) out.result[t] += entry(t, s, w_illu, w_ri) * vec[s];
            }
            double emax = 0.0;
            for (int k = 0; k < opts.check_samples; ++k) {
                int t = ti[check_rng.uniform_int(static_cast<int>(ti.size()))];
                int s = si[check_rng.uniform_int(static_cast<int>(si.size()))];
                Cplx exact = kernel::green_components(targets[t], sources[s], params, opts.quad,
                                                      &cache)
                                 .g_half;
                i_illu.contract_source(targets[t], w_illu);
                i_ri.contract_source(targets[t], w_ri);
                Cplx got = entry(t, s, w_illu, w_ri);
                emax = std::max(emax, std::abs(got - exact) / std::abs(exact));
            }
            br.sampled_max_rel_err = emax;
            if (opts.check_tol > 0.0 && emax > opts.check_tol)
                throw BudgetError("assemble_matvec: factor block error above tolerance");
            out.blocks.push_back(br);
        }
    }
    return out;
}

ImpedanceBenchmark benchmark_impedance_entries(const std::vector<Vec>& sources,
                                               const std::vector<Vec>& targets,
                                               const KernelParams& params,
                                               const MatvecOptions& opts) {
    using clock = std::chrono::steady_clock;
    CellSet tcells = partition_points(targets, opts.grid_n);
    CellSet scells = partition_points(sources, opts.grid_n);

    ImpedanceBenchmark bench;
    std::vector<Cplx> dense_entries, factor_entries;

    // pass 1: per-entry quadrature (no memoization: one quadrature per entry)
    auto t0 = clock::now();
    for (std::size_t tc = 0; tc < tcells.boxes.size(); ++tc) {
        if (tcells.members[tc].empty()) continue;
        for (std::size_t sc = 0; sc < scells.boxes.size(); ++sc) {
            if (scells.members[sc].empty()) continue;
            geom::BlockPair pair =
                geom::make_block_pair(tcells.boxes[tc], scells.boxes[sc], opts.eta);
            if (!pair.admissible || std::abs(params.s) * pair.delta <= 1.0) continue;
            for (int t : tcells.members[tc])
                for (int s : scells.members[sc])
                    dense_entries.push_back(
                        entry_refl_imp(targets[t], sources[s], params, opts.quad, nullptr));
        }
    }
    bench.seconds_dense = std::chrono::duration<double>(clock::now() - t0).count();
    bench.entries = static_cast<long>(dense_entries.size());

    // pass 2: factor path (interpolant build plus entry reconstruction)
    t0 = clock::now();
    kernel::PsiCache cache(params, opts.quad);
    std::vector<Cplx> w_ri;
    for (std::size_t tc = 0; tc < tcells.boxes.size(); ++tc) {
        if (tcells.members[tc].empty()) continue;
        for (std::size_t sc = 0; sc < scells.boxes.size(); ++sc) {
            if (scells.members[sc].empty()) continue;
            geom::BlockPair pair =
                geom::make_block_pair(tcells.boxes[tc], scells.boxes[sc], opts.eta);
            if (!pair.admissible || std::abs(params.s) * pair.delta <= 1.0) continue;
            auto t_ri = [&](const Vec& x, const Vec& y) {
                CVec xc(x.begin(), x.end()), yc(y.begin(), y.end());
                return kernel::theta_refl(xc, yc, params) +
                       kernel::theta_imp(xc, yc, params, opts.quad, &cache);
            };
            ChebyshevInterpolant i_ri = build_interpolant(t_ri, pair, opts.degree);
            for (int t : tcells.members[tc]) {
                i_ri.contract_source(targets[t], w_ri);
                for (int s : scells.members[sc]) {
                    double rm = 0.0;
                    for (std::size_t j = 0; j + 1 < targets[t].size(); ++j) {
                        double dz = targets[t][j] - sources[s][j];
                        rm += dz * dz;
                    }
                    double zd = targets[t].back() + sources[s].back();
                    rm = std::sqrt(rm + zd * zd);
                    factor_entries.push_back(std::exp(-params.s * rm) *
                                             i_ri.contract_target(w_ri, sources[s]));
                }
            }
        }
    }
    bench.seconds_factor = std::chrono::duration<double>(clock::now() - t0).count();

    double scale = 0.0;
    for (const Cplx& e : dense_entries) scale = std::max(scale, std::abs(e));
    for (std::size_t i = 0; i < dense_entries.size(); ++i)
        bench.max_rel_err =
            std::max(bench.max_rel_err, std::abs(dense_entries[i] - factor_entries[i]) / scale);
    bench.speedup = bench.seconds_dense / std::max(bench.seconds_factor, 1e-12);
    return bench;
}

} // namespace impgreen::cheb
