#ifndef IMPGREEN_CHEB_HPP
#define IMPGREEN_CHEB_HPP

#include "impgreen/kernel.hpp"

#include <functional>
#include <string>
#include <vector>

namespace impgreen::cheb {

using Cplx = std::complex<double>;
using Vec = geom::Vec;
using CVec = geom::CVec;
using transform::KernelParams;
using kernel::QuadratureSpec;

// Chebyshev points of the first kind mapped to [a,b], i = 0..m,
// ordered by decreasing cos argument; all strictly interior.
std::vector<double> cheb_nodes(int m, double a, double b);

// Degree-m tensor interpolant of a kernel on a block of cuboids [a,b]x[c,d];
// the x argument lives in pair.source, the y argument in pair.target.
// Values are stored at all (m+1)^{2d} tensor node pairs; evaluation is
// barycentric per axis followed by an axis-by-axis contraction.
class ChebyshevInterpolant {
  public:
    ChebyshevInterpolant(geom::BlockPair pair, int degree);

    int degree() const { return m_; }
    int dim() const { return d_; }
    const geom::BlockPair& pair() const { return pair_; }
    long side_count() const { return n_side_; }             // (m+1)^d
    long node_pair_count() const { return n_side_ * n_side_; }
    const std::vector<double>& nodes_source(int axis) const { return nodes_src_[axis]; }
    const std::vector<double>& nodes_target(int axis) const { return nodes_tgt_[axis]; }

    void assign_values(const std::vector<Cplx>& values); // mu-major, nu fastest
    Cplx value_at(long mu_flat, long nu_flat) const;

    Cplx eval(const CVec& x, const CVec& y) const;
    Cplx eval(const Vec& x, const Vec& y) const;

    // w[nu] = sum_mu L_mu(x) T[mu, nu]; entry generation then contracts w
    // against the y-side cardinals.
    void contract_source(const Vec& x, std::vector<Cplx>& w) const;
    Cplx contract_target(const std::vector<Cplx>& w, const Vec& y) const;

    // per-axis barycentric cardinal values at a (possibly complex) coordinate
    void cardinals(int axis, bool source_side, Cplx x, std::vector<Cplx>& out) const;
    void decode(long flat, std::vector<int>& digits) const;

  private:
    geom::BlockPair pair_;
    int m_;
    int d_;
    std::vector<std::vector<double>> nodes_src_;
    std::vector<std::vector<double>> nodes_tgt_;
    std::vector<double> bary_w_;
    std::vector<double> re_, im_; // tensor values, target axes fastest
    long n_side_ = 0;
};

using PairTarget = std::function<Cplx(const Vec& x, const Vec& y)>;

ChebyshevInterpolant build_interpolant(const PairTarget& target, const geom::BlockPair& pair,
                                       int degree);

enum class Family { Illu, Refl, Imp, GHalf };
std::string family_name(Family f);

// Upper end of the certified extension range for a family.
double certified_kappa_bound(Family f, double beta, double c_ell);

struct StudyConfig {
    double c_ell = 16.0; // gate constant in kappa < beta^2/(c_ell (1+beta)^3)
    int n_samples = 2000;
    std::uint64_t seed = 20240901;
    QuadratureSpec quad;
};

struct RateReport {
    Family family{};
    std::vector<int> degrees;
    std::vector<double> errors; // sup-sampled absolute errors per degree
    double sup_scale = 0.0;     // max sampled |target|
    double fitted_rate = 0.0;   // gamma_fit with err ~ C gamma_fit^{-m}
    double predicted_gamma = 0.0; // 1 + 2 kappa / eta
    double envelope_constant = 0.0;
    double reference_value = 0.0; // lambda(|s| delta)
    double theory_constant = 0.0; // C_gamma = sqrt(d) 2^{d+3/2} (1-gamma^-2)^-d
    double kappa = 0.0;
    double eta = 0.0;
    int fit_first = 0, fit_last = 0; // degree range used by the fit
    bool pass = false;
};

// Builds interpolants of the chosen factor over the listed degrees,
// measures sup-sampled errors, and fits the geometric rate against the
// predicted gamma = 1 + 2 kappa/eta (pass margin: 10% on log gamma).
RateReport convergence_study(Family family, const geom::BlockPair& pair,
                             const KernelParams& params, double kappa,
                             const std::vector<int>& degrees, const StudyConfig& cfg);

struct MatvecOptions {
    double eta = 2.0;
    int degree = 6;
    int grid_n = 1;          // uniform cells per axis in each bounding box
    double check_tol = 0.0;  // > 0: budget error when a sampled entry misses it
    int check_samples = 25;  // sampled entries per accelerated block
    std::uint64_t seed = 7;
    QuadratureSpec quad;
};

struct BlockReport {
    int target_cell = 0;
    int source_cell = 0;
    std::string path; // "dense" | "factor" | "degenerate"
    int n_targets = 0;
    int n_sources = 0;
    double sampled_max_rel_err = 0.0;
};

struct MatvecResult {
    std::vector<Cplx> result;
    std::vector<BlockReport> blocks;
    int n_admissible = 0;
    int n_inadmissible = 0;
};

// Single-level admissible-block compressed matvec.  Admissible cell pairs
// with |s| delta > 1 go through the eikonal-factored interpolants; with
// |s| delta <= 1 the kernel itself is interpolated (degenerate form);
// inadmissible pairs are evaluated exactly.
MatvecResult assemble_matvec(const std::vector<Vec>& sources, const std::vector<Vec>& targets,
                             const KernelParams& params, const MatvecOptions& opts,
                             const std::vector<Cplx>& vec);

struct ImpedanceBenchmark {
    double seconds_dense = 0.0;  // per-entry quadrature over admissible entries
    double seconds_factor = 0.0; // interpolant build + entry reconstruction
    double speedup = 0.0;
    double max_rel_err = 0.0; // factor-path entries vs per-entry quadrature
    long entries = 0;
};

// Times the reflected+impedance entry generation over all admissible cell
// pairs, factor path versus per-entry quadrature.
ImpedanceBenchmark benchmark_impedance_entries(const std::vector<Vec>& sources,
                                               const std::vector<Vec>& targets,
                                               const KernelParams& params,
                                               const MatvecOptions& opts);

} // namespace impgreen::cheb

#endif
