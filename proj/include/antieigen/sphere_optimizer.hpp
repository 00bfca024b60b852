#pragma once

// Global minimization of the ratio functionals over the unit sphere of C^n:
// multi-start Riemannian gradient descent with Armijo backtracking and
// retraction by renormalization. Also hosts the brute-force oracles used to
// cross-check it.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "antieigen/functionals.hpp"
#include "antieigen/linalg.hpp"

namespace antieigen {

struct OptimizerConfig {
    int restarts = 32;
    int max_iters = 2000;
    double tol_grad = 1e-10;  ///< on the sphere-gradient norm
    double tol_value = 1e-12; ///< value stagnation, also the tie window across restarts
    std::uint64_t seed = 0x5EEDC0FFEEULL;

    /// Throws InvalidInput unless counts and tolerances are positive.
    void validate() const;
};

struct AntieigenResult {
    Theta theta;
    double value = 0.0;
    UnitVector witness;
    /// ||E(witness)|| for the search subspace (full space for a plain minimization;
    /// the component inside the deflated subspace for higher antieigenvalues).
    double residual_norm = 0.0;
    int restarts_used = 0;
    int iterations = 0; ///< iterations of the winning restart
    bool converged = false;
    /// The best iterate sits next to the kernel of T; the infimum may not be attained.
    bool near_kernel = false;
};

/// Residual bound that certifies a witness: 1e-8 (1 + ||T||)^3.
double residual_certificate(const Operator& op);

/// mu_theta(T) = inf over unit f of mu_theta(f).
/// Throws InvalidInput for the zero operator, NoAdmissibleVector if every start is degenerate.
AntieigenResult minimize_mu_theta(const Operator& op, Theta theta, const OptimizerConfig& cfg = {});

struct SquaredInfimum {
    double value = 0.0; ///< inf over unit f of mu_theta(f)^2
    UnitVector witness;
    double min_mu = 0.0; ///< inf of mu_theta over the sphere
    double max_mu = 0.0; ///< sup of mu_theta over the sphere
    bool sign_change = false;
};

/// inf over unit f of mu_theta(f)^2. Zero exactly when mu_theta changes sign on the sphere.
SquaredInfimum minimize_mu_squared(const Operator& op, Theta theta, const OptimizerConfig& cfg = {});

/// |cos|T = inf over unit f of |<Tf,f>| / ||Tf||. The theta field carries arg<Tf,f> at the witness.
AntieigenResult total_antieigenvalue(const Operator& op, const OptimizerConfig& cfg = {});

/// Minimizes the pointwise supremum sup_theta mu_theta(f) = |<Tf,f>| / ||Tf|| in its unsquared form.
/// Used as the second route to |cos|T.
AntieigenResult minimize_sup_theta(const Operator& op, const OptimizerConfig& cfg = {});

/// Minimizes (w_re Re<Tf,f> + w_im Im<Tf,f>) / ||Tf|| for explicit weights.
AntieigenResult minimize_weighted_integrand(const Operator& op, double w_re, double w_im,
                                            const OptimizerConfig& cfg = {});

/// Successive minimization of mu_theta over the orthogonal complement of the
/// previously found witnesses. Stops early (last entry has converged = false)
/// when a stage fails to converge. Throws InvalidInput for k = 0 or k > n.
std::vector<AntieigenResult> higher_antieigenvalues(const Operator& op, Theta theta, std::size_t k,
                                                    const OptimizerConfig& cfg = {});

/// Oracle for diagonal T: min over coordinate pairs (j, k) and a t-grid on [0, 1] of
/// (t c_j + (1-t) c_k) / sqrt(t |l_j|^2 + (1-t) |l_k|^2), c_j = Re(e^{-i theta} l_j),
/// refined by golden-section on the best cell.
double diagonal_oracle(std::span<const Complex> diag_entries, Theta theta, int grid);

/// Brute-force minimum of mu_theta over a grid on the unit sphere modulo global
/// phase (n <= 3, `resolution` points per axis).
double grid_oracle(const Operator& op, Theta theta, int resolution);

/// 2 sqrt(l_1 l_n) / (l_1 + l_n) from the extreme eigenvalues of a Hermitian positive definite T.
double selfadjoint_cos(const Matrix& t);

/// sqrt(l_1 l_n) / (l_1 + l_n): the factor-free variant, reported for comparison only.
double selfadjoint_cos_factor_free(const Matrix& t);

namespace detail {

/// Objective on the unit sphere: value plus Euclidean gradient (tangent at unit f).
class SphereObjective {
  public:
    virtual ~SphereObjective() = default;
    /// Returns false when f is not admissible (Tf degenerate).
    virtual bool evaluate(std::span<const Complex> f, double& value, std::span<Complex> gradient) = 0;
};

struct DescentOutcome {
    Vector point;
    double value = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool admissible = false;
    bool hit_iteration_cap = false;
};

/// One Riemannian gradient-descent run from `start` (unit) with Armijo backtracking.
DescentOutcome descend(SphereObjective& objective, Vector start, const OptimizerConfig& cfg);

/// Deterministic start for restart `index`: uniform on the unit sphere of C^dim.
Vector random_start(std::uint64_t seed, int index, std::size_t dim);

} // namespace detail

} // namespace antieigen
