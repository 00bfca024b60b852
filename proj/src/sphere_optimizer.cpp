#include "antieigen/sphere_optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "antieigen/error.hpp"

namespace antieigen {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kShrink = 0.5;
constexpr int kMaxBacktracks = 60;
constexpr int kStagnationWindow = 50;
constexpr double kNearKernelRatio = 1e-6;

void require_nonzero_operator(const Operator& op) {
    if (op.is_zero()) {
        throw InvalidInput("zero operator has no antieigenvalues");
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

// ------------------------------------------------------------------ objectives

class MuObjective final : public detail::SphereObjective {
  public:
    MuObjective(const Operator& op, Theta theta) : eval_(op, theta) {}
    bool evaluate(std::span<const Complex> f, double& value, std::span<Complex> gradient) override {
        return eval_.evaluate(f, value, gradient);
    }

  private:
    MuThetaEvaluator eval_;
};

class MuSquaredObjective final : public detail::SphereObjective {
  public:
    MuSquaredObjective(const Operator& op, Theta theta) : eval_(op, theta) {}
    bool evaluate(std::span<const Complex> f, double& value, std::span<Complex> gradient) override {
        double mu = 0.0;
        if (!eval_.evaluate(f, mu, gradient)) {
            return false;
        }
        value = mu * mu;
        for (auto& g : gradient) {
            g *= 2.0 * mu;
        }
        return true;
    }

  private:
    MuThetaEvaluator eval_;
};

class TotalSquaredObjective final : public detail::SphereObjective {
  public:
    explicit TotalSquaredObjective(const Operator& op) : eval_(op) {}
    bool evaluate(std::span<const Complex> f, double& value, std::span<Complex> gradient) override {
        return eval_.evaluate(f, value, gradient);
    }

  private:
    TotalRatioEvaluator eval_;
};

class TotalUnsquaredObjective final : public detail::SphereObjective {
  public:
    explicit TotalUnsquaredObjective(const Operator& op) : eval_(op) {}
    bool evaluate(std::span<const Complex> f, double& value, std::span<Complex> gradient) override {
        double q = 0.0;
        if (!eval_.evaluate(f, q, gradient)) {
            return false;
        }
        value = std::sqrt(q);
        const double scale = value > 0.0 ? 0.5 / value : 0.0;
        for (auto& g : gradient) {
            g *= scale;
        }
        return true;
    }

  private:
    TotalRatioEvaluator eval_;
};

// (w_re Re<Tf,f> + w_im Im<Tf,f>) / (||Tf|| ||f||), written out directly from T and T*.
class WeightedIntegrandObjective final : public detail::SphereObjective {
  public:
    WeightedIntegrandObjective(const Operator& op, double w_re, double w_im)
        : op_(&op), w_re_(w_re), w_im_(w_im), tf_(op.size()), tadj_f_(op.size()), gf_(op.size()) {}

    bool evaluate(std::span<const Complex> f, double& value, std::span<Complex> gradient) override {
        multiply(op_->matrix(), f, tf_);
        const Complex z = inner(tf_, f);
        const double tf_norm = norm(tf_);
        const double f_norm = norm(f);
        if (!(f_norm > 0.0) || op_->is_degenerate(tf_norm, f_norm)) {
            return false;
        }
        const double denom = tf_norm * f_norm;
        value = (w_re_ * z.real() + w_im_ * z.imag()) / denom;
        if (!gradient.empty()) {
            multiply(op_->adjoint(), f, tadj_f_);
            multiply(op_->adjoint(), tf_, gf_);
            // (w_re A + w_im B) f = ((w_re - i w_im) Tf + (w_re + i w_im) T*f) / 2
            const Complex w{w_re_, w_im_};
            for (std::size_t i = 0; i < f.size(); ++i) {
                const Complex wf = 0.5 * (std::conj(w) * tf_[i] + w * tadj_f_[i]);
                gradient[i] = 2.0 * wf / denom -
                              value * (gf_[i] / (tf_norm * tf_norm) + f[i] / (f_norm * f_norm));
            }
        }
        return true;
    }

  private:
    const Operator* op_;
    double w_re_;
    double w_im_;
    std::vector<Complex> tf_, tadj_f_, gf_;
};

// Restricts an objective on C^n to the span of orthonormal columns Q: y -> f = Q y.
class SubspaceObjective final : public detail::SphereObjective {
  public:
    SubspaceObjective(detail::SphereObjective& inner, const std::vector<Vector>& basis, std::size_t n)
        : inner_(&inner), basis_(&basis), f_(n), gf_(n) {}

    bool evaluate(std::span<const Complex> y, double& value, std::span<Complex> gradient) override {
        lift(y, f_);
        std::span<Complex> gf = gradient.empty() ? std::span<Complex>{} : std::span<Complex>(gf_);
        if (!inner_->evaluate(f_, value, gf)) {
            return false;
        }
        if (!gradient.empty()) {
            for (std::size_t k = 0; k < basis_->size(); ++k) {
                gradient[k] = inner((*basis_)[k].span(), gf_);
                gradient[k] = std::conj(gradient[k]);
            }
        }
        return true;
    }

    void lift(std::span<const Complex> y, std::span<Complex> f) const {
        std::fill(f.begin(), f.end(), Complex{});
        for (std::size_t k = 0; k < basis_->size(); ++k) {
            const auto& q = (*basis_)[k];
            for (std::size_t i = 0; i < f.size(); ++i) {
                f[i] += q[i] * y[k];
            }
        }
    }

  private:
    detail::SphereObjective* inner_;
    const std::vector<Vector>* basis_;
    std::vector<Complex> f_, gf_;
};

// ------------------------------------------------------------------ multi-start driver

struct MultiStart {
    detail::DescentOutcome best;
    int best_index = -1;
    int restarts = 0;
};

// Random starts come first, then any extra seeds, so ties still favour random restarts.
MultiStart run_restarts(detail::SphereObjective& objective, std::size_t dim, const OptimizerConfig& cfg,
                        const std::vector<Vector>& seeds = {}) {
    MultiStart out;
    const int total = cfg.restarts + static_cast<int>(seeds.size());
    out.restarts = total;
    for (int r = 0; r < total; ++r) {
        Vector start = r < cfg.restarts ? detail::random_start(cfg.seed, r, dim)
                                        : seeds[static_cast<std::size_t>(r - cfg.restarts)];
        auto run = detail::descend(objective, std::move(start), cfg);
        if (!run.admissible) {
            continue;
        }
        // Smallest value wins; ties within tol_value keep the lower restart index.
        if (out.best_index < 0 || run.value < out.best.value - cfg.tol_value) {
            out.best = std::move(run);
            out.best_index = r;
        }
    }
    if (out.best_index < 0) {
        throw NoAdmissibleVector("every optimizer start lies in the numerical kernel of T");
    }
    return out;
}

// Eigenvectors of Re(e^{-i theta} T), right singular vectors of T and pairwise mixes within each
// family. They move with T under unitary conjugation, so the set of basins they reach does too;
// random starts alone occasionally miss a small global basin (often one hugging the smallest
// singular direction).
std::vector<Vector> covariant_seeds(const Operator& op, Theta theta) {
    const Matrix rotated = std::conj(theta.phase()) * op.matrix();
    const std::size_t n = op.size();
    const Complex phases[] = {Complex(1.0), Complex(-1.0), Complex(0.0, 1.0), Complex(0.0, -1.0)};
    std::vector<Vector> seeds;
    Matrix singular(n);
    for (const Matrix& h : {Matrix(0.5 * (rotated + adjoint(rotated))), op.gram()}) {
        const auto eig = hermitian_eigen(h);
        singular = eig.eigenvectors;
        for (std::size_t j = 0; j < n; ++j) {
            const Vector vj = eig.eigenvectors.column(j);
            seeds.push_back(vj);
            for (std::size_t k = j + 1; k < n; ++k) {
                const Vector vk = eig.eigenvectors.column(k);
                for (const Complex ph : phases) {
                    seeds.push_back(Complex(std::sqrt(0.5)) * (vj + ph * vk));
                }
            }
        }
    }
    // Small tilts of the smallest right singular vector: when T is nearly singular the
    // infimum often sits just off that direction, in a basin too narrow for the mixes above.
    const Vector low = singular.column(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const Vector vk = singular.column(k);
        for (const double angle : {0.05, 0.15, 0.4}) {
            for (int p = 0; p < 8; ++p) {
                const Complex ph = std::polar(std::sin(angle), std::numbers::pi * p / 4.0);
                seeds.push_back(Complex(std::cos(angle)) * low + ph * vk);
            }
        }
    }
    return seeds;
}

bool near_kernel(const Operator& op, const Vector& f) {
    return norm(op.matrix() * f) <= kNearKernelRatio * op.norm() * norm(f);
}

AntieigenResult finish_mu_result(const Operator& op, Theta theta, UnitVector witness, const MultiStart& run,
                                 const std::vector<Vector>* basis) {
    Vector residual = stationary_residual(op, theta, witness);
    double residual_norm = norm(residual);
    if (basis != nullptr) {
        double sum = 0.0;
        for (const auto& q : *basis) {
            sum += std::norm(inner(residual, q));
        }
        residual_norm = std::sqrt(sum);
    }
    const double value = mu_theta_at(op, theta, witness).value;
    const bool kernel = near_kernel(op, witness);
    return AntieigenResult{theta,
                           value,
                           std::move(witness),
                           residual_norm,
                           run.restarts,
                           run.best.iterations,
                           residual_norm <= residual_certificate(op),
                           kernel};
}

// Residual for witnesses of the total ratio: ||E_{arg z}(f)|| while <Tf,f> is
// bounded away from 0, otherwise |<Tf,f>| ||Tf||, the distance of the
// numerator from the global lower bound 0.
double total_residual(const Operator& op, const UnitVector& f, Theta& theta_out) {
    const auto sup = sup_theta_at(op, f);
    theta_out = sup.theta_star;
    if (sup.value > 1e-6) {
        return norm(stationary_residual(op, sup.theta_star, f));
    }
    const double tf = norm(op.matrix() * f.vector());
    return sup.value * tf * tf;
}

AntieigenResult finish_total_result(const Operator& op, detail::DescentOutcome best, const MultiStart& run,
                                    bool squared) {
    UnitVector witness = UnitVector::normalized(std::move(best.point));
    Theta theta;
    const double residual = total_residual(op, witness, theta);
    const double value = squared ? std::sqrt(std::max(0.0, best.value)) : best.value;
    const bool kernel = near_kernel(op, witness);
    return AntieigenResult{theta,    value,        std::move(witness), residual, run.restarts,
                           run.best.iterations, residual <= residual_certificate(op), kernel};
}

// Orthonormal basis of the complement of span(witnesses) in C^n, Gram-Schmidt with a
// re-orthogonalization pass, choosing at each step the coordinate vector with the
// largest remaining component.
std::vector<Vector> complement_basis(const std::vector<Vector>& witnesses, std::size_t n) {
    std::vector<Vector> against = witnesses;
    std::vector<Vector> basis;
    const std::size_t target = n - witnesses.size();
    auto project_out = [&](Vector v) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : against) {
                const Complex c = inner(v, q);
                for (std::size_t i = 0; i < n; ++i) {
                    v[i] -= c * q[i];
                }
            }
        }
        return v;
    };
    std::vector<bool> used(n, false);
    while (basis.size() < target) {
        std::size_t best_i = n;
        double best_norm = -1.0;
        Vector best_v;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) {
                continue;
            }
            Vector e(n);
            e[i] = 1.0;
            Vector v = project_out(std::move(e));
            const double nv = norm(v);
            if (nv > best_norm) {
                best_norm = nv;
                best_i = i;
                best_v = std::move(v);
            }
        }
        used[best_i] = true;
        best_v *= Complex(1.0 / best_norm, 0.0);
        against.push_back(best_v);
        basis.push_back(std::move(best_v));
    }
    return basis;
}

double golden_section(auto&& fn, double lo, double hi, int iterations) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = fn(x1);
    double f2 = fn(x2);
    for (int i = 0; i < iterations; ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = fn(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = fn(x2);
        }
    }
    return std::min(f1, f2);
}

} // namespace

// ------------------------------------------------------------------ config

void OptimizerConfig::validate() const {
    if (restarts <= 0 || max_iters <= 0) {
        throw InvalidInput("optimizer restarts and max_iters must be positive");
    }
    if (!(tol_grad > 0.0) || !(tol_value > 0.0)) {
        throw InvalidInput("optimizer tolerances must be positive");
    }
}

double residual_certificate(const Operator& op) {
    const double s = 1.0 + op.norm();
    return 1e-8 * s * s * s;
}

// ------------------------------------------------------------------ descent

namespace detail {

Vector random_start(std::uint64_t seed, int index, std::size_t dim) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1U)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(dim);
    for (;;) {
        for (auto& x : v) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            x = Complex(re, im);
        }
        const double nv = norm(v);
        if (nv > 1e-8) {
            v *= Complex(1.0 / nv, 0.0);
            return v;
        }
    }
}

DescentOutcome descend(SphereObjective& objective, Vector start, const OptimizerConfig& cfg) {
    const std::size_t dim = start.size();
    DescentOutcome out;
    Vector x = std::move(start);
    Vector g(dim);
    double v = 0.0;
    if (!objective.evaluate(x.span(), v, g.span())) {
        return out;
    }
    out.admissible = true;

    Vector x_new(dim);
    Vector g_new(dim);
    double gn = norm(g);
    double alpha = 1.0;
    int stagnant = 0;
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        if (gn <= cfg.tol_grad) {
            break;
        }
        double v_new = 0.0;
        bool accepted = false;
        double step = alpha;
        for (int ls = 0; ls < kMaxBacktracks; ++ls) {
            for (std::size_t i = 0; i < dim; ++i) {
                x_new[i] = x[i] - step * g[i];
            }
            x_new *= Complex(1.0 / norm(x_new), 0.0);
            if (objective.evaluate(x_new.span(), v_new, g_new.span())) {
                const double slack = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(v));
                if (v_new <= v - kArmijo * step * gn * gn + slack) {
                    accepted = true;
                    break;
                }
            }
            step *= kShrink;
        }
        if (!accepted) {
            break;
        }

        // Barzilai-Borwein step for the next iteration.
        double ss = 0.0;
        double sy = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const Complex s = x_new[i] - x[i];
            const Complex y = g_new[i] - g[i];
            ss += std::norm(s);
            sy += s.real() * y.real() + s.imag() * y.imag();
        }
        alpha = sy > 0.0 ? std::clamp(ss / sy, 1e-10, 1e10) : std::min(2.0 * step, 1e10);

        stagnant = std::abs(v - v_new) <= cfg.tol_value * std::max(1.0, std::abs(v)) ? stagnant + 1 : 0;
        std::swap(x, x_new);
        std::swap(g, g_new);
        v = v_new;
        gn = norm(g);
        if (stagnant >= kStagnationWindow) {
            ++it;
            break;
        }
    }
    out.hit_iteration_cap = it >= cfg.max_iters && gn > cfg.tol_grad;
    out.point = std::move(x);
    out.value = v;
    out.grad_norm = gn;
    out.iterations = it;
    return out;
}

} // namespace detail

// ------------------------------------------------------------------ public minimizers

AntieigenResult minimize_mu_theta(const Operator& op, Theta theta, const OptimizerConfig& cfg) {
    cfg.validate();
    require_nonzero_operator(op);
    MuObjective objective(op, theta);
    auto run = run_restarts(objective, op.size(), cfg, covariant_seeds(op, theta));
    UnitVector witness = UnitVector::normalized(run.best.point);
    return finish_mu_result(op, theta, std::move(witness), run, nullptr);
}

SquaredInfimum minimize_mu_squared(const Operator& op, Theta theta, const OptimizerConfig& cfg) {
    auto low = minimize_mu_theta(op, theta, cfg);
    auto high = minimize_mu_theta(op, Theta{theta.radians() + std::numbers::pi}, cfg);
    const double min_mu = low.value;
    const double max_mu = -high.value;
    if (min_mu >= 0.0) {
        return {min_mu * min_mu, low.witness, min_mu, max_mu, false};
    }
    if (max_mu <= 0.0) {
        return {max_mu * max_mu, high.witness, min_mu, max_mu, false};
    }

    // mu changes sign: bisect along the arc from the minimizer to the (phase-aligned) maximizer.
    const Vector& f_lo = low.witness.vector();
    Vector f_hi = high.witness.vector();
    const Complex overlap = inner(f_lo, f_hi);
    if (std::abs(overlap) > 0.0) {
        f_hi *= overlap / std::abs(overlap);
    }
    MuThetaEvaluator eval(op, theta);
    auto point = [&](double s) {
        Vector p = (1.0 - s) * f_lo + s * f_hi;
        return p;
    };
    double a = 0.0;
    double b = 1.0;
    bool path_ok = true;
    Vector best = f_lo;
    double best_abs = std::abs(min_mu);
    for (int i = 0; i < 200 && b - a > 1e-17; ++i) {
        const double m = 0.5 * (a + b);
        Vector p = point(m);
        double mu = 0.0;
        if (!eval.evaluate(p.span(), mu, {})) {
            path_ok = false;
            break;
        }
        if (std::abs(mu) < best_abs) {
            best_abs = std::abs(mu);
            best = p;
        }
        if (mu == 0.0) {
            break;
        }
        (mu < 0.0 ? a : b) = m;
    }
    if (!path_ok) {
        MuSquaredObjective objective(op, theta);
        auto run = run_restarts(objective, op.size(), cfg);
        return {run.best.value, UnitVector::normalized(run.best.point), min_mu, max_mu, true};
    }
    return {best_abs * best_abs, UnitVector::normalized(std::move(best)), min_mu, max_mu, true};
}

AntieigenResult total_antieigenvalue(const Operator& op, const OptimizerConfig& cfg) {
    cfg.validate();
    require_nonzero_operator(op);
    TotalSquaredObjective objective(op);
    auto run = run_restarts(objective, op.size(), cfg);
    return finish_total_result(op, run.best, run, true);
}

AntieigenResult minimize_sup_theta(const Operator& op, const OptimizerConfig& cfg) {
    cfg.validate();
    require_nonzero_operator(op);
    TotalUnsquaredObjective objective(op);
    auto run = run_restarts(objective, op.size(), cfg);
    return finish_total_result(op, run.best, run, false);
}

AntieigenResult minimize_weighted_integrand(const Operator& op, double w_re, double w_im,
                                            const OptimizerConfig& cfg) {
    cfg.validate();
    require_nonzero_operator(op);
    if (!std::isfinite(w_re) || !std::isfinite(w_im) || (w_re == 0.0 && w_im == 0.0)) {
        throw InvalidInput("integrand weights must be finite and not both zero");
    }
    WeightedIntegrandObjective objective(op, w_re, w_im);
    auto run = run_restarts(objective, op.size(), cfg);
    UnitVector witness = UnitVector::normalized(run.best.point);
    const Theta theta{std::atan2(w_im, w_re)};
    auto result = finish_mu_result(op, theta, std::move(witness), run, nullptr);
    result.value = run.best.value;
    return result;
}

std::vector<AntieigenResult> higher_antieigenvalues(const Operator& op, Theta theta, std::size_t k,
                                                    const OptimizerConfig& cfg) {
    cfg.validate();
    require_nonzero_operator(op);
    const std::size_t n = op.size();
    if (k == 0 || k > n) {
        throw InvalidInput("number of antieigenvalues must lie in [1, n]");
    }
    std::vector<AntieigenResult> results;
    std::vector<Vector> witnesses;
    for (std::size_t stage = 0; stage < k; ++stage) {
        if (stage == 0) {
            results.push_back(minimize_mu_theta(op, theta, cfg));
        } else {
            const auto basis = complement_basis(witnesses, n);
            MuObjective mu(op, theta);
            SubspaceObjective objective(mu, basis, n);
            auto run = run_restarts(objective, basis.size(), cfg);
            Vector f(n);
            objective.lift(run.best.point.span(), f.span());
            results.push_back(finish_mu_result(op, theta, UnitVector::normalized(std::move(f)), run, &basis));
        }
        witnesses.push_back(results.back().witness.vector());
        if (!results.back().converged) {
            break;
        }
    }
    return results;
}

// ------------------------------------------------------------------ oracles

double diagonal_oracle(std::span<const Complex> diag_entries, Theta theta, int grid) {
    if (diag_entries.empty()) {
        throw InvalidInput("diagonal_oracle needs at least one entry");
    }
    if (grid < 2) {
        throw InvalidInput("diagonal_oracle grid must be at least 2");
    }
    const std::size_t n = diag_entries.size();
    const Complex rot = std::conj(theta.phase());
    std::vector<double> c(n);
    std::vector<double> m2(n);
    double largest = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        c[j] = (rot * diag_entries[j]).real();
        m2[j] = std::norm(diag_entries[j]);
        largest = std::max(largest, m2[j]);
    }
    if (largest == 0.0) {
        throw InvalidInput("diagonal_oracle: all entries are zero");
    }
    const double floor = 1e-24 * largest;

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    std::size_t best_k = 0;
    int best_i = 0;
    auto ratio = [&](std::size_t j, std::size_t k, double t) {
        const double den = t * m2[j] + (1.0 - t) * m2[k];
        if (!(den > floor)) {
            return std::numeric_limits<double>::infinity();
        }
        return (t * c[j] + (1.0 - t) * c[k]) / std::sqrt(den);
    };
    for (std::size_t j = 0; j < n; ++j) {
        if (m2[j] > floor) {
            const double single = c[j] / std::sqrt(m2[j]);
            if (single < best) {
                best = single;
                best_j = best_k = j;
                best_i = grid - 1;
            }
        }
        for (std::size_t k = j + 1; k < n; ++k) {
            for (int i = 0; i < grid; ++i) {
                const double t = static_cast<double>(i) / (grid - 1);
                const double r = ratio(j, k, t);
                if (r < best) {
                    best = r;
                    best_j = j;
                    best_k = k;
                    best_i = i;
                }
            }
        }
    }
    if (best_j != best_k) {
        const double h = 1.0 / (grid - 1);
        const double lo = std::max(0.0, (best_i - 1) * h);
        const double hi = std::min(1.0, (best_i + 1) * h);
        best = std::min(best, golden_section([&](double t) { return ratio(best_j, best_k, t); }, lo, hi, 100));
    }
    return best;
}

double grid_oracle(const Operator& op, Theta theta, int resolution) {
    const std::size_t n = op.size();
    if (n > 3) {
        throw InvalidInput("grid_oracle supports n <= 3");
    }
    if (resolution < 2) {
        throw InvalidInput("grid_oracle resolution must be at least 2");
    }
    require_nonzero_operator(op);
    const double cs = std::cos(theta.radians());
    const double sn = std::sin(theta.radians());
    const Matrix m = Complex(cs) * op.real_part() + Complex(sn) * op.imag_part();
    const Matrix& g = op.gram();
    const double floor = std::pow(Operator::kDegenerateRatio * op.norm(), 2);

    if (n == 1) {
        return m(0, 0).real() / std::sqrt(g(0, 0).real());
    }

    // Parameters: n = 2 -> (t, phi2) with f = (sqrt t, sqrt(1-t) e^{i phi2});
    // n = 3 -> (t, s, phi2, phi3) with |z1|^2 = t, |z2|^2 = (1-t)s, |z3|^2 = (1-t)(1-s).
    const std::size_t dims = n == 2 ? 2 : 4;
    const std::size_t radial = dims / 2;
    // Tf is formed directly: the Gram form ||Tf||^2 = <T*T f, f> cancels badly next to the kernel.
    const Complex rotation = std::conj(theta.phase());
    Vector f(n);
    Vector tf(n);
    auto value = [&](const std::array<double, 4>& x) {
        if (n == 2) {
            f[0] = std::sqrt(x[0]);
            f[1] = std::polar(std::sqrt(1.0 - x[0]), x[1]);
        } else {
            f[0] = std::sqrt(x[0]);
            f[1] = std::polar(std::sqrt((1.0 - x[0]) * x[1]), x[2]);
            f[2] = std::polar(std::sqrt((1.0 - x[0]) * (1.0 - x[1])), x[3]);
        }
        multiply(op.matrix(), f.span(), tf.span());
        const double den = norm(tf);
        if (!(den * den > floor)) {
            return std::numeric_limits<double>::infinity();
        }
        return (rotation * inner(tf, f)).real() / den;
    };

    // Full grid: radial axes on [0, 1] with both ends, phase axes on [0, 2 pi) without the end.
    std::array<double, 4> step{};
    for (std::size_t d = 0; d < dims; ++d) {
        step[d] = d < radial ? 1.0 / (resolution - 1) : 2.0 * std::numbers::pi / resolution;
    }
    double best = std::numeric_limits<double>::infinity();
    std::array<double, 4> arg{};
    if (n == 2) {
        // Closed form of the quadratic forms in (t, phi); same points as the generic loop.
        std::vector<Complex> phases(resolution);
        for (int k = 0; k < resolution; ++k) {
            phases[k] = std::polar(1.0, k * step[1]);
        }
        const double m11 = m(0, 0).real();
        const double m22 = m(1, 1).real();
        const Complex m12 = m(0, 1);
        const double g11 = g(0, 0).real();
        const double g22 = g(1, 1).real();
        const Complex g12 = g(0, 1);
        for (int i = 0; i < resolution; ++i) {
            const double t = i * step[0];
            const double cross = 2.0 * std::sqrt(t * (1.0 - t));
            const double md = t * m11 + (1.0 - t) * m22;
            const double gd = t * g11 + (1.0 - t) * g22;
            for (int k = 0; k < resolution; ++k) {
                const double den = gd + cross * (g12 * phases[k]).real();
                if (!(den > floor)) {
                    continue;
                }
                const double v = (md + cross * (m12 * phases[k]).real()) / std::sqrt(den);
                if (v < best) {
                    best = v;
                    arg = {t, k * step[1], 0.0, 0.0};
                }
            }
        }
        // The fast loop only picks the cell.
        best = value(arg);
    } else {
        std::array<int, 4> idx{};
        for (;;) {
            std::array<double, 4> x{};
            for (std::size_t d = 0; d < dims; ++d) {
                x[d] = idx[d] * step[d];
            }
            const double v = value(x);
            if (v < best) {
                best = v;
                arg = x;
            }
            std::size_t d = 0;
            while (d < dims && ++idx[d] == resolution) {
                idx[d++] = 0;
            }
            if (d == dims) {
                break;
            }
        }
    }

    // Zoom on the best cell. The minimum is often steep in t near t = 0 or 1, where the
    // sqrt parameterization spreads grid points thinly; every probe is still a point of
    // the sphere, so the result remains an upper bound.
    // For n = 2 the first round sweeps the whole phase circle again: at t near 1 the best
    // coarse phase says nothing about where the nearby minimum is.
    constexpr int kZoomRounds = 8;
    const int zoom_points = dims == 2 ? 41 : 9;
    for (int round = 0; round < kZoomRounds && std::isfinite(best); ++round) {
        const std::array<double, 4> centre = arg;
        const bool full_phase = dims == 2 && round == 0;
        std::array<int, 4> points{};
        for (std::size_t d = 0; d < dims; ++d) {
            points[d] = full_phase && d >= radial ? resolution : zoom_points;
        }
        std::array<int, 4> z{};
        for (;;) {
            std::array<double, 4> x{};
            for (std::size_t d = 0; d < dims; ++d) {
                if (full_phase && d >= radial) {
                    x[d] = z[d] * step[d];
                    continue;
                }
                x[d] = centre[d] + step[d] * (2.0 * z[d] / (zoom_points - 1) - 1.0);
                if (d < radial) {
                    x[d] = std::clamp(x[d], 0.0, 1.0);
                }
            }
            const double v = value(x);
            if (v < best) {
                best = v;
                arg = x;
            }
            std::size_t d = 0;
            while (d < dims && ++z[d] == points[d]) {
                z[d++] = 0;
            }
            if (d == dims) {
                break;
            }
        }
        for (std::size_t d = 0; d < dims; ++d) {
            if (!(full_phase && d >= radial)) {
                step[d] *= 4.0 / (zoom_points - 1);
            }
        }
    }
    return best;
}

namespace {

std::pair<double, double> extreme_positive_eigenvalues(const Matrix& t) {
    if (!is_hermitian(t)) {
        throw NotHermitian("selfadjoint_cos: operator is not self-adjoint");
    }
    const auto eig = hermitian_eigen(t);
    const double top = eig.eigenvalues.front();
    const double bottom = eig.eigenvalues.back();
    if (!(bottom > 0.0)) {
        throw InvalidInput("selfadjoint_cos: operator is not positive definite");
    }
    return {top, bottom};
}

} // namespace

double selfadjoint_cos(const Matrix& t) {
    const auto [top, bottom] = extreme_positive_eigenvalues(t);
    return 2.0 * std::sqrt(top * bottom) / (top + bottom);
}

double selfadjoint_cos_factor_free(const Matrix& t) {
    const auto [top, bottom] = extreme_positive_eigenvalues(t);
    return std::sqrt(top * bottom) / (top + bottom);
}

} // namespace antieigen
