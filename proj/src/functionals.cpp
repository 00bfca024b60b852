#include "antieigen/functionals.hpp"

#include <cmath>
#include <numbers>

#include "antieigen/error.hpp"

namespace antieigen {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_size(const Operator& op, std::size_t n) {
    if (op.size() != n) {
        throw InvalidInput("vector length " + std::to_string(n) + " does not match operator dimension " +
                           std::to_string(op.size()));
    }
}

void require_nonzero(const Vector& f) {
    if (!(norm(f) > 0.0)) {
        throw InvalidInput("f must be a nonzero vector");
    }
}

[[noreturn]] void throw_degenerate() {
    throw DegenerateVector("Tf is numerically zero: f lies in the kernel of T");
}

} // namespace

// ---------------------------------------------------------------- Theta

Theta::Theta(double radians) : radians_(radians) {
    if (!std::isfinite(radians)) {
        throw InvalidInput("theta must be finite");
    }
}

double Theta::canonical() const noexcept {
    double r = std::fmod(radians_, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    return r >= kTwoPi ? 0.0 : r;
}

Complex Theta::phase() const noexcept { return {std::cos(radians_), std::sin(radians_)}; }

// ---------------------------------------------------------------- Operator

Operator::Operator(Matrix t)
    : t_(std::move(t)), t_adj_(antieigen::adjoint(t_)), parts_(hermitian_parts(t_)), gram_(t_adj_ * t_),
      norm_(0.0) {
    if (!t_.all_finite()) {
        throw InvalidInput("operator has non-finite entries");
    }
    norm_ = operator_norm(t_);
}

// ---------------------------------------------------------------- evaluators

MuThetaEvaluator::MuThetaEvaluator(const Operator& op, Theta theta)
    : op_(&op), theta_(theta), rot_(std::conj(theta.phase())), tf_(op.size()), tadj_f_(op.size()),
      gf_(op.size()), f_copy_(op.size()) {
    sample_.theta = theta;
}

bool MuThetaEvaluator::evaluate(std::span<const Complex> f, double& value, std::span<Complex> gradient) {
    const std::size_t n = op_->size();
    multiply(op_->matrix(), f, tf_);
    double tf2 = 0.0;
    double ff = 0.0;
    Complex z{};
    for (std::size_t i = 0; i < n; ++i) {
        tf2 += std::norm(tf_[i]);
        ff += std::norm(f[i]);
        z += tf_[i] * std::conj(f[i]);
    }
    if (!(ff > 0.0) || op_->is_degenerate(std::sqrt(tf2), std::sqrt(ff))) {
        return false;
    }
    const double c = std::cos(theta_.radians());
    const double s = std::sin(theta_.radians());
    const double num = c * z.real() + s * z.imag();
    const double denom = std::sqrt(tf2 * ff);

    sample_.value = num / denom;
    sample_.numerator_a = z.real();
    sample_.numerator_b = z.imag();
    sample_.denom = denom;
    tf2_ = tf2;
    ff_ = ff;
    std::copy(f.begin(), f.end(), f_copy_.begin());
    value = sample_.value;

    if (!gradient.empty()) {
        multiply(op_->adjoint(), f, tadj_f_);
        multiply(op_->adjoint(), tf_, gf_);
        // grad = 2 M f / denom - value (T*Tf / ||Tf||^2 + f / ||f||^2),  M = cos A + sin B
        // with M f = (e^{-i theta} Tf + e^{i theta} T*f) / 2.
        const Complex rot_conj = std::conj(rot_);
        for (std::size_t i = 0; i < n; ++i) {
            const Complex mf = 0.5 * (rot_ * tf_[i] + rot_conj * tadj_f_[i]);
            gradient[i] = 2.0 * mf / denom - value * (gf_[i] / tf2 + f[i] / ff);
        }
    }
    return true;
}

Vector MuThetaEvaluator::last_residual() const {
    const std::size_t n = op_->size();
    const double num = sample_.value * sample_.denom;
    const Complex rot_conj = std::conj(rot_);
    Vector tadj_f(n);
    Vector gf(n);
    multiply(op_->adjoint(), f_copy_, tadj_f.span());
    multiply(op_->adjoint(), tf_, gf.span());
    Vector e(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex mf = 0.5 * (rot_ * tf_[i] + rot_conj * tadj_f[i]);
        e[i] = 2.0 * tf2_ * mf - num * (gf[i] + tf2_ * f_copy_[i]);
    }
    return e;
}

TotalRatioEvaluator::TotalRatioEvaluator(const Operator& op)
    : op_(&op), tf_(op.size()), tadj_f_(op.size()), gf_(op.size()) {}

bool TotalRatioEvaluator::evaluate(std::span<const Complex> f, double& q, std::span<Complex> gradient) {
    const std::size_t n = op_->size();
    multiply(op_->matrix(), f, tf_);
    double tf2 = 0.0;
    double ff = 0.0;
    Complex z{};
    for (std::size_t i = 0; i < n; ++i) {
        tf2 += std::norm(tf_[i]);
        ff += std::norm(f[i]);
        z += tf_[i] * std::conj(f[i]);
    }
    if (!(ff > 0.0) || op_->is_degenerate(std::sqrt(tf2), std::sqrt(ff))) {
        return false;
    }
    z_ = z;
    q = std::norm(z) / (tf2 * ff);
    if (!gradient.empty()) {
        multiply(op_->adjoint(), f, tadj_f_);
        multiply(op_->adjoint(), tf_, gf_);
        // grad |z|^2 = 2 (conj(z) Tf + z T*f)
        const Complex zc = std::conj(z);
        for (std::size_t i = 0; i < n; ++i) {
            gradient[i] = 2.0 * (zc * tf_[i] + z * tadj_f_[i]) / (tf2 * ff) -
                          2.0 * q * (gf_[i] / tf2 + f[i] / ff);
        }
    }
    return true;
}

// ---------------------------------------------------------------- public functionals

FunctionalSample mu_theta_at(const Operator& op, Theta theta, const Vector& f) {
    require_size(op, f.size());
    require_nonzero(f);
    MuThetaEvaluator eval(op, theta);
    double value = 0.0;
    if (!eval.evaluate(f.span(), value, {})) {
        throw_degenerate();
    }
    return eval.last_sample();
}

double total_ratio_at(const Operator& op, const Vector& f) {
    require_size(op, f.size());
    require_nonzero(f);
    TotalRatioEvaluator eval(op);
    double q = 0.0;
    if (!eval.evaluate(f.span(), q, {})) {
        throw_degenerate();
    }
    return std::sqrt(q);
}

ThetaSupremum sup_theta_at(const Operator& op, const Vector& f) {
    require_size(op, f.size());
    require_nonzero(f);
    TotalRatioEvaluator eval(op);
    double q = 0.0;
    if (!eval.evaluate(f.span(), q, {})) {
        throw_degenerate();
    }
    const Complex z = eval.last_inner();
    if (z == Complex{}) {
        return {Theta{}, 0.0, false};
    }
    return {Theta{std::arg(z)}, std::sqrt(q), true};
}

Vector stationary_residual(const Operator& op, Theta theta, const UnitVector& f) {
    require_size(op, f.size());
    MuThetaEvaluator eval(op, theta);
    double value = 0.0;
    if (!eval.evaluate(f.span(), value, {})) {
        throw_degenerate();
    }
    return eval.last_residual();
}

Vector riemannian_gradient(const Operator& op, Theta theta, const UnitVector& f) {
    require_size(op, f.size());
    MuThetaEvaluator eval(op, theta);
    double value = 0.0;
    Vector grad(op.size());
    if (!eval.evaluate(f.span(), value, grad.span())) {
        throw_degenerate();
    }
    return grad;
}

double epsilon_star(const Operator& op, Theta theta, const UnitVector& f) {
    require_size(op, f.size());
    MuThetaEvaluator eval(op, theta);
    double value = 0.0;
    if (!eval.evaluate(f.span(), value, {})) {
        throw_degenerate();
    }
    const auto& s = eval.last_sample();
    return value * s.denom / eval.last_tf_norm_squared();
}

} // namespace antieigen
