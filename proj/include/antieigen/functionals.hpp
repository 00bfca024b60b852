#pragma once

// Pointwise ratio functionals of an operator T at a vector f:
//
//   mu_theta(f) = (cos(theta) Re<Tf,f> + sin(theta) Im<Tf,f>) / (||Tf|| ||f||)
//   total(f)    = |<Tf,f>| / (||Tf|| ||f||)
//
// together with the stationarity residual of mu_theta, its gradient on the
// unit sphere and the closed-form inner minimizer of eps -> ||(eps T - e^{i theta})f||.

#include <span>
#include <vector>

#include "antieigen/linalg.hpp"

namespace antieigen {

/// Angle in radians. Any finite value is accepted.
class Theta {
  public:
    constexpr Theta() = default;
    /// Throws InvalidInput for non-finite input.
    explicit Theta(double radians);

    [[nodiscard]] constexpr double radians() const noexcept { return radians_; }
    /// Representative in [0, 2*pi).
    [[nodiscard]] double canonical() const noexcept;
    /// e^{i theta}
    [[nodiscard]] Complex phase() const noexcept;

  private:
    double radians_ = 0.0;
};

/// An operator T together with the derived data every functional needs.
class Operator {
  public:
    /// Throws InvalidInput for non-finite entries.
    explicit Operator(Matrix t);

    [[nodiscard]] const Matrix& matrix() const noexcept { return t_; }
    [[nodiscard]] const Matrix& adjoint() const noexcept { return t_adj_; }
    /// A = Re T
    [[nodiscard]] const Matrix& real_part() const noexcept { return parts_.real_part; }
    /// B = Im T
    [[nodiscard]] const Matrix& imag_part() const noexcept { return parts_.imag_part; }
    /// T*T
    [[nodiscard]] const Matrix& gram() const noexcept { return gram_; }
    [[nodiscard]] double norm() const noexcept { return norm_; }
    [[nodiscard]] std::size_t size() const noexcept { return t_.size(); }
    [[nodiscard]] bool is_zero() const noexcept { return norm_ == 0.0; }

    /// ||Tf|| <= 1e-12 ||T|| ||f||
    [[nodiscard]] bool is_degenerate(double tf_norm, double f_norm) const noexcept {
        return !(tf_norm > kDegenerateRatio * norm_ * f_norm);
    }

    static constexpr double kDegenerateRatio = 1e-12;

  private:
    Matrix t_;
    Matrix t_adj_;
    HermitianParts parts_;
    Matrix gram_;
    double norm_;
};

struct FunctionalSample {
    Theta theta;
    double value = 0.0;       ///< mu_theta(f)
    double numerator_a = 0.0; ///< Re<Tf,f>
    double numerator_b = 0.0; ///< Im<Tf,f>
    double denom = 0.0;       ///< ||Tf|| ||f||
};

FunctionalSample mu_theta_at(const Operator& op, Theta theta, const Vector& f);

double total_ratio_at(const Operator& op, const Vector& f);

struct ThetaSupremum {
    Theta theta_star;
    double value = 0.0;
    /// False when <Tf,f> = 0: every theta gives 0 and theta_star is reported as 0.
    bool direction_defined = true;
};

/// sup over theta of mu_theta(f), attained at theta = arg<Tf,f>.
ThetaSupremum sup_theta_at(const Operator& op, const Vector& f);

/// E(f) = 2||Tf||^2 (cos(theta) A f + sin(theta) B f) - (a cos(theta) + b sin(theta)) (T*Tf + ||Tf||^2 f)
/// with a = Re<Tf,f>, b = Im<Tf,f>. Zero exactly at stationary vectors of mu_theta.
Vector stationary_residual(const Operator& op, Theta theta, const UnitVector& f);

/// Gradient of mu_theta on the unit sphere, C^n read as R^{2n} with the real
/// inner product Re<u,v>. Equals E(f) / ||Tf||^3.
Vector riemannian_gradient(const Operator& op, Theta theta, const UnitVector& f);

/// Re<e^{i theta} f, Tf> / ||Tf||^2, the minimizer of eps -> ||(eps T - e^{i theta} I) f||^2.
double epsilon_star(const Operator& op, Theta theta, const UnitVector& f);

/// Reusable evaluator of mu_theta and its gradient. Keeps scratch buffers, so
/// one instance must not be shared between threads.
class MuThetaEvaluator {
  public:
    MuThetaEvaluator(const Operator& op, Theta theta);

    /// Returns false (and leaves outputs untouched) when Tf is degenerate or f = 0.
    /// `gradient` may be empty; otherwise it receives the Euclidean gradient in R^{2n},
    /// which is tangent to the sphere through f.
    bool evaluate(std::span<const Complex> f, double& value, std::span<Complex> gradient);

    /// Sample of the last successful evaluate() call.
    [[nodiscard]] const FunctionalSample& last_sample() const noexcept { return sample_; }
    /// Stationary residual E(f) at the last evaluated point (only valid for unit f).
    [[nodiscard]] Vector last_residual() const;
    [[nodiscard]] double last_tf_norm_squared() const noexcept { return tf2_; }

  private:
    const Operator* op_;
    Theta theta_;
    Complex rot_; // e^{-i theta}
    std::vector<Complex> tf_, tadj_f_, gf_;
    std::vector<Complex> f_copy_;
    FunctionalSample sample_;
    double tf2_ = 0.0;
    double ff_ = 0.0;
};

/// Reusable evaluator of q(f) = |<Tf,f>|^2 / (||Tf||^2 ||f||^2), the squared total ratio.
class TotalRatioEvaluator {
  public:
    explicit TotalRatioEvaluator(const Operator& op);

    bool evaluate(std::span<const Complex> f, double& q, std::span<Complex> gradient);

    [[nodiscard]] Complex last_inner() const noexcept { return z_; }

  private:
    const Operator* op_;
    std::vector<Complex> tf_, tadj_f_, gf_;
    Complex z_{};
};

} // namespace antieigen
