#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "antieigen/error.hpp"
#include "antieigen/functionals.hpp"
#include "test_support.hpp"

using namespace antieigen;
using namespace antieigen::testing;

namespace {

const double kS13 = std::sqrt(13.0);

Vector half_split() { return Vector{1.0 / std::sqrt(2.0), Complex(0.0, 1.0 / std::sqrt(2.0))}; }

// Directional derivative of mu_theta along a tangent direction g, through the retraction (f + t g)/||f + t g||.
double finite_difference(const Operator& op, Theta theta, const UnitVector& f, const Vector& g, double h) {
    auto at = [&](double t) {
        Vector x = f.vector();
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += t * g[i];
        }
        return mu_theta_at(op, theta, UnitVector::normalized(x)).value;
    };
    return (at(h) - at(-h)) / (2.0 * h);
}

Vector random_tangent(Rng& rng, const UnitVector& f) {
    Vector g = rng.vector(f.size());
    const double along = inner(g, f.vector()).real();
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] -= along * f[i];
    }
    const double ng = norm(g);
    g *= Complex(1.0 / ng);
    return g;
}

} // namespace

TEST(ThetaType, CanonicalAndPhase) {
    EXPECT_THROW(Theta(std::nan("")), InvalidInput);
    EXPECT_THROW(Theta(std::numeric_limits<double>::infinity()), InvalidInput);
    EXPECT_NEAR(Theta(-kPi / 2).canonical(), 3 * kPi / 2, 1e-15);
    EXPECT_NEAR(Theta(7 * kPi).canonical(), kPi, 1e-14);
    const double c = Theta(123.456).canonical();
    EXPECT_GE(c, 0.0);
    EXPECT_LT(c, 2 * kPi);
    EXPECT_NEAR(std::abs(Theta(0.3).phase() - std::polar(1.0, 0.3)), 0.0, 1e-16);
}

TEST(MuThetaAt, ExampleRealPartAtFirstAxis) {
    const Operator op(example_matrix());
    EXPECT_NEAR(mu_theta_at(op, Theta{0.0}, Vector{1.0, 0.0}).value, 2.0 / kS13, 1e-15);
}

TEST(MuThetaAt, ExampleRealPartAtSecondAxis) {
    const Operator op(example_matrix());
    EXPECT_NEAR(mu_theta_at(op, Theta{0.0}, Vector{0.0, 1.0}).value, 3.0 / kS13, 1e-15);
}

TEST(MuThetaAt, IdentityGivesCosine) {
    const Operator op(Matrix::identity(3));
    Rng rng(1);
    for (double th : {0.0, 0.4, 1.9, -2.2, 5.0}) {
        EXPECT_NEAR(mu_theta_at(op, Theta{th}, rng.vector(3)).value, std::cos(th), 1e-15);
    }
}

TEST(MuThetaAt, SampleFieldsAreConsistent) {
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const Operator op(Complex(rng.uniform(0.1, 10.0)) * rng.matrix(4));
        const Theta th{rng.uniform(-10.0, 10.0)};
        const auto s = mu_theta_at(op, th, rng.vector(4));
        EXPECT_LE(std::abs(s.value), 1.0 + 1e-12);
        const double rhs = std::cos(th.radians()) * s.numerator_a + std::sin(th.radians()) * s.numerator_b;
        EXPECT_NEAR(s.value * s.denom, rhs, 1e-10 * std::max(1.0, s.denom));
    }
}

TEST(MuThetaAt, DegenerateAndZeroVectors) {
    const Operator op(Matrix::diagonal({Complex(1.0), Complex(0.0)}));
    EXPECT_THROW(mu_theta_at(op, Theta{0.0}, Vector{0.0, 1.0}), DegenerateVector);
    EXPECT_THROW(mu_theta_at(op, Theta{0.0}, Vector{0.0, 0.0}), InvalidInput);
    EXPECT_THROW(mu_theta_at(op, Theta{0.0}, Vector{1.0}), InvalidInput);
    EXPECT_THROW(total_ratio_at(op, Vector{0.0, 1.0}), DegenerateVector);
}

TEST(MuThetaAt, Invariances) {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const Operator op(rng.matrix(3));
        const Theta th{rng.uniform(-4.0, 4.0)};
        const Vector f = rng.vector(3);
        const double base = mu_theta_at(op, th, f).value;

        const Complex c = rng.complex() * 7.0;
        EXPECT_NEAR(mu_theta_at(op, th, c * f).value, base, 1e-12);

        const Operator rotated(std::conj(th.phase()) * op.matrix());
        EXPECT_NEAR(mu_theta_at(rotated, Theta{0.0}, f).value, base, 1e-12);

        EXPECT_NEAR(mu_theta_at(op, Theta{th.radians() + 2 * kPi}, f).value, base, 1e-12);

        const double total = total_ratio_at(op, f);
        EXPECT_LE(std::abs(base), total + 1e-12);
        EXPECT_LE(total, 1.0 + 1e-12);
    }
}

TEST(MuThetaAt, SpecialAnglesMatchDirectIntegrands) {
    Rng rng(4);
    const double r2 = std::sqrt(2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Operator op(rng.matrix(4));
        const Vector f = rng.vector(4);
        const Vector tf = op.matrix() * f;
        const Complex z = inner(tf, f);
        const double denom = norm(tf) * norm(f);
        EXPECT_NEAR(mu_theta_at(op, Theta{0.0}, f).value, z.real() / denom, 1e-12);
        EXPECT_NEAR(mu_theta_at(op, Theta{kPi / 2}, f).value, z.imag() / denom, 1e-12);
        EXPECT_NEAR(mu_theta_at(op, Theta{kPi / 4}, f).value, (z.real() + z.imag()) / (r2 * denom), 1e-12);
    }
}

TEST(TotalRatio, ExampleHalfSplit) {
    const Operator op(example_matrix());
    EXPECT_NEAR(total_ratio_at(op, half_split()), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(TotalRatio, IdentityAndEigenvector) {
    Rng rng(5);
    EXPECT_NEAR(total_ratio_at(Operator(Matrix::identity(4)), rng.vector(4)), 1.0, 1e-15);
    EXPECT_NEAR(total_ratio_at(Operator(example_matrix()), Vector{1.0, 0.0}), 1.0, 1e-15);
}

TEST(SupTheta, ExampleEigenvector) {
    const auto s = sup_theta_at(Operator(example_matrix()), Vector{1.0, 0.0});
    EXPECT_NEAR(s.theta_star.radians(), std::arg(Complex(2, -3)), 1e-15);
    EXPECT_NEAR(s.value, 1.0, 1e-15);
    EXPECT_TRUE(s.direction_defined);
}

TEST(SupTheta, Identity) {
    Rng rng(6);
    const auto s = sup_theta_at(Operator(Matrix::identity(3)), rng.vector(3));
    EXPECT_NEAR(s.theta_star.radians(), 0.0, 1e-15);
    EXPECT_NEAR(s.value, 1.0, 1e-15);
}

TEST(SupTheta, ZeroNumericalRangeValueConvention) {
    // <Tf, f> = 0 for the nilpotent shift at e1.
    const auto s = sup_theta_at(Operator(Matrix{{0.0, 1.0}, {0.0, 0.0}}), Vector{0.0, 1.0});
    EXPECT_EQ(s.value, 0.0);
    EXPECT_EQ(s.theta_star.radians(), 0.0);
    EXPECT_FALSE(s.direction_defined);
}

TEST(SupTheta, MatchesDenseThetaGrid) {
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const Operator op(rng.matrix(3));
        const Vector f = rng.vector(3);
        const auto s = sup_theta_at(op, f);
        EXPECT_NEAR(mu_theta_at(op, s.theta_star, f).value, s.value, 1e-12);
        double best = -2.0;
        for (int k = 0; k < 100000; ++k) {
            best = std::max(best, mu_theta_at(op, Theta{2 * kPi * k / 100000}, f).value);
        }
        EXPECT_NEAR(best, s.value, 1e-6);
        EXPECT_LE(best, s.value + 1e-12);
    }
}

TEST(StationaryResidual, ExampleMinimizerAtFirstAxis) {
    const Vector e = stationary_residual(Operator(example_matrix()), Theta{0.0}, UnitVector(Vector{1.0, 0.0}));
    EXPECT_LE(norm(e), 1e-12);
}

TEST(StationaryResidual, VanishesForIdentity) {
    Rng rng(8);
    const Operator op(Matrix::identity(4));
    for (double th : {0.0, 1.0, 2.5}) {
        EXPECT_LE(norm(stationary_residual(op, Theta{th}, rng.unit(4))), 1e-14);
    }
}

TEST(StationaryResidual, OrthogonalToItsVector) {
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const Operator op(Complex(rng.uniform(0.1, 5.0)) * rng.matrix(static_cast<std::size_t>(rng.integer(1, 6))));
        const auto f = rng.unit(op.size());
        const Complex ef = inner(stationary_residual(op, Theta{rng.uniform(-7.0, 7.0)}, f), f.vector());
        const double bound = 1e-10 * std::pow(op.norm(), 3);
        EXPECT_LE(std::abs(ef.real()), bound);
        EXPECT_LE(std::abs(ef.imag()), bound);
    }
}

TEST(StationaryResidual, ComponentsByDirectSubstitution) {
    Rng rng(10);
    const Operator op(rng.matrix(3));
    const Theta th{0.7};
    const auto f = rng.unit(3);
    const Vector tf = op.matrix() * f.vector();
    const Complex z = inner(tf, f.vector());
    const double tf2 = norm(tf) * norm(tf);
    const double c = std::cos(0.7) * z.real() + std::sin(0.7) * z.imag();
    const Vector af = op.real_part() * f.vector();
    const Vector bf = op.imag_part() * f.vector();
    const Vector gf = adjoint(op.matrix()) * tf;
    const Vector e = stationary_residual(op, th, f);
    for (std::size_t i = 0; i < 3; ++i) {
        const Complex expected =
            2.0 * tf2 * (std::cos(0.7) * af[i] + std::sin(0.7) * bf[i]) - c * (gf[i] + tf2 * f[i]);
        EXPECT_LE(std::abs(e[i] - expected), 1e-13);
    }
}

TEST(RiemannianGradient, VanishesAtNormalEigenvectorWithMatchingTheta) {
    Rng rng(11);
    const Matrix u = rng.unitary(3);
    const std::vector<Complex> d{Complex(1, 2), Complex(-0.5, 0.3), Complex(2, -1)};
    const Operator op(u * Matrix::diagonal(d) * adjoint(u));
    for (std::size_t k = 0; k < 3; ++k) {
        const UnitVector f = UnitVector::normalized(u.column(k));
        EXPECT_LE(norm(riemannian_gradient(op, Theta{std::arg(d[k])}, f)), 1e-12);
    }
}

TEST(RiemannianGradient, TangentAtExampleMidpoint) {
    const UnitVector f = UnitVector::normalized(Vector{1.0, 1.0});
    const Vector g = riemannian_gradient(Operator(example_matrix()), Theta{0.0}, f);
    EXPECT_GT(norm(g), 1e-3);
    EXPECT_LE(std::abs(inner(g, f.vector()).real()), 1e-15);
}

TEST(RiemannianGradient, MatchesCentralDifferences) {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const Operator op(rng.matrix(static_cast<std::size_t>(rng.integer(2, 5))));
        const Theta th{rng.uniform(0.0, 2 * kPi)};
        const auto f = rng.unit(op.size());
        const Vector grad = riemannian_gradient(op, th, f);
        for (int d = 0; d < 5; ++d) {
            const Vector g = random_tangent(rng, f);
            const double analytic = inner(grad, g).real();
            const double numeric = finite_difference(op, th, f, g, 1e-6);
            EXPECT_LE(std::abs(analytic - numeric), 1e-5 * std::max(std::abs(analytic), 1e-3))
                << "trial " << trial << " direction " << d;
        }
    }
}

TEST(RiemannianGradient, EqualsResidualOverCubedNorm) {
    Rng rng(13);
    const Operator op(rng.matrix(4));
    const auto f = rng.unit(4);
    const Theta th{1.3};
    const Vector g = riemannian_gradient(op, th, f);
    const Vector e = stationary_residual(op, th, f);
    const double tf3 = std::pow(norm(op.matrix() * f.vector()), 3);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_LE(std::abs(g[i] - e[i] / tf3), 1e-13);
    }
}

TEST(EpsilonStar, ExampleValues) {
    const Operator op(example_matrix());
    const UnitVector e1(Vector{1.0, 0.0});
    EXPECT_NEAR(epsilon_star(op, Theta{0.0}, e1), 2.0 / 13.0, 1e-15);
    EXPECT_NEAR(epsilon_star(op, Theta{kPi / 4}, e1), -1.0 / (13.0 * std::sqrt(2.0)), 1e-15);
}

TEST(EpsilonStar, IdentityGivesOne) {
    Rng rng(14);
    EXPECT_NEAR(epsilon_star(Operator(Matrix::identity(3)), Theta{0.0}, rng.unit(3)), 1.0, 1e-15);
}

TEST(EpsilonStar, MinimizesResidualDistance) {
    Rng rng(15);
    for (int trial = 0; trial < 50; ++trial) {
        const Operator op(rng.matrix(3));
        const Theta th{rng.uniform(0.0, 2 * kPi)};
        const auto f = rng.unit(3);
        const double eps = epsilon_star(op, th, f);
        auto dist2 = [&](double e) {
            Vector r = op.matrix() * f.vector();
            for (std::size_t i = 0; i < 3; ++i) {
                r[i] = e * r[i] - th.phase() * f[i];
            }
            return norm(r) * norm(r);
        };
        const double mu = mu_theta_at(op, th, f).value;
        EXPECT_NEAR(dist2(eps), 1.0 - mu * mu, 1e-12);
        EXPECT_LE(dist2(eps), dist2(eps + 1e-4));
        EXPECT_LE(dist2(eps), dist2(eps - 1e-4));
    }
}

TEST(Evaluator, AgreesWithFreeFunctions) {
    Rng rng(16);
    const Operator op(rng.matrix(3));
    const Theta th{2.1};
    MuThetaEvaluator eval(op, th);
    const auto f = rng.unit(3);
    double value = 0.0;
    Vector grad(3);
    ASSERT_TRUE(eval.evaluate(f.span(), value, grad.span()));
    EXPECT_NEAR(value, mu_theta_at(op, th, f).value, 1e-15);
    const Vector expected = riemannian_gradient(op, th, f);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_LE(std::abs(grad[i] - expected[i]), 1e-14);
    }
    const Vector residual = eval.last_residual();
    const Vector direct = stationary_residual(op, th, f);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_LE(std::abs(residual[i] - direct[i]), 1e-13);
    }

    const Operator singular(Matrix::diagonal({Complex(1.0), Complex(0.0)}));
    MuThetaEvaluator degenerate(singular, th);
    EXPECT_FALSE(degenerate.evaluate(Vector{0.0, 1.0}.span(), value, {}));
}

TEST(Evaluator, TotalRatioGradientMatchesDifferences) {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const Operator op(rng.matrix(3));
        TotalRatioEvaluator eval(op);
        const auto f = rng.unit(3);
        double q = 0.0;
        Vector grad(3);
        ASSERT_TRUE(eval.evaluate(f.span(), q, grad.span()));
        const double ratio = total_ratio_at(op, f);
        EXPECT_NEAR(q, ratio * ratio, 1e-14);
        const Vector g = random_tangent(rng, f);
        auto at = [&](double t) {
            Vector x = f.vector();
            for (std::size_t i = 0; i < 3; ++i) {
                x[i] += t * g[i];
            }
            const double r = total_ratio_at(op, x);
            return r * r;
        };
        const double numeric = (at(1e-6) - at(-1e-6)) / 2e-6;
        EXPECT_NEAR(inner(grad, g).real(), numeric, 1e-5 * std::max(1.0, std::abs(numeric)));
    }
}
