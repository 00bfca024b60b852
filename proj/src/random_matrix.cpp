#include "antieigen/random_matrix.hpp"

#include <array>
#include <cmath>
#include <random>

#include "antieigen/error.hpp"

namespace antieigen {

namespace {

constexpr std::array<std::pair<Ensemble, std::string_view>, 5> kNames{{
    {Ensemble::general, "general"},
    {Ensemble::normal, "normal"},
    {Ensemble::hermitian, "hermitian"},
    {Ensemble::hermitian_positive_definite, "hermitian-positive-definite"},
    {Ensemble::diagonal, "diagonal"},
}};

Matrix uniform_matrix(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double re = u(rng);
            const double im = u(rng);
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

// Columns of m orthonormalized by modified Gram-Schmidt (two passes).
Matrix orthonormalize(const Matrix& m) {
    const std::size_t n = m.size();
    std::vector<Vector> cols;
    for (std::size_t j = 0; j < n; ++j) {
        Vector v = m.column(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : cols) {
                const Complex c = inner(v, q);
                v -= c * q;
            }
        }
        v *= Complex(1.0 / norm(v), 0.0);
        cols.push_back(std::move(v));
    }
    Matrix q(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            q(i, j) = cols[j][i];
        }
    }
    return q;
}

} // namespace

std::string_view to_string(Ensemble e) {
    for (const auto& [value, name] : kNames) {
        if (value == e) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Ensemble> parse_ensemble(std::string_view name) {
    for (const auto& [value, n] : kNames) {
        if (n == name) {
            return value;
        }
    }
    if (name == "hpd") {
        return Ensemble::hermitian_positive_definite;
    }
    return std::nullopt;
}

void RandomMatrixSpec::validate() const {
    if (n < 2 || n > 8) {
        throw InvalidInput("random matrix dimension must lie in [2, 8]");
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw InvalidInput("random matrix scale must be positive and finite");
    }
}

Matrix generate_matrix(const RandomMatrixSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    const std::size_t n = spec.n;
    Matrix out(n);
    switch (spec.ensemble) {
    case Ensemble::general:
        out = uniform_matrix(n, rng);
        break;
    case Ensemble::normal: {
        const Matrix u = orthonormalize(uniform_matrix(n, rng));
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        std::vector<Complex> diag(n);
        for (auto& x : diag) {
            const double re = d(rng);
            const double im = d(rng);
            x = Complex(re, im);
        }
        out = u * Matrix::diagonal(diag) * adjoint(u);
        break;
    }
    case Ensemble::hermitian: {
        const Matrix m = uniform_matrix(n, rng);
        out = 0.5 * (m + adjoint(m));
        break;
    }
    case Ensemble::hermitian_positive_definite: {
        const Matrix m = uniform_matrix(n, rng);
        out = adjoint(m) * m + Complex(0.1) * Matrix::identity(n);
        break;
    }
    case Ensemble::diagonal: {
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        std::vector<Complex> diag(n);
        for (auto& x : diag) {
            const double re = d(rng);
            const double im = d(rng);
            x = Complex(re, im);
        }
        out = Matrix::diagonal(diag);
        break;
    }
    }
    out *= Complex(spec.scale);
    return out;
}

Vector random_unit_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(n);
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

} // namespace antieigen
