#include "antieigen/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "antieigen/error.hpp"

namespace antieigen {

namespace {

void check_dimension(std::size_t n) {
    if (n == 0) {
        throw InvalidInput("matrix dimension must be at least 1");
    }
    if (n > kMaxDimension) {
        throw InvalidInput("matrix dimension " + std::to_string(n) + " exceeds the limit of " +
                           std::to_string(kMaxDimension));
    }
}

void check_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw InvalidInput("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

constexpr double kJacobiTolerance = 1e-13;
constexpr int kJacobiMaxSweeps = 100;

double off_diagonal_norm(const Matrix& h) {
    double sum = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        for (std::size_t j = 0; j < h.size(); ++j) {
            if (i != j) {
                sum += std::norm(h(i, j));
            }
        }
    }
    return std::sqrt(sum);
}

} // namespace

// ---------------------------------------------------------------- Vector

Vector& Vector::operator+=(const Vector& other) {
    check_same_size(size(), other.size());
    for (std::size_t i = 0; i < size(); ++i) {
        entries_[i] += other.entries_[i];
    }
    return *this;
}

Vector& Vector::operator-=(const Vector& other) {
    check_same_size(size(), other.size());
    for (std::size_t i = 0; i < size(); ++i) {
        entries_[i] -= other.entries_[i];
    }
    return *this;
}

Vector& Vector::operator*=(Complex scale) {
    for (auto& x : entries_) {
        x *= scale;
    }
    return *this;
}

Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
Vector operator*(Complex scale, Vector v) { return v *= scale; }

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
    check_same_size(u.size(), v.size());
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i) {
        sum += u[i] * std::conj(v[i]);
    }
    return sum;
}

double norm(std::span<const Complex> v) {
    double sum = 0.0;
    for (const auto& x : v) {
        sum += std::norm(x);
    }
    return std::sqrt(sum);
}

// ---------------------------------------------------------------- UnitVector

UnitVector::UnitVector(Vector v) : v_(std::move(v)) {
    if (v_.size() == 0) {
        throw InvalidInput("unit vector must have at least one entry");
    }
    const double nrm = norm(v_);
    if (!(std::abs(nrm - 1.0) <= 1e-12)) {
        throw InvalidInput("vector is not of unit norm (norm = " + std::to_string(nrm) + ")");
    }
}

UnitVector UnitVector::normalized(Vector v) {
    const double nrm = norm(v);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
        throw InvalidInput("cannot normalize a zero or non-finite vector");
    }
    v *= Complex(1.0 / nrm, 0.0);
    return {std::move(v), Trusted{}};
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t n) : n_(n) {
    check_dimension(n);
    data_.assign(n * n, Complex{});
}

Matrix::Matrix(std::size_t n, std::vector<Complex> row_major) : n_(n), data_(std::move(row_major)) {
    check_dimension(n);
    if (data_.size() != n * n) {
        throw InvalidInput("expected " + std::to_string(n * n) + " entries, got " +
                           std::to_string(data_.size()));
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) : n_(rows.size()) {
    check_dimension(n_);
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_) {
            throw InvalidInput("matrix rows must all have length " + std::to_string(n_));
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const Complex> entries) {
    Matrix m(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        m(i, i) = entries[i];
    }
    return m;
}

Matrix Matrix::diagonal(std::initializer_list<Complex> entries) {
    return diagonal(std::span<const Complex>(entries.begin(), entries.size()));
}

Vector Matrix::column(std::size_t j) const {
    Vector v(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        v[i] = (*this)(i, j);
    }
    return v;
}

bool Matrix::is_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& x) { return x == Complex{}; });
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& x) {
        return std::isfinite(x.real()) && std::isfinite(x.imag());
    });
}

Matrix& Matrix::operator+=(const Matrix& other) {
    check_same_size(n_, other.n_);
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    check_same_size(n_, other.n_);
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator*=(Complex scale) {
    for (auto& x : data_) {
        x *= scale;
    }
    return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(Complex scale, Matrix m) { return m *= scale; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    check_same_size(lhs.size(), rhs.size());
    const std::size_t n = lhs.size();
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

void multiply(const Matrix& m, std::span<const Complex> x, std::span<Complex> y) {
    const std::size_t n = m.size();
    check_same_size(n, x.size());
    check_same_size(n, y.size());
    const Complex* row = m.row_major().data();
    for (std::size_t i = 0; i < n; ++i, row += n) {
        Complex sum{};
        for (std::size_t j = 0; j < n; ++j) {
            sum += row[j] * x[j];
        }
        y[i] = sum;
    }
}

Vector operator*(const Matrix& m, const Vector& v) {
    Vector out(m.size());
    multiply(m, v.span(), out.span());
    return out;
}

Matrix adjoint(const Matrix& m) {
    const std::size_t n = m.size();
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(i, j) = std::conj(m(j, i));
        }
    }
    return out;
}

HermitianParts hermitian_parts(const Matrix& t) {
    const std::size_t n = t.size();
    Matrix a(n);
    Matrix b(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Complex tij = t(i, j);
            const Complex tji_conj = std::conj(t(j, i));
            a(i, j) = 0.5 * (tij + tji_conj);
            // (x - y) / (2i) = -i (x - y) / 2
            const Complex d = tij - tji_conj;
            b(i, j) = Complex(0.5 * d.imag(), -0.5 * d.real());
        }
    }
    return {std::move(a), std::move(b)};
}

double frobenius_norm(const Matrix& m) { return norm(m.row_major()); }

double max_abs_entry(const Matrix& m) {
    double best = 0.0;
    for (const auto& x : m.row_major()) {
        best = std::max(best, std::abs(x));
    }
    return best;
}

bool is_hermitian(const Matrix& h) {
    double defect = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        for (std::size_t j = 0; j < h.size(); ++j) {
            defect += std::norm(h(i, j) - std::conj(h(j, i)));
        }
    }
    return std::sqrt(defect) <= 1e-10 * std::max(1.0, frobenius_norm(h));
}

HermitianEigenDecomposition hermitian_eigen(const Matrix& input) {
    if (!input.all_finite()) {
        throw InvalidInput("matrix has non-finite entries");
    }
    if (!is_hermitian(input)) {
        throw NotHermitian("hermitian_eigen: input is not Hermitian");
    }
    const std::size_t n = input.size();

    // Work on the exactly Hermitian part.
    Matrix h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = input(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            h(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));
            h(j, i) = std::conj(h(i, j));
        }
    }
    Matrix v = Matrix::identity(n);

    const double scale = frobenius_norm(h);
    int sweeps = 0;
    while (sweeps < kJacobiMaxSweeps && off_diagonal_norm(h) > kJacobiTolerance * scale) {
        ++sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex hpq = h(p, q);
                const double beta = std::abs(hpq);
                if (beta == 0.0) {
                    continue;
                }
                const Complex phase = hpq / beta;
                const double tau = (h(q, q).real() - h(p, p).real()) / (2.0 * beta);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = t * c;
                const Complex u_qp = -s * std::conj(phase);
                const Complex u_qq = c * std::conj(phase);

                // H <- H U, V <- V U (columns p, q).
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex hp = h(k, p);
                    const Complex hq = h(k, q);
                    h(k, p) = c * hp + u_qp * hq;
                    h(k, q) = s * hp + u_qq * hq;
                    const Complex vp = v(k, p);
                    const Complex vq = v(k, q);
                    v(k, p) = c * vp + u_qp * vq;
                    v(k, q) = s * vp + u_qq * vq;
                }
                // H <- U* H (rows p, q).
                const Complex w_pq = -s * phase;
                const Complex w_qq = c * phase;
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex hp = h(p, k);
                    const Complex hq = h(q, k);
                    h(p, k) = c * hp + w_pq * hq;
                    h(q, k) = s * hp + w_qq * hq;
                }
                h(p, q) = 0.0;
                h(q, p) = 0.0;
                h(p, p) = h(p, p).real();
                h(q, q) = h(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return h(a, a).real() > h(b, b).real();
    });

    HermitianEigenDecomposition out{std::vector<double>(n), Matrix(n), sweeps};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = h(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

double operator_norm(const Matrix& m) {
    if (m.size() == 1) {
        return std::abs(m(0, 0));
    }
    const auto eig = hermitian_eigen(adjoint(m) * m);
    return std::sqrt(std::max(0.0, eig.eigenvalues.front()));
}

} // namespace antieigen
