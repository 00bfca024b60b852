#pragma once

// Dense complex linear algebra for small operators (n <= 128).
//
// Inner-product convention used everywhere in the library:
//   <u, v> = sum_i u_i * conj(v_i)
// i.e. linear in the first slot and conjugate-linear in the second, so that
// <Tf, f> is the usual numerical-range value.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace antieigen {

using Complex = std::complex<double>;

/// Largest accepted operator dimension.
inline constexpr std::size_t kMaxDimension = 128;

class Vector {
  public:
    Vector() = default;
    explicit Vector(std::size_t n) : entries_(n) {}
    Vector(std::initializer_list<Complex> values) : entries_(values) {}
    explicit Vector(std::vector<Complex> values) : entries_(std::move(values)) {}

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] Complex& operator[](std::size_t i) { return entries_[i]; }
    [[nodiscard]] const Complex& operator[](std::size_t i) const { return entries_[i]; }

    [[nodiscard]] std::span<Complex> span() noexcept { return entries_; }
    [[nodiscard]] std::span<const Complex> span() const noexcept { return entries_; }
    [[nodiscard]] const std::vector<Complex>& entries() const noexcept { return entries_; }

    auto begin() noexcept { return entries_.begin(); }
    auto end() noexcept { return entries_.end(); }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    Vector& operator+=(const Vector& other);
    Vector& operator-=(const Vector& other);
    Vector& operator*=(Complex scale);

    friend bool operator==(const Vector&, const Vector&) = default;

  private:
    std::vector<Complex> entries_;
};

Vector operator+(Vector lhs, const Vector& rhs);
Vector operator-(Vector lhs, const Vector& rhs);
Vector operator*(Complex scale, Vector v);

/// <u, v>, linear in u and conjugate-linear in v. Throws InvalidInput on size mismatch.
Complex inner(std::span<const Complex> u, std::span<const Complex> v);
inline Complex inner(const Vector& u, const Vector& v) { return inner(u.span(), v.span()); }

double norm(std::span<const Complex> v);
inline double norm(const Vector& v) { return norm(v.span()); }

/// Complex vector of unit Euclidean norm.
class UnitVector {
  public:
    /// Throws InvalidInput unless | ||v|| - 1 | <= 1e-12.
    explicit UnitVector(Vector v);

    /// Scales v to unit norm. Throws InvalidInput for the zero vector.
    static UnitVector normalized(Vector v);

    [[nodiscard]] const Vector& vector() const noexcept { return v_; }
    [[nodiscard]] std::size_t size() const noexcept { return v_.size(); }
    [[nodiscard]] const Complex& operator[](std::size_t i) const { return v_[i]; }
    [[nodiscard]] std::span<const Complex> span() const noexcept { return v_.span(); }

    operator const Vector&() const noexcept { return v_; } // NOLINT(google-explicit-constructor)

  private:
    struct Trusted {};
    UnitVector(Vector v, Trusted) : v_(std::move(v)) {}
    Vector v_;
};

/// Square n x n complex matrix, row-major, 1 <= n <= kMaxDimension.
class Matrix {
  public:
    /// Zero matrix.
    explicit Matrix(std::size_t n);
    Matrix(std::size_t n, std::vector<Complex> row_major);
    Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const Complex> entries);
    static Matrix diagonal(std::initializer_list<Complex> entries);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] Complex& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    [[nodiscard]] const Complex& operator()(std::size_t i, std::size_t j) const {
        return data_[i * n_ + j];
    }
    [[nodiscard]] std::span<const Complex> row_major() const noexcept { return data_; }

    [[nodiscard]] Vector column(std::size_t j) const;
    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] bool all_finite() const noexcept;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(Complex scale);

    friend bool operator==(const Matrix&, const Matrix&) = default;

  private:
    std::size_t n_;
    std::vector<Complex> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(Complex scale, Matrix m);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Vector operator*(const Matrix& m, const Vector& v);

/// y = M x without allocation; y must not alias x.
void multiply(const Matrix& m, std::span<const Complex> x, std::span<Complex> y);

/// result(i, j) = conj(m(j, i)).
Matrix adjoint(const Matrix& m);

/// Cartesian decomposition T = A + iB with A = (T + T*)/2 and B = (T - T*)/(2i).
struct HermitianParts {
    Matrix real_part;
    Matrix imag_part;
};
HermitianParts hermitian_parts(const Matrix& t);

double frobenius_norm(const Matrix& m);
double max_abs_entry(const Matrix& m);

/// ||H - H*||_F <= 1e-10 * max(1, ||H||_F).
bool is_hermitian(const Matrix& h);

struct HermitianEigenDecomposition {
    std::vector<double> eigenvalues; ///< sorted descending
    Matrix eigenvectors;             ///< unitary, column k pairs with eigenvalues[k]
    int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
/// Throws NotHermitian when the input fails is_hermitian().
HermitianEigenDecomposition hermitian_eigen(const Matrix& h);

/// Largest singular value, from the top eigenvalue of M*M.
double operator_norm(const Matrix& m);

} // namespace antieigen
