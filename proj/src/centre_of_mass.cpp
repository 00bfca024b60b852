#include "antieigen/centre_of_mass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "antieigen/error.hpp"

namespace antieigen {

namespace {

constexpr double kInvPhi = 0.6180339887498949;
constexpr double kRelativeWidth = 1e-10;
// The inner search of the nested minimization feeds the outer one; its error shows up
// there as noise, so it runs down to roundoff.
constexpr double kInnerRelativeWidth = 4e-16;
constexpr int kMaxGoldenIterations = 300;
constexpr double kTopSubspaceTolerance = 1e-9;

void validate_pair(const Matrix& b, const Matrix& a) {
    if (a.size() != b.size()) {
        throw InvalidInput("centre of mass: operator dimensions differ");
    }
    if (!a.all_finite() || !b.all_finite()) {
        throw InvalidInput("centre of mass: non-finite entries");
    }
    if (a.is_zero()) {
        throw InvalidInput("centre of mass: reference operator A is zero");
    }
}

// ||B - lam A||
class Distance {
  public:
    Distance(const Matrix& b, const Matrix& a) : b_(&b), a_(&a), work_(b.size()) {}

    double operator()(Complex lam) {
        ++evaluations;
        const auto bb = b_->row_major();
        const auto aa = a_->row_major();
        for (std::size_t i = 0; i < b_->size(); ++i) {
            for (std::size_t j = 0; j < b_->size(); ++j) {
                const std::size_t k = i * b_->size() + j;
                work_(i, j) = bb[k] - lam * aa[k];
            }
        }
        return operator_norm(work_);
    }

    int evaluations = 0;

  private:
    const Matrix* b_;
    const Matrix* a_;
    Matrix work_;
};

struct GoldenResult {
    double x = 0.0;
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Golden-section minimization of a convex function on [lo, hi]; returns the best point seen.
template <typename F>
GoldenResult golden_minimize(F&& fn, double lo, double hi, double rel_width = kRelativeWidth) {
    double a = lo;
    double b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = fn(x1);
    double f2 = fn(x2);
    GoldenResult best{x1, f1, a, b};
    if (f2 < f1) {
        best.x = x2;
        best.value = f2;
    }
    for (int i = 0; i < kMaxGoldenIterations; ++i) {
        if (b - a <= rel_width * (1.0 + std::abs(best.x))) {
            break;
        }
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = fn(x1);
            if (f1 < best.value) {
                best.x = x1;
                best.value = f1;
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = fn(x2);
            if (f2 < best.value) {
                best.x = x2;
                best.value = f2;
            }
        }
    }
    best.lo = a;
    best.hi = b;
    return best;
}

// Any minimizer satisfies |lam| ||A|| - ||B|| <= ||B - lam A|| <= ||B||, so |lam| <= 2 ||B|| / ||A||.
double search_radius(const Matrix& b, const Matrix& a) {
    const double na = operator_norm(a);
    const double nb = operator_norm(b);
    return 2.0 * nb / na * (1.0 + 1e-12) + std::numeric_limits<double>::min();
}

// An element of the subdifferential of eps -> ||B - eps A|| at eps: -Re<A v, M v> / ||M|| with v a
// top right singular vector of M = B - eps A. Any element will do for the sign test below.
double subgradient(const Matrix& b, const Matrix& a, double eps) {
    const Matrix m = b - Complex(eps) * a;
    const auto eig = hermitian_eigen(adjoint(m) * m);
    const double sigma = std::sqrt(std::max(0.0, eig.eigenvalues.front()));
    if (sigma == 0.0) {
        return 0.0;
    }
    const Vector v = eig.eigenvectors.column(0);
    return -inner(a * v, m * v).real() / sigma;
}

// Golden section only resolves a smooth minimum to about sqrt(roundoff) in eps, because the
// values flatten out; the subgradient sign keeps resolving it down to roundoff.
GoldenResult bisect_subgradient(const Matrix& b, const Matrix& a, double lo, double hi, Distance& dist) {
    for (int i = 0; i < kMaxGoldenIterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= kInnerRelativeWidth * (1.0 + std::abs(mid)) || mid <= lo || mid >= hi) {
            break;
        }
        const double s = subgradient(b, a, mid);
        if (s == 0.0) {
            lo = hi = mid;
            break;
        }
        (s > 0.0 ? hi : lo) = mid;
    }
    const double x = 0.5 * (lo + hi);
    return {x, dist(Complex(x, 0.0)), lo, hi};
}

} // namespace

RealCentreResult real_centre_of_mass(const Matrix& b, const Matrix& a) {
    validate_pair(b, a);
    Distance dist(b, a);
    const double radius = search_radius(b, a);
    auto g = golden_minimize([&](double eps) { return dist(Complex(eps, 0.0)); }, -radius, radius);
    // Polish inside a widened golden bracket when the subgradient signs confirm it encloses the minimizer.
    const double pad = 4.0 * (g.hi - g.lo);
    double lo = std::max(-radius, g.lo - pad);
    double hi = std::min(radius, g.hi + pad);
    if (subgradient(b, a, lo) > 0.0 || subgradient(b, a, hi) < 0.0) {
        lo = -radius;
        hi = radius;
    }
    const auto polished = bisect_subgradient(b, a, lo, hi, dist);
    // Near the minimum the two values differ only by roundoff; trust the sign test there.
    if (polished.value <= g.value * (1.0 + 1e-12)) {
        g = polished;
    }
    // The origin is always a candidate (it is the minimizer whenever B = 0).
    const double at_zero = dist(Complex{});
    if (at_zero < g.value) {
        g.x = 0.0;
        g.value = at_zero;
    }
    return {g.x, g.value, g.lo, g.hi, dist.evaluations};
}

ComplexCentreResult total_centre_of_mass(const Matrix& b, const Matrix& a) {
    validate_pair(b, a);
    Distance dist(b, a);
    const double radius = search_radius(b, a);

    // phi(x) = min over y of h(x + iy) is convex in x, so both levels are unimodal.
    auto inner = [&](double x) {
        return golden_minimize([&](double y) { return dist(Complex(x, y)); }, -radius, radius, kInnerRelativeWidth);
    };
    auto outer = golden_minimize([&](double x) { return inner(x).value; }, -radius, radius);
    const auto at_best = inner(outer.x);
    Complex lam(outer.x, at_best.x);
    double value = at_best.value;
    const double at_zero = dist(Complex{});
    if (at_zero < value) {
        lam = Complex{};
        value = at_zero;
    }
    return {lam, value, dist.evaluations};
}

double cos_from_distance(const Operator& op, Theta theta) {
    const Matrix rotated = std::conj(theta.phase()) * op.matrix();
    const double d = real_centre_of_mass(Matrix::identity(op.size()), rotated).distance;
    return std::sqrt(std::max(0.0, 1.0 - d * d));
}

double total_cos_from_distance(const Operator& op) {
    const double d = total_centre_of_mass(Matrix::identity(op.size()), op.matrix()).distance;
    return std::sqrt(std::max(0.0, 1.0 - d * d));
}

CentreWitness witness_vector(const Operator& op, Theta theta) {
    if (op.is_zero()) {
        throw InvalidInput("zero operator has no antieigenvalues");
    }
    const std::size_t n = op.size();
    const Complex lam = theta.phase();
    const Matrix lam_identity = lam * Matrix::identity(n);
    const double eps0 = real_centre_of_mass(lam_identity, op.matrix()).epsilon0;
    const Matrix c = lam_identity - Complex(eps0) * op.matrix();
    const Matrix c_adj = adjoint(c);
    const auto eig = hermitian_eigen(c_adj * c);
    const double top = std::max(0.0, eig.eigenvalues.front());

    std::size_t m = 1;
    while (m < n && eig.eigenvalues[m] >= top - kTopSubspaceTolerance * std::max(1.0, top)) {
        ++m;
    }

    Vector f = eig.eigenvectors.column(0);
    if (m > 1) {
        // Re<Cf, Tf> = <H f, f> with H = (T*C + C*T) / 2; pick f in the top subspace U with <Hf, f> = 0.
        const Matrix h = 0.5 * (op.adjoint() * c + c_adj * op.matrix());
        Matrix hu(m);
        std::vector<Vector> u;
        u.reserve(m);
        for (std::size_t k = 0; k < m; ++k) {
            u.push_back(eig.eigenvectors.column(k));
        }
        for (std::size_t p = 0; p < m; ++p) {
            const Vector hp = h * u[p];
            for (std::size_t q = 0; q < m; ++q) {
                hu(q, p) = inner(hp, u[q]);
            }
        }
        const auto local = hermitian_eigen(hu);
        const double hi = local.eigenvalues.front();
        const double lo = local.eigenvalues.back();
        Vector y(m);
        if (lo <= 0.0 && hi >= 0.0 && hi > lo) {
            const double sin2 = -lo / (hi - lo);
            const double sn = std::sqrt(sin2);
            const double cs = std::sqrt(1.0 - sin2);
            for (std::size_t k = 0; k < m; ++k) {
                y[k] = cs * local.eigenvectors(k, m - 1) + sn * local.eigenvectors(k, 0);
            }
        } else {
            const std::size_t pick = std::abs(lo) < std::abs(hi) ? m - 1 : 0;
            y = local.eigenvectors.column(pick);
        }
        f = Vector(n);
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                f[i] += y[k] * u[k][i];
            }
        }
    }

    UnitVector unit = UnitVector::normalized(std::move(f));
    const Vector cf = c * unit.vector();
    const Vector tf = op.matrix() * unit.vector();
    const double re_cross = inner(cf, tf).real();
    const double norm_gap = std::sqrt(top) - norm(cf);
    return {std::move(unit), eps0, re_cross, norm_gap, m};
}

} // namespace antieigen
