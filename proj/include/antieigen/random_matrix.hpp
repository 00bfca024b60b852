#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "antieigen/linalg.hpp"

namespace antieigen {

enum class Ensemble { general, normal, hermitian, hermitian_positive_definite, diagonal };

std::string_view to_string(Ensemble e);
std::optional<Ensemble> parse_ensemble(std::string_view name);

/// Recipe for a reproducible random test operator.
///  - general:  entries with real and imaginary parts i.i.d. uniform on [-1, 1]
///  - normal:   U diag(d) U* with U from an orthonormalized general matrix
///  - hermitian: (M + M*) / 2
///  - hermitian_positive_definite: M*M + 0.1 I
///  - diagonal: random complex diagonal
/// The result is multiplied by `scale`.
struct RandomMatrixSpec {
    std::size_t n = 2;
    Ensemble ensemble = Ensemble::general;
    double scale = 1.0;
    std::uint64_t seed = 0;

    /// Throws InvalidInput unless 2 <= n <= 8 and scale > 0.
    void validate() const;
};

Matrix generate_matrix(const RandomMatrixSpec& spec);

/// Deterministic uniform point on the unit sphere of C^n.
Vector random_unit_vector(std::size_t n, std::uint64_t seed);

} // namespace antieigen
