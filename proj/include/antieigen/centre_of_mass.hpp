#pragma once

// Centres of mass of an operator B with respect to A:
//
//   real:  eps0    = argmin over real eps    of ||B - eps A||
//   total: lambda0 = argmin over complex lam of ||B - lam A||
//
// Both objectives are convex (norm of an affine map), so nested golden-section
// searches on an a-priori bracket are exact up to the evaluation noise.

#include "antieigen/functionals.hpp"
#include "antieigen/linalg.hpp"

namespace antieigen {

struct RealCentreResult {
    double epsilon0 = 0.0;
    double distance = 0.0; ///< ||B - eps0 A||
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int iterations = 0;
};

struct ComplexCentreResult {
    Complex lambda0{};
    double distance = 0.0; ///< ||B - lambda0 A||
    int iterations = 0;
};

/// Throws InvalidInput if A is zero, the sizes differ or an entry is non-finite.
RealCentreResult real_centre_of_mass(const Matrix& b, const Matrix& a);

ComplexCentreResult total_centre_of_mass(const Matrix& b, const Matrix& a);

/// sqrt(1 - d^2) with d = min over real eps of ||eps e^{-i theta} T - I||.
/// Equals inf over the sphere of |mu_theta(f)|, which is mu_theta(T) only when
/// mu_theta(f) >= 0 for every f.
double cos_from_distance(const Operator& op, Theta theta);

/// sqrt(1 - d^2) with d = min over complex lam of ||lam T - I||.
double total_cos_from_distance(const Operator& op);

struct CentreWitness {
    UnitVector f;
    double epsilon0 = 0.0; ///< real centre of e^{i theta} I with respect to T
    double re_cross = 0.0; ///< Re<(lam I - eps0 T) f, T f>
    double norm_gap = 0.0; ///< ||lam I - eps0 T|| - ||(lam I - eps0 T) f||
    std::size_t top_multiplicity = 1;
};

/// Norm-attaining vector of lam I - eps0 T (lam = e^{i theta}). When the top singular
/// value is repeated, the vector inside the top singular subspace is chosen to make
/// re_cross vanish whenever that is possible.
CentreWitness witness_vector(const Operator& op, Theta theta);

} // namespace antieigen
