#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "antieigen/centre_of_mass.hpp"
#include "antieigen/error.hpp"
#include "antieigen/functionals.hpp"
#include "antieigen/matrix_document.hpp"
#include "antieigen/sphere_optimizer.hpp"
#include "antieigen/verify.hpp"

namespace py = pybind11;
using namespace antieigen;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const ComplexArray& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
        throw InvalidInput("expected a square two-dimensional array");
    }
    const auto n = static_cast<std::size_t>(a.shape(0));
    return Matrix(n, std::vector<Complex>(a.data(), a.data() + n * n));
}

Vector to_vector(const ComplexArray& a) {
    if (a.ndim() != 1) {
        throw InvalidInput("expected a one-dimensional array");
    }
    return Vector(std::vector<Complex>(a.data(), a.data() + a.shape(0)));
}

ComplexArray from_matrix(const Matrix& m) {
    const auto n = static_cast<py::ssize_t>(m.size());
    ComplexArray out({n, n});
    std::copy(m.row_major().begin(), m.row_major().end(), out.mutable_data());
    return out;
}

ComplexArray from_vector(const Vector& v) {
    ComplexArray out(static_cast<py::ssize_t>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.mutable_data()[i] = v[i];
    }
    return out;
}

OptimizerConfig config(int restarts, std::uint64_t seed) {
    OptimizerConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

py::dict to_dict(const AntieigenResult& r) {
    py::dict d;
    d["theta"] = r.theta.radians();
    d["value"] = r.value;
    d["witness"] = from_vector(r.witness.vector());
    d["residual_norm"] = r.residual_norm;
    d["restarts_used"] = r.restarts_used;
    d["iterations"] = r.iterations;
    d["converged"] = r.converged;
    d["near_kernel"] = r.near_kernel;
    return d;
}

py::dict to_dict(const VerificationReport& r) {
    py::dict d;
    d["identity"] = r.identity;
    d["subject"] = r.subject;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["gap"] = r.gap;
    d["tolerance"] = r.tolerance;
    d["pass"] = r.pass;
    d["enforced"] = r.enforced;
    d["notes"] = r.notes;
    return d;
}

constexpr std::uint64_t kDefaultSeed = OptimizerConfig{}.seed;

} // namespace

PYBIND11_MODULE(antieigen, m) {
    m.doc() = "Theta-antieigenvalues, total antieigenvalues and centres of mass of complex matrices.";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<DegenerateVector>(m, "DegenerateVector", base.ptr());
    py::register_exception<NotHermitian>(m, "NotHermitian", base.ptr());
    py::register_exception<NoAdmissibleVector>(m, "NoAdmissibleVector", base.ptr());

    m.def(
        "mu_theta",
        [](const ComplexArray& t, double theta, int restarts, std::uint64_t seed) {
            return to_dict(minimize_mu_theta(Operator(to_matrix(t)), Theta{theta}, config(restarts, seed)));
        },
        py::arg("t"), py::arg("theta"), py::arg("restarts") = 32, py::arg("seed") = kDefaultSeed,
        "Infimum of mu_theta over the unit sphere, with its witness vector.");

    m.def(
        "total_antieigenvalue",
        [](const ComplexArray& t, int restarts, std::uint64_t seed) {
            return to_dict(total_antieigenvalue(Operator(to_matrix(t)), config(restarts, seed)));
        },
        py::arg("t"), py::arg("restarts") = 32, py::arg("seed") = kDefaultSeed);

    m.def(
        "mu_theta_at",
        [](const ComplexArray& t, double theta, const ComplexArray& f) {
            return mu_theta_at(Operator(to_matrix(t)), Theta{theta}, to_vector(f)).value;
        },
        py::arg("t"), py::arg("theta"), py::arg("f"));

    m.def(
        "total_ratio_at",
        [](const ComplexArray& t, const ComplexArray& f) { return total_ratio_at(Operator(to_matrix(t)), to_vector(f)); },
        py::arg("t"), py::arg("f"));

    m.def(
        "epsilon_star",
        [](const ComplexArray& t, double theta, const ComplexArray& f) {
            return epsilon_star(Operator(to_matrix(t)), Theta{theta}, UnitVector::normalized(to_vector(f)));
        },
        py::arg("t"), py::arg("theta"), py::arg("f"));

    m.def(
        "real_centre_of_mass",
        [](const ComplexArray& b, const ComplexArray& a) {
            const auto r = real_centre_of_mass(to_matrix(b), to_matrix(a));
            return py::make_tuple(r.epsilon0, r.distance);
        },
        py::arg("b"), py::arg("a"), "(eps0, ||B - eps0 A||) minimizing over real eps.");

    m.def(
        "total_centre_of_mass",
        [](const ComplexArray& b, const ComplexArray& a) {
            const auto r = total_centre_of_mass(to_matrix(b), to_matrix(a));
            return py::make_tuple(r.lambda0, r.distance);
        },
        py::arg("b"), py::arg("a"), "(lambda0, ||B - lambda0 A||) minimizing over complex lambda.");

    m.def(
        "verify",
        [](const ComplexArray& t, double tol, int restarts, std::uint64_t seed) {
            CampaignOptions options;
            options.optimizer = config(restarts, seed);
            const auto result = verify_operator(Operator(to_matrix(t)), tol, options);
            py::list reports;
            for (const auto& r : result.reports) {
                reports.append(to_dict(r));
            }
            return py::make_tuple(result.all_enforced_pass(), reports);
        },
        py::arg("t"), py::arg("tol") = 1e-5, py::arg("restarts") = 32, py::arg("seed") = kDefaultSeed,
        "Runs every identity check on one matrix; returns (all_enforced_pass, reports).");

    m.def(
        "parse_matrix",
        [](const std::string& text) {
            const auto doc = parse_matrix_document(text);
            return py::make_tuple(from_matrix(doc.matrix), doc.label);
        },
        py::arg("text"), "Parses a JSON matrix document into (array, label).");

    m.def(
        "dump_matrix",
        [](const ComplexArray& t, std::optional<std::string> label) {
            return dump_matrix_document({to_matrix(t), std::move(label)});
        },
        py::arg("t"), py::arg("label") = py::none());
}
