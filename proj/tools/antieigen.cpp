// antieigen: command-line front end.
//
// Exit codes: 0 success, 1 an enforced identity failed, 2 input error,
// 3 numerical non-convergence (partial output is still printed).

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "antieigen/centre_of_mass.hpp"
#include "antieigen/error.hpp"
#include "antieigen/functionals.hpp"
#include "antieigen/matrix_document.hpp"
#include "antieigen/random_matrix.hpp"
#include "antieigen/sphere_optimizer.hpp"
#include "antieigen/verify.hpp"

namespace {

using namespace antieigen;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitIdentityFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitNonConvergence = 3;

constexpr double kPi = std::numbers::pi;

enum class Format { text, json, csv };

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    int restarts = OptimizerConfig{}.restarts;
    std::string format = "text";
};

Format parse_format(const std::string& s) {
    if (s == "json") {
        return Format::json;
    }
    if (s == "csv") {
        return Format::csv;
    }
    return Format::text;
}

std::uint64_t resolve_seed(const CommonFlags& flags) {
    if (flags.seed) {
        return *flags.seed;
    }
    if (const char* env = std::getenv("ANTIEIGEN_SEED"); env != nullptr && *env != '\0') {
        const std::string_view text(env);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            throw InvalidInput("ANTIEIGEN_SEED must be an unsigned 64-bit integer, got '" + std::string(text) + "'");
        }
        return v;
    }
    return OptimizerConfig{}.seed;
}

OptimizerConfig make_config(const CommonFlags& flags) {
    OptimizerConfig cfg;
    cfg.restarts = flags.restarts;
    cfg.seed = resolve_seed(flags);
    cfg.validate();
    return cfg;
}

// Human output: 10 significant digits.
std::string human(double x) { return fmt::format("{:.10g}", x); }
std::string human(Complex z) { return fmt::format("{:.10g}{:+.10g}i", z.real(), z.imag()); }

// Machine output: shortest decimal that round-trips.
std::string exact(double x) { return fmt::format("{}", x); }
std::string exact(Complex z) { return fmt::format("{}{:+}i", z.real(), z.imag()); }

// Witnesses are defined up to a global phase; rotate the largest entry onto the positive reals.
Vector display_phase(const Vector& v) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[k])) {
            k = i;
        }
    }
    Vector out = v;
    if (std::abs(v[k]) > 0.0) {
        out *= std::conj(v[k]) / std::abs(v[k]);
        out[k] = Complex(out[k].real(), 0.0);
    }
    return out;
}

std::string join_vector(const Vector& v, bool machine) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) {
            out += ';';
        }
        out += machine ? exact(v[i]) : human(v[i]);
    }
    return out;
}

json vector_json(const Vector& v) {
    json out = json::array();
    for (const auto& z : v) {
        out.push_back(json::array({z.real(), z.imag()}));
    }
    return out;
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Optimizer seed (default: ANTIEIGEN_SEED or built-in)");
    cmd->add_option("--restarts", flags.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
    cmd->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
}

CLI::Option* add_theta(CLI::App* cmd, double& theta) {
    return cmd->add_option("--theta", theta, "Angle in radians")
        ->check(CLI::Validator(
            [](std::string& s) -> std::string {
                if (s.find("deg") != std::string::npos || s.find("\xC2\xB0") != std::string::npos) {
                    return "angles are radians only; degree input is rejected";
                }
                return {};
            },
            "RADIANS"));
}

// ---- compute ---------------------------------------------------------------

int cmd_compute(const std::string& path, double theta_value, const CommonFlags& flags) {
    const auto doc = load_matrix_document(path);
    const Operator op(doc.matrix);
    const Theta theta{theta_value};
    const auto cfg = make_config(flags);

    const auto result = minimize_mu_theta(op, theta, cfg);
    const double eps_star = epsilon_star(op, theta, result.witness);
    const auto centre = real_centre_of_mass(theta.phase() * Matrix::identity(op.size()), op.matrix());
    const Vector witness = display_phase(result.witness);

    switch (parse_format(flags.format)) {
    case Format::json: {
        json out = {{"theta", theta.radians()},
                    {"mu_theta", result.value},
                    {"witness", vector_json(witness)},
                    {"residual_norm", result.residual_norm},
                    {"converged", result.converged},
                    {"near_kernel", result.near_kernel},
                    {"restarts_used", result.restarts_used},
                    {"iterations", result.iterations},
                    {"epsilon_star_at_witness", eps_star},
                    {"centre_of_mass", {{"epsilon0", centre.epsilon0}, {"distance", centre.distance}}}};
        if (doc.label) {
            out["label"] = *doc.label;
        }
        std::cout << out.dump(2) << '\n';
        break;
    }
    case Format::csv:
        std::cout << "theta,mu_theta,witness_params,residual_norm,converged,epsilon_star_at_witness,"
                     "centre_epsilon0,centre_distance\n";
        std::cout << fmt::format("{},{},{},{},{},{},{},{}\n", exact(theta.radians()), exact(result.value),
                                 join_vector(witness, true), exact(result.residual_norm), result.converged,
                                 exact(eps_star), exact(centre.epsilon0), exact(centre.distance));
        break;
    case Format::text:
        if (doc.label) {
            std::cout << "matrix            " << *doc.label << '\n';
        }
        std::cout << "theta             " << human(theta.radians()) << '\n'
                  << "mu_theta          " << human(result.value) << '\n'
                  << "witness           " << join_vector(witness, false) << '\n'
                  << "residual norm     " << fmt::format("{:.3e}", result.residual_norm)
                  << (result.converged ? " (certified)" : " (NOT converged)") << '\n'
                  << "eps* at witness   " << human(eps_star) << '\n'
                  << "centre of mass    " << human(centre.epsilon0) << '\n'
                  << "centre distance   " << human(centre.distance) << '\n';
        if (result.near_kernel) {
            std::cout << "note: the best iterate approaches the kernel of T\n";
        }
        break;
    }
    if (!result.converged) {
        std::cerr << "antieigen: optimizer did not reach the residual certificate\n";
        return kExitNonConvergence;
    }
    return kExitOk;
}

// ---- sweep -----------------------------------------------------------------

int cmd_sweep(const std::string& path, int count, const CommonFlags& flags) {
    const auto doc = load_matrix_document(path);
    const Operator op(doc.matrix);
    const auto cfg = make_config(flags);
    const Format format = parse_format(flags.format);
    const Matrix identity = Matrix::identity(op.size());

    bool all_converged = true;
    json rows = json::array();
    if (format != Format::json) {
        std::cout << "theta,mu_theta,witness_params,epsilon_star_at_witness,centre_of_mass_distance\n";
    }
    for (int k = 0; k < count; ++k) {
        const Theta theta{2.0 * kPi * k / count};
        const auto result = minimize_mu_theta(op, theta, cfg);
        all_converged = all_converged && result.converged;
        const double eps_star = epsilon_star(op, theta, result.witness);
        const double distance = real_centre_of_mass(theta.phase() * identity, op.matrix()).distance;
        const Vector witness = display_phase(result.witness);
        if (format == Format::json) {
            rows.push_back({{"theta", theta.radians()},
                            {"mu_theta", result.value},
                            {"witness_params", join_vector(witness, true)},
                            {"epsilon_star_at_witness", eps_star},
                            {"centre_of_mass_distance", distance}});
        } else {
            const bool machine = format == Format::csv;
            auto show = [machine](double x) { return machine ? exact(x) : human(x); };
            std::cout << show(theta.radians()) << ',' << show(result.value) << ',' << join_vector(witness, machine)
                      << ',' << show(eps_star) << ',' << show(distance) << '\n';
        }
    }
    if (format == Format::json) {
        std::cout << rows.dump(2) << '\n';
    }
    if (!all_converged) {
        std::cerr << "antieigen: some rows did not reach the residual certificate\n";
        return kExitNonConvergence;
    }
    return kExitOk;
}

// ---- com -------------------------------------------------------------------

int cmd_com(const std::string& path, const std::string& mode, std::optional<double> theta_value,
            const CommonFlags& flags) {
    const auto doc = load_matrix_document(path);
    const Operator op(doc.matrix);
    const Format format = parse_format(flags.format);
    const std::size_t n = op.size();

    if (mode == "real") {
        if (!theta_value) {
            throw InvalidInput("com real requires --theta");
        }
        const Theta theta{*theta_value};
        const auto c = real_centre_of_mass(theta.phase() * Matrix::identity(n), op.matrix());
        const double cosine = cos_from_distance(op, theta);
        if (format == Format::json) {
            std::cout << json{{"mode", "real"},
                              {"theta", theta.radians()},
                              {"epsilon0", c.epsilon0},
                              {"distance", c.distance},
                              {"cosine", cosine},
                              {"bracket", {c.bracket_lo, c.bracket_hi}},
                              {"iterations", c.iterations}}
                             .dump(2)
                      << '\n';
        } else if (format == Format::csv) {
            std::cout << "mode,theta,epsilon0,distance,cosine\n"
                      << fmt::format("real,{},{},{},{}\n", exact(theta.radians()), exact(c.epsilon0),
                                     exact(c.distance), exact(cosine));
        } else {
            std::cout << "centre eps0        " << human(c.epsilon0) << '\n'
                      << "distance           " << human(c.distance) << '\n'
                      << "cosine sqrt(1-d^2) " << human(cosine) << '\n';
        }
        return kExitOk;
    }

    const auto c = total_centre_of_mass(Matrix::identity(n), op.matrix());
    const double cosine = total_cos_from_distance(op);
    if (format == Format::json) {
        std::cout << json{{"mode", "total"},
                          {"lambda0", {c.lambda0.real(), c.lambda0.imag()}},
                          {"distance", c.distance},
                          {"cosine", cosine},
                          {"iterations", c.iterations}}
                         .dump(2)
                  << '\n';
    } else if (format == Format::csv) {
        std::cout << "mode,lambda0,distance,cosine\n"
                  << fmt::format("total,{},{},{}\n", exact(c.lambda0), exact(c.distance), exact(cosine));
    } else {
        std::cout << "centre lambda0     " << human(c.lambda0) << '\n'
                  << "distance           " << human(c.distance) << '\n'
                  << "|cos|T             " << human(cosine) << '\n';
    }
    return kExitOk;
}

// ---- verify ----------------------------------------------------------------

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + '"';
}

void print_campaign(const CampaignResult& result, Format format) {
    if (format == Format::json) {
        json reports = json::array();
        for (const auto& r : result.reports) {
            reports.push_back({{"identity", r.identity},
                               {"subject", r.subject},
                               {"lhs", r.lhs},
                               {"rhs", r.rhs},
                               {"gap", r.gap},
                               {"tolerance", r.tolerance},
                               {"pass", r.pass},
                               {"enforced", r.enforced},
                               {"notes", r.notes}});
        }
        json summary = json::object();
        for (const auto& [name, s] : result.summary) {
            summary[name] = {{"passed", s.passed}, {"failed", s.failed}, {"report_only", s.report_only}};
        }
        std::cout << json{{"reports", reports}, {"summary", summary}, {"all_enforced_pass", result.all_enforced_pass()}}
                         .dump(2)
                  << '\n';
        return;
    }
    if (format == Format::csv) {
        std::cout << "identity,subject,lhs,rhs,gap,tolerance,pass,enforced,notes\n";
        for (const auto& r : result.reports) {
            std::cout << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.identity, csv_quote(r.subject), exact(r.lhs),
                                     exact(r.rhs), exact(r.gap), exact(r.tolerance), r.pass, r.enforced,
                                     csv_quote(r.notes));
        }
        return;
    }
    std::cout << fmt::format("{:<22} {:<40} {:>17} {:>17} {:>10}  {}\n", "identity", "subject", "lhs", "rhs", "gap",
                             "status");
    for (const auto& r : result.reports) {
        const char* status = !r.enforced ? (r.pass ? "report:agree" : "report:DISAGREE") : (r.pass ? "pass" : "FAIL");
        std::cout << fmt::format("{:<22} {:<40} {:>17} {:>17} {:>10.3e}  {}", r.identity, r.subject, human(r.lhs),
                                 human(r.rhs), r.gap, status);
        if (!r.notes.empty()) {
            std::cout << "  [" << r.notes << ']';
        }
        std::cout << '\n';
    }
    std::cout << "\nsummary\n";
    for (const auto& [name, s] : result.summary) {
        std::cout << fmt::format("  {:<22} passed {:>4}  failed {:>4}  report-only {:>4}\n", name, s.passed, s.failed,
                                 s.report_only);
    }
    std::cout << (result.all_enforced_pass() ? "all enforced identities pass\n" : "SOME ENFORCED IDENTITIES FAIL\n");
}

struct RandomFlags {
    bool enabled = false;
    std::size_t n = 3;
    int count = 10;
    std::string ensemble = "general";
    double scale = 1.0;
};

int cmd_verify(const std::optional<std::string>& path, const RandomFlags& random, double tol,
               const CommonFlags& flags) {
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw InvalidInput("--tol must be a positive finite number");
    }
    CampaignOptions options;
    options.optimizer = make_config(flags);

    CampaignResult result;
    if (random.enabled) {
        if (path) {
            throw InvalidInput("give either a matrix file or --random, not both");
        }
        const bool mixed = random.ensemble == "mixed";
        std::optional<Ensemble> ensemble = mixed ? Ensemble::general : parse_ensemble(random.ensemble);
        if (!ensemble) {
            throw InvalidInput("unknown ensemble '" + random.ensemble + "'");
        }
        constexpr Ensemble kAll[] = {Ensemble::general, Ensemble::normal, Ensemble::hermitian,
                                     Ensemble::hermitian_positive_definite, Ensemble::diagonal};
        std::vector<RandomMatrixSpec> specs;
        for (int i = 0; i < random.count; ++i) {
            RandomMatrixSpec spec;
            spec.n = random.n;
            spec.ensemble = mixed ? kAll[i % 5] : *ensemble;
            spec.scale = random.scale;
            spec.seed = options.optimizer.seed + static_cast<std::uint64_t>(i);
            spec.validate();
            specs.push_back(spec);
        }
        result = run_campaign(specs, tol, options);
    } else {
        if (!path) {
            throw InvalidInput("verify needs a matrix file or --random");
        }
        const auto doc = load_matrix_document(*path);
        const Operator op(doc.matrix);
        result = verify_operator(op, tol, options, doc.label.value_or("T"));
    }
    print_campaign(result, parse_format(flags.format));
    return result.all_enforced_pass() ? kExitOk : kExitIdentityFailed;
}

// ---- example ---------------------------------------------------------------

int cmd_example(const CommonFlags& flags) {
    const Operator op(Matrix::diagonal({Complex(2.0, -3.0), Complex(3.0, 2.0)}));
    const auto cfg = make_config(flags);
    const Format format = parse_format(flags.format);
    const double s13 = std::sqrt(13.0);
    const std::size_t n = op.size();

    struct Row {
        std::string quantity;
        std::string expected_text;
        std::string computed_text;
        double gap;
    };
    std::vector<Row> rows;
    auto scalar = [&](std::string name, double expected, double computed) {
        rows.push_back({std::move(name), human(expected), human(computed), std::abs(expected - computed)});
    };

    const auto total = total_antieigenvalue(op, cfg);
    scalar("|cos|T", 1.0 / std::sqrt(2.0), total.value);
    scalar("mu_0(T)", 2.0 / s13, minimize_mu_theta(op, Theta{0.0}, cfg).value);
    const Theta quarter{kPi / 4.0};
    const auto sym = minimize_mu_theta(op, quarter, cfg);
    scalar("mu_pi/4(T)", -1.0 / std::sqrt(26.0), sym.value);
    scalar("mu_pi/2(T)", -3.0 / s13, minimize_mu_theta(op, Theta{kPi / 2.0}, cfg).value);

    const auto lam = total_centre_of_mass(Matrix::identity(n), op.matrix());
    const Complex lam_expected(5.0 / 26.0, 1.0 / 26.0);
    rows.push_back({"total centre lambda0", human(lam_expected), human(lam.lambda0), std::abs(lam.lambda0 - lam_expected)});
    scalar("total centre distance", 1.0 / std::sqrt(2.0), lam.distance);
    scalar("real centre at theta=0", 2.0 / 13.0, real_centre_of_mass(Matrix::identity(n), op.matrix()).epsilon0);
    scalar("eps* at pi/4 witness", -1.0 / (13.0 * std::sqrt(2.0)), epsilon_star(op, quarter, sym.witness));
    scalar("||Tz||, ||z||=1", s13, operator_norm(op.matrix()));

    bool ok = true;
    for (const auto& r : rows) {
        ok = ok && r.gap <= 1e-6;
    }

    if (format == Format::json) {
        json out = json::array();
        for (const auto& r : rows) {
            out.push_back({{"quantity", r.quantity}, {"expected", r.expected_text}, {"computed", r.computed_text},
                           {"gap", r.gap}});
        }
        std::cout << out.dump(2) << '\n';
    } else if (format == Format::csv) {
        std::cout << "quantity,expected,computed,gap\n";
        for (const auto& r : rows) {
            std::cout << fmt::format("{},{},{},{}\n", csv_quote(r.quantity), r.expected_text, r.computed_text,
                                     exact(r.gap));
        }
    } else {
        std::cout << "T = diag(2-3i, 3+2i)\n\n";
        std::cout << fmt::format("{:<24} {:>28} {:>28} {:>10}\n", "quantity", "expected", "computed", "gap");
        for (const auto& r : rows) {
            std::cout << fmt::format("{:<24} {:>28} {:>28} {:>10.2e}\n", r.quantity, r.expected_text,
                                     r.computed_text, r.gap);
        }
    }
    return ok ? kExitOk : kExitNonConvergence;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Theta-antieigenvalues, total antieigenvalues and centres of mass of complex matrices"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "antieigen 0.1.0");

    CommonFlags flags;
    std::string matrix_path;
    double theta = 0.0;
    double tol = 1e-5;
    int resolution = 360;
    std::string mode;
    RandomFlags random;
    std::optional<std::string> verify_path;

    auto* compute = app.add_subcommand("compute", "Theta-antieigenvalue, witness and centre of mass");
    compute->add_option("matrix", matrix_path, "Matrix document (JSON)")->required();
    add_theta(compute, theta)->required();
    add_common(compute, flags);

    auto* sweep = app.add_subcommand("sweep", "mu_theta(T) on a uniform theta grid, as CSV");
    sweep->add_option("matrix", matrix_path, "Matrix document (JSON)")->required();
    sweep->add_option("--resolution,--count", resolution, "Number of theta samples on [0, 2 pi)")
        ->check(CLI::Range(2, 1000000));
    add_common(sweep, flags);

    auto* com = app.add_subcommand("com", "Real or total centre of mass of I with respect to T");
    com->add_option("matrix", matrix_path, "Matrix document (JSON)")->required();
    com->add_option("mode", mode, "real | total")->required()->check(CLI::IsMember({"real", "total"}));
    auto* com_theta = add_theta(com, theta);
    add_common(com, flags);

    auto* verify = app.add_subcommand("verify", "Check every identity on a matrix or a random campaign");
    verify->add_option("matrix", verify_path, "Matrix document (JSON)");
    verify->add_flag("--random", random.enabled, "Generate a seeded random campaign");
    verify->add_option("--n", random.n, "Dimension of random matrices")->check(CLI::Range(2, 8));
    verify->add_option("--count", random.count, "Number of random matrices")->check(CLI::NonNegativeNumber);
    verify->add_option("--ensemble", random.ensemble,
                       "general | normal | hermitian | hermitian-positive-definite | diagonal | mixed");
    verify->add_option("--scale", random.scale, "Scale of random matrices")->check(CLI::PositiveNumber);
    verify->add_option("--tol", tol, "Absolute tolerance for every identity");
    add_common(verify, flags);

    auto* example = app.add_subcommand("example", "Built-in worked example T = diag(2-3i, 3+2i)");
    add_common(example, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (compute->parsed()) {
            return cmd_compute(matrix_path, theta, flags);
        }
        if (sweep->parsed()) {
            return cmd_sweep(matrix_path, resolution, flags);
        }
        if (com->parsed()) {
            return cmd_com(matrix_path, mode, com_theta->count() > 0 ? std::optional(theta) : std::nullopt, flags);
        }
        if (verify->parsed()) {
            return cmd_verify(verify_path, random, tol, flags);
        }
        if (example->parsed()) {
            return cmd_example(flags);
        }
    } catch (const InvalidInput& e) {
        std::cerr << "antieigen: " << e.what() << '\n';
        return kExitInput;
    } catch (const NotHermitian& e) {
        std::cerr << "antieigen: " << e.what() << '\n';
        return kExitInput;
    } catch (const NoAdmissibleVector& e) {
        std::cerr << "antieigen: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "antieigen: " << e.what() << '\n';
        return kExitNonConvergence;
    }
    return kExitInput;
}
