#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quatquad/oracle.hpp"
#include "quatquad/serialization.hpp"
#include "quatquad/solver.hpp"

namespace quatquad {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitInvalidCoefficients = 3;
inline constexpr int kExitOracleMismatch = 4;

inline constexpr std::uint64_t kDefaultSeed = 12345;

/// One named equation instance from a problem file.
struct ProblemEntry {
    std::string id;
    EquationCoefficients<double> coefficients;
};

/// Defaults a problem file may carry; command-line flags override them.
struct ProblemFileOptions {
    std::optional<double> tolerance;
    std::optional<int> samples;
    std::optional<bool> verify;
    std::optional<std::uint64_t> seed;
};

/// Parsed problem file: a list of uniquely named instances plus options.
struct ProblemFile {
    std::vector<ProblemEntry> problems;
    ProblemFileOptions options;
};

inline void from_json(const nlohmann::json& j, ProblemEntry& entry) {
    if (!j.is_object()) {
        throw JsonShapeError("problem entry must be an object");
    }
    entry.id = j.at("id").get<std::string>();
    from_json(j.at("P"), entry.coefficients.P);
    from_json(j.at("Q"), entry.coefficients.Q);
    from_json(j.at("R"), entry.coefficients.R);
    from_json(j.at("S"), entry.coefficients.S);
}

inline void to_json(nlohmann::json& j, const ProblemEntry& entry) {
    j = nlohmann::json{{"id", entry.id},
                       {"P", entry.coefficients.P},
                       {"Q", entry.coefficients.Q},
                       {"R", entry.coefficients.R},
                       {"S", entry.coefficients.S}};
}

inline void from_json(const nlohmann::json& j, ProblemFile& file) {
    if (!j.is_object() || !j.contains("problems") || !j.at("problems").is_array()) {
        throw JsonShapeError("problem file must contain a \"problems\" array");
    }
    file.problems = j.at("problems").get<std::vector<ProblemEntry>>();
    std::unordered_set<std::string> ids;
    for (const auto& entry : file.problems) {
        if (!ids.insert(entry.id).second) {
            throw JsonShapeError("duplicate problem id: " + entry.id);
        }
    }
    file.options = {};
    if (j.contains("options")) {
        const auto& opts = j.at("options");
        if (opts.contains("tolerance")) file.options.tolerance = opts.at("tolerance").get<double>();
        if (opts.contains("samples")) file.options.samples = opts.at("samples").get<int>();
        if (opts.contains("verify")) file.options.verify = opts.at("verify").get<bool>();
        if (opts.contains("seed")) file.options.seed = opts.at("seed").get<std::uint64_t>();
    }
}

inline void to_json(nlohmann::json& j, const ProblemFile& file) {
    j = nlohmann::json{{"problems", file.problems}};
    nlohmann::json opts = nlohmann::json::object();
    if (file.options.tolerance) opts["tolerance"] = *file.options.tolerance;
    if (file.options.samples) opts["samples"] = *file.options.samples;
    if (file.options.verify) opts["verify"] = *file.options.verify;
    if (file.options.seed) opts["seed"] = *file.options.seed;
    if (!opts.empty()) j["options"] = opts;
}

/// Representative points of a solution set for output: finite sets verbatim,
/// circles at equispaced angles, spheres at seeded uniform directions.
template <typename Scalar>
[[nodiscard]] std::vector<Quaternion<Scalar>> emit_samples(const SolutionSet<Scalar>& set, std::size_t n,
                                                           std::uint64_t seed) {
    return sample_solution_set(set, n, seed);
}

namespace detail {

inline nlohmann::json solve_one(const ProblemEntry& entry, double tolerance, int samples, bool verify,
                                bool both_branches, std::uint64_t seed, bool& oracle_mismatch) {
    const SolveOptions<double> opts{tolerance};
    const SolutionSet<double> set = solve(entry.coefficients, opts);

    nlohmann::json result = solution_set_to_json(set);
    result["id"] = entry.id;

    double residual_max = 0.0;
    for (const auto& member : sample_solution_set(set, kVerifySampleCount, seed)) {
        residual_max = std::max(residual_max, residual(entry.coefficients, member));
    }
    result["residual_max"] = residual_max;

    if (samples > 0) {
        result["samples"] = emit_samples(set, static_cast<std::size_t>(samples), seed);
    }
    if (verify) {
        OracleConfig<double> cfg;
        cfg.seed = seed;
        const OracleReport<double> report = verify_solution_set(entry.coefficients, set, cfg);
        result["oracle"] = report;
        if (report.verdict != OracleVerdict::Match) {
            oracle_mismatch = true;
        }
    }
    if (both_branches) {
        nlohmann::json branches;
        try {
            branches["real"] = solution_set_to_json(solve_real_p(entry.coefficients, opts));
        } catch (const std::exception&) {
            branches["real"] = nullptr;
        }
        try {
            branches["nonreal"] = solution_set_to_json(solve_nonreal_p(entry.coefficients, opts));
        } catch (const std::exception&) {
            branches["nonreal"] = nullptr;
        }
        result["branches"] = branches;
    }
    return result;
}

}  // namespace detail

/// Runs the command-line driver on `args` (program name excluded).
/// Results go to `out` as one newline-terminated JSON document; diagnostics
/// go to `err`.  Returns the process exit code: 0 success, 2 parse error,
/// 3 invalid coefficients, 4 oracle mismatch under --verify.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Classifier and solver for quaternion equations X P X* + X Q + R X* = S"};
    app.require_subcommand(1);

    std::string file_path;
    double tolerance = 0.0;
    int samples = 0;
    bool verify = false;
    std::uint64_t seed = 0;
    bool both_branches = false;

    CLI::App* solve_cmd = app.add_subcommand("solve", "Solve every problem in a JSON file");
    solve_cmd->add_option("file", file_path, "Problem file")->required();
    CLI::Option* tol_opt = solve_cmd->add_option("--tolerance", tolerance, "Classification tolerance");
    CLI::Option* samples_opt = solve_cmd->add_option("--samples", samples, "Sample count for infinite sets");
    CLI::Option* verify_opt = solve_cmd->add_flag("--verify", verify, "Cross-check with the numerical oracle");
    CLI::Option* seed_opt = solve_cmd->add_option("--seed", seed, "Seed for sampling and the oracle");
    solve_cmd->add_flag("--both-branches", both_branches, "Also report each branch's answer separately");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    std::ifstream in(file_path);
    if (!in) {
        err << "error: cannot open problem file: " << file_path << '\n';
        return kExitParseError;
    }

    ProblemFile file;
    try {
        const nlohmann::json doc = nlohmann::json::parse(in);
        file = doc.get<ProblemFile>();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitParseError;
    }

    const double eff_tolerance = tol_opt->count() ? tolerance : file.options.tolerance.value_or(1e-9);
    const int eff_samples = samples_opt->count() ? samples : file.options.samples.value_or(0);
    const bool eff_verify = verify_opt->count() ? verify : file.options.verify.value_or(false);
    const std::uint64_t eff_seed = seed_opt->count() ? seed : file.options.seed.value_or(kDefaultSeed);

    for (const auto& entry : file.problems) {
        if (!(norm_sq(entry.coefficients.P) >= kZeroDivisorFloor)) {
            err << "error: problem \"" << entry.id << "\" has P = 0\n";
            return kExitInvalidCoefficients;
        }
    }

    nlohmann::json results = nlohmann::json::array();
    bool oracle_mismatch = false;
    try {
        for (const auto& entry : file.problems) {
            results.push_back(detail::solve_one(entry, eff_tolerance, eff_samples, eff_verify, both_branches,
                                                eff_seed, oracle_mismatch));
        }
    } catch (const InvalidCoefficientsError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidCoefficients;
    }

    out << nlohmann::json{{"results", results}}.dump() << '\n';
    return oracle_mismatch ? kExitOracleMismatch : kExitSuccess;
}

}  // namespace quatquad
