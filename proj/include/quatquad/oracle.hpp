#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "quatquad/quaternion.hpp"
#include "quatquad/solver.hpp"

namespace quatquad {

template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

/// Every root reported by the oracle satisfies this residual bound relative
/// to residual_scale(); verification holds set members to the same bound.
inline constexpr double kOracleResidualBound = 1e-8;

/// Number of samples drawn from an infinite set during verification.
inline constexpr std::size_t kVerifySampleCount = 64;

template <typename Scalar = double>
struct OracleConfig {
    int n_starts = 400;
    /// Half-width of the start box; values <= 0 select default_box_scale().
    Scalar box_scale = Scalar(0);
    Scalar newton_tol = Scalar(1e-12);
    int max_iters = 80;
    Scalar cluster_radius = Scalar(1e-6);
    std::uint64_t seed = 0;
};

enum class OracleVerdict { Match, ExtraRoot, MissingRoot, Inconclusive };

[[nodiscard]] constexpr std::string_view verdict_name(OracleVerdict v) {
    switch (v) {
        case OracleVerdict::Match: return "match";
        case OracleVerdict::ExtraRoot: return "extra_root";
        case OracleVerdict::MissingRoot: return "missing_root";
        default: return "inconclusive";
    }
}

template <typename Scalar = double>
struct OracleReport {
    std::vector<Quaternion<Scalar>> roots;
    Scalar max_residual{};
    OracleVerdict verdict = OracleVerdict::Inconclusive;
};

/// Start-box half-width guaranteed to cover every root: any solution obeys
/// |P| |X|^2 <= |S| + (|Q| + |R|) |X|, hence
/// |X| <= sqrt(|S|/|P|) + (|Q| + |R|)/|P|, padded by a factor of 4.
template <typename Scalar>
[[nodiscard]] Scalar default_box_scale(const EquationCoefficients<Scalar>& c) {
    const Scalar p = modulus(c.P);
    return Scalar(4) * (Scalar(1) + std::sqrt(modulus(c.S) / p) + (modulus(c.Q) + modulus(c.R)) / p);
}

/// Left-hand side minus right-hand side of the equation as a map R^4 -> R^4.
/// Accepts any fixed-size 4-vector expression.
template <typename Scalar, typename Derived>
[[nodiscard]] Vector4<Scalar> real_system(const EquationCoefficients<Scalar>& c,
                                          const Eigen::MatrixBase<Derived>& v) {
    static_assert(Derived::RowsAtCompileTime == 4 && Derived::ColsAtCompileTime == 1);
    const Quaternion<Scalar> X{v(0), v(1), v(2), v(3)};
    const Quaternion<Scalar> xc = conjugate(X);
    return to_vector4(X * c.P * xc + X * c.Q + c.R * xc - c.S);
}

/// Analytic Jacobian of real_system; column m is the directional derivative
/// along basis element e_m:  e_m P X* + X P e_m* + e_m Q + R e_m*.
template <typename Scalar, typename Derived>
[[nodiscard]] Matrix4<Scalar> jacobian(const EquationCoefficients<Scalar>& c, const Eigen::MatrixBase<Derived>& v) {
    static_assert(Derived::RowsAtCompileTime == 4 && Derived::ColsAtCompileTime == 1);
    const Quaternion<Scalar> X{v(0), v(1), v(2), v(3)};
    const Quaternion<Scalar> xc = conjugate(X);
    Matrix4<Scalar> J;
    for (std::size_t m = 0; m < 4; ++m) {
        const Quaternion<Scalar> e = Quaternion<Scalar>::basis(m);
        const Quaternion<Scalar> ec = conjugate(e);
        J.col(static_cast<Eigen::Index>(m)) = to_vector4(e * c.P * xc + X * c.P * ec + e * c.Q + c.R * ec);
    }
    return J;
}

namespace detail {

template <typename Scalar>
[[nodiscard]] bool lexicographic_less(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b) {
    return std::tie(a.w, a.x, a.y, a.z) < std::tie(b.w, b.x, b.y, b.z);
}

/// Damped Gauss-Newton iteration from one start; the step is the minimal-norm
/// least-squares solution so rank-deficient Jacobians on solution manifolds
/// still yield a descent direction.
template <typename Scalar>
[[nodiscard]] std::optional<std::pair<Quaternion<Scalar>, Scalar>> newton_refine(
    const EquationCoefficients<Scalar>& c, const Quaternion<Scalar>& start, const OracleConfig<Scalar>& cfg) {
    Vector4<Scalar> x = to_vector4(start);
    Scalar res = real_system(c, x).norm();

    const auto converged = [&](const Vector4<Scalar>& v, Scalar r) {
        return r <= cfg.newton_tol * residual_scale(c, from_vector4(v));
    };

    for (int it = 0; it < cfg.max_iters && !converged(x, res); ++it) {
        const Matrix4<Scalar> J = jacobian(c, x);
        const Vector4<Scalar> F = real_system(c, x);
        Eigen::CompleteOrthogonalDecomposition<Matrix4<Scalar>> cod(J);
        const Vector4<Scalar> step = cod.solve(-F);
        if (!step.allFinite()) {
            return std::nullopt;
        }
        Scalar lambda = Scalar(1);
        bool improved = false;
        for (int halving = 0; halving < 30; ++halving) {
            const Vector4<Scalar> trial = x + lambda * step;
            const Scalar trial_res = real_system(c, trial).norm();
            if (trial_res < res) {
                x = trial;
                res = trial_res;
                improved = true;
                break;
            }
            lambda /= Scalar(2);
        }
        if (!improved) {
            break;
        }
    }
    if (converged(x, res)) {
        return std::make_pair(from_vector4(x), res);
    }
    return std::nullopt;
}

}  // namespace detail

/// Runs damped Newton from n_starts seeded uniform points and clusters the
/// converged results.  Each cluster is represented by its smallest-residual
/// member; representatives are sorted by components, so the report depends
/// only on the configuration.  The verdict is left Inconclusive (no solution
/// set was compared against).
template <typename Scalar>
[[nodiscard]] OracleReport<Scalar> newton_multistart(const EquationCoefficients<Scalar>& c,
                                                     const OracleConfig<Scalar>& cfg = {}) {
    detail::require_nonzero_p(c);
    const Scalar box = cfg.box_scale > Scalar(0) ? cfg.box_scale : default_box_scale(c);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<Scalar> coord(-box, box);

    std::vector<std::pair<Quaternion<Scalar>, Scalar>> converged;
    for (int k = 0; k < cfg.n_starts; ++k) {
        const Quaternion<Scalar> start{coord(rng), coord(rng), coord(rng), coord(rng)};
        if (auto hit = detail::newton_refine(c, start, cfg)) {
            converged.push_back(*hit);
        }
    }

    std::sort(converged.begin(), converged.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return detail::lexicographic_less(a.first, b.first);
    });

    std::vector<std::pair<Quaternion<Scalar>, Scalar>> reps;
    for (const auto& cand : converged) {
        const bool absorbed = std::any_of(reps.begin(), reps.end(), [&](const auto& rep) {
            return modulus(cand.first - rep.first) <= cfg.cluster_radius;
        });
        if (!absorbed) {
            reps.push_back(cand);
        }
    }
    std::sort(reps.begin(), reps.end(),
              [](const auto& a, const auto& b) { return detail::lexicographic_less(a.first, b.first); });

    OracleReport<Scalar> report;
    for (const auto& [root, res] : reps) {
        report.roots.push_back(root);
        report.max_residual = std::max(report.max_residual, res);
    }
    return report;
}

/// Cross-checks a closed-form solution set against the numerical oracle.
///
/// Match requires (a) every member or sample of the set to satisfy the
/// equation within kOracleResidualBound * residual_scale, and (b) every
/// multistart root to lie within 10 * cluster_radius of the set.  A finite
/// member that Newton cannot re-find from its own position yields
/// MissingRoot; stray oracle roots yield ExtraRoot.
template <typename Scalar>
[[nodiscard]] OracleReport<Scalar> verify_solution_set(const EquationCoefficients<Scalar>& c,
                                                       const SolutionSet<Scalar>& set,
                                                       const OracleConfig<Scalar>& cfg = {}) {
    OracleReport<Scalar> report = newton_multistart(c, cfg);
    const Scalar near_tol = Scalar(10) * cfg.cluster_radius;

    bool members_ok = true;
    for (const auto& sample : sample_solution_set(set, kVerifySampleCount, cfg.seed)) {
        if (residual(c, sample) > static_cast<Scalar>(kOracleResidualBound) * residual_scale(c, sample)) {
            members_ok = false;
        }
    }

    bool roots_on_set = true;
    for (const auto& root : report.roots) {
        if (!(distance_to_set(set, root) <= near_tol)) {
            roots_on_set = false;
        }
    }

    bool missing = false;
    for (const auto& member : finite_members(set)) {
        const auto refound = detail::newton_refine(c, member, cfg);
        if (!refound || modulus(refound->first - member) > near_tol) {
            missing = true;
        }
    }

    if (!roots_on_set) {
        report.verdict = OracleVerdict::ExtraRoot;
    } else if (missing) {
        report.verdict = OracleVerdict::MissingRoot;
    } else if (members_ok) {
        report.verdict = OracleVerdict::Match;
    } else {
        report.verdict = OracleVerdict::Inconclusive;
    }
    return report;
}

}  // namespace quatquad
