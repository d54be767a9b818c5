#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "quatquad/geometry.hpp"
#include "quatquad/quaternion.hpp"

namespace quatquad {

/// Thrown when an equation has P = 0 (the quadratic term vanishes).
struct InvalidCoefficientsError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Coefficients of X P X* + X Q + R X* = S.
template <typename Scalar = double>
struct EquationCoefficients {
    Quaternion<Scalar> P, Q, R, S;
};

/// Tolerances used by the solver; no global state, callers pass these in.
template <typename Scalar = double>
struct SolveOptions {
    /// Relative tolerance for every equality decision in the case analysis,
    /// scaled by coefficient_scale().
    Scalar eps_class = Scalar(1e-9);
};

enum class CoefficientBranch { Real, Nonreal };

/// max(1, |P|, |Q|, |R|, |S|); the common scale for equality tests.
template <typename Scalar>
[[nodiscard]] Scalar coefficient_scale(const EquationCoefficients<Scalar>& c) {
    return std::max({Scalar(1), modulus(c.P), modulus(c.Q), modulus(c.R), modulus(c.S)});
}

namespace detail {
template <typename Scalar>
void require_nonzero_p(const EquationCoefficients<Scalar>& c) {
    if (!(norm_sq(c.P) >= static_cast<Scalar>(kZeroDivisorFloor))) {
        throw InvalidCoefficientsError("equation requires P != 0");
    }
}
}  // namespace detail

/// Chooses between the real-P and non-real-P solution procedures:
/// Real when |vector_part(P)| <= eps * |P|.  Throws on P = 0.
template <typename Scalar>
[[nodiscard]] CoefficientBranch classify_p(const EquationCoefficients<Scalar>& c, Scalar eps = Scalar(1e-9)) {
    detail::require_nonzero_p(c);
    const Scalar vec_norm = norm(vector_part(c.P));
    return vec_norm <= eps * modulus(c.P) ? CoefficientBranch::Real : CoefficientBranch::Nonreal;
}

/// Completed-square data for real P = p0: with Y = X + shift the equation
/// becomes p0 |Y|^2 + Y Q_tilde - Q_tilde* Y* = S_tilde.
template <typename Scalar = double>
struct ReducedRealForm {
    Scalar p0{};
    Quaternion<Scalar> Q_tilde;
    Quaternion<Scalar> S_tilde;
    Scalar rho{};
    Quaternion<Scalar> shift;
    /// rho |Q - R*|^2 - |vector_part(S_tilde)|^2; absent when Q = R* to tolerance.
    std::optional<Scalar> delta;
};

template <typename Scalar>
[[nodiscard]] ReducedRealForm<Scalar> reduce_real(const EquationCoefficients<Scalar>& c,
                                                  const SolveOptions<Scalar>& opts = {}) {
    detail::require_nonzero_p(c);
    ReducedRealForm<Scalar> red;
    red.p0 = scalar_part(c.P);
    const Quaternion<Scalar> qc_plus_r = conjugate(c.Q) + c.R;
    red.shift = qc_plus_r / (Scalar(2) * red.p0);
    red.Q_tilde = (c.Q - conjugate(c.R)) / Scalar(2);
    const Quaternion<Scalar> rq = c.R * c.Q;
    red.S_tilde = c.S + Quaternion<Scalar>(norm_sq(qc_plus_r) / (Scalar(4) * red.p0)) +
                  pure(vector_part(rq)) / red.p0;
    red.rho = scalar_part(red.S_tilde) / red.p0;

    const Scalar eq_tol = opts.eps_class * coefficient_scale(c);
    const Quaternion<Scalar> lin = c.Q - conjugate(c.R);
    if (modulus(lin) > eq_tol) {
        red.delta = red.rho * norm_sq(lin) - norm_sq(vector_part(red.S_tilde));
    }
    return red;
}

/// Reduction data for non-real P: with Z = X + shift the equation becomes
/// Z P Z* + Z R_tilde* + R_tilde Z* = S_tilde, and on the solution circle the
/// linear terms confine Z to dot4(Z, R_tilde) = hyperplane_offset.
template <typename Scalar = double>
struct ReducedNonrealForm {
    Quaternion<Scalar> R_tilde;
    Quaternion<Scalar> S_tilde;
    Quaternion<Scalar> shift;
    Scalar hyperplane_offset{};
};

template <typename Scalar>
[[nodiscard]] ReducedNonrealForm<Scalar> reduce_nonreal(const EquationCoefficients<Scalar>& c) {
    detail::require_nonzero_p(c);
    const Quaternion<Scalar> d = c.P - conjugate(c.P);
    const Quaternion<Scalar> d_inv = inverse(d);
    const Scalar d2 = norm_sq(d);
    const Quaternion<Scalar> qc = conjugate(c.Q);
    const Quaternion<Scalar> pc = conjugate(c.P);

    ReducedNonrealForm<Scalar> red;
    red.R_tilde = (qc * c.P - c.R * pc) * d_inv;
    red.S_tilde = c.S + (qc * c.P * conjugate(c.R) + c.R * pc * c.Q) / d2 + (c.R * (pc - c.P) * c.Q) / d2 -
                  (qc * pc * c.Q) / d2 - (c.R * pc * conjugate(c.R)) / d2;
    red.shift = (c.R - qc) * d_inv;

    const Scalar p_norm = norm(vector_part(c.P));
    const Scalar s_norm = norm(vector_part(red.S_tilde));
    red.hyperplane_offset =
        (scalar_part(red.S_tilde) * p_norm - scalar_part(c.P) * s_norm) / (Scalar(2) * p_norm);
    return red;
}

struct EmptySet {};

template <typename Scalar = double>
struct PointSet {
    Quaternion<Scalar> point;
};

template <typename Scalar = double>
struct TwoPointSet {
    Quaternion<Scalar> first, second;
};

template <typename Scalar = double>
struct SphereSet {
    Quaternion<Scalar> center;
    Scalar radius{};
};

/// Every solution set the equation can have.
template <typename Scalar = double>
using SolutionSet =
    std::variant<EmptySet, PointSet<Scalar>, TwoPointSet<Scalar>, SolutionCircle<Scalar>, SphereSet<Scalar>>;

enum class SolutionKind { Empty, Point, TwoPoints, Circle, ThreeSphere };

template <typename Scalar>
[[nodiscard]] SolutionKind kind(const SolutionSet<Scalar>& set) {
    return static_cast<SolutionKind>(set.index());
}

[[nodiscard]] constexpr std::string_view kind_name(SolutionKind k) {
    switch (k) {
        case SolutionKind::Empty: return "empty";
        case SolutionKind::Point: return "point";
        case SolutionKind::TwoPoints: return "two_points";
        case SolutionKind::Circle: return "circle";
        default: return "three_sphere";
    }
}

/// Solves the real-P branch.  Uses p0 = scalar_part(P) and ignores any
/// residual vector part; callers route through classify_p.
template <typename Scalar>
[[nodiscard]] SolutionSet<Scalar> solve_real_p(const EquationCoefficients<Scalar>& c,
                                               const SolveOptions<Scalar>& opts = {}) {
    const ReducedRealForm<Scalar> red = reduce_real(c, opts);
    const Scalar eq_tol = opts.eps_class * coefficient_scale(c);
    const Vector3<Scalar> s_vec = vector_part(red.S_tilde);
    const Scalar s_vec_norm = norm(s_vec);

    if (red.rho < -eq_tol) {
        return EmptySet{};
    }
    if (std::abs(red.rho) <= eq_tol) {
        if (s_vec_norm <= eq_tol) {
            return PointSet<Scalar>{-red.shift};
        }
        return EmptySet{};
    }

    const Quaternion<Scalar> lin = c.Q - conjugate(c.R);
    if (modulus(lin) <= eq_tol) {
        if (s_vec_norm <= eq_tol) {
            return SphereSet<Scalar>{-red.shift, std::sqrt(red.rho)};
        }
        return EmptySet{};
    }

    const Scalar lin2 = norm_sq(lin);
    const Scalar delta = red.rho * lin2 - s_vec_norm * s_vec_norm;
    const Scalar delta_tol = opts.eps_class * (red.rho * lin2 + s_vec_norm * s_vec_norm);
    const Quaternion<Scalar> lin_inv = inverse(lin);
    const Quaternion<Scalar> s_pure = pure(s_vec);
    if (delta > delta_tol) {
        const Scalar root = std::sqrt(delta);
        return TwoPointSet<Scalar>{(s_pure + Quaternion<Scalar>(root)) * lin_inv - red.shift,
                                   (s_pure - Quaternion<Scalar>(root)) * lin_inv - red.shift};
    }
    if (delta >= -delta_tol) {
        return PointSet<Scalar>{s_pure * lin_inv - red.shift};
    }
    return EmptySet{};
}

/// Solves the non-real-P branch; callers route through classify_p.
template <typename Scalar>
[[nodiscard]] SolutionSet<Scalar> solve_nonreal_p(const EquationCoefficients<Scalar>& c,
                                                  const SolveOptions<Scalar>& opts = {}) {
    const ReducedNonrealForm<Scalar> red = reduce_nonreal(c);
    const Scalar eq_tol = opts.eps_class * coefficient_scale(c);
    const Vector3<Scalar> p = vector_part(c.P);
    const Scalar p0 = scalar_part(c.P);
    const Vector3<Scalar> s_vec = vector_part(red.S_tilde);
    const Scalar s0 = scalar_part(red.S_tilde);
    const Scalar s_vec_norm = norm(s_vec);

    if (s_vec_norm <= eq_tol) {
        if (std::abs(s0) <= eq_tol) {
            return PointSet<Scalar>{-red.shift};
        }
        return EmptySet{};
    }

    auto circle_or_point = solution_circle(p, s_vec);
    SolutionCircle<Scalar> circle = std::get<SolutionCircle<Scalar>>(circle_or_point);

    const Scalar a1 = dot4(circle.plane.e1, red.R_tilde);
    const Scalar a2 = dot4(circle.plane.e2, red.R_tilde);
    if (std::max(std::abs(a1), std::abs(a2)) <= eq_tol) {
        if (std::abs(s0 * norm(p) - p0 * s_vec_norm) <= eq_tol) {
            circle.center = circle.center - red.shift;
            return circle;
        }
        return EmptySet{};
    }

    const Hyperplane<Scalar> h{red.R_tilde, red.hyperplane_offset};
    const auto cut = intersect_circle_hyperplane(circle, h, eq_tol / modulus(red.R_tilde));
    if (cut.contained) {
        circle.center = circle.center - red.shift;
        return circle;
    }
    if (cut.points.size() == 2) {
        return TwoPointSet<Scalar>{cut.points[0] - red.shift, cut.points[1] - red.shift};
    }
    if (cut.points.size() == 1) {
        return PointSet<Scalar>{cut.points[0] - red.shift};
    }
    return EmptySet{};
}

/// Complete solution set of X P X* + X Q + R X* = S.
template <typename Scalar>
[[nodiscard]] SolutionSet<Scalar> solve(const EquationCoefficients<Scalar>& c, const SolveOptions<Scalar>& opts = {}) {
    const CoefficientBranch branch = classify_p(c, opts.eps_class);
    return branch == CoefficientBranch::Real ? solve_real_p(c, opts) : solve_nonreal_p(c, opts);
}

/// |X P X* + X Q + R X* - S| for a candidate X.
template <typename Scalar>
[[nodiscard]] Scalar residual(const EquationCoefficients<Scalar>& c, const Quaternion<Scalar>& X) {
    const Quaternion<Scalar> xc = conjugate(X);
    return modulus(X * c.P * xc + X * c.Q + c.R * xc - c.S);
}

/// Natural size of the residual: coefficient scale times max(1, |X|^2).
template <typename Scalar>
[[nodiscard]] Scalar residual_scale(const EquationCoefficients<Scalar>& c, const Quaternion<Scalar>& X) {
    return coefficient_scale(c) * std::max(Scalar(1), norm_sq(X));
}

/// Euclidean distance from q to the nearest member of the set
/// (infinity for the empty set).
template <typename Scalar>
[[nodiscard]] Scalar distance_to_set(const SolutionSet<Scalar>& set, const Quaternion<Scalar>& q) {
    return std::visit(
        [&](const auto& alt) -> Scalar {
            using T = std::decay_t<decltype(alt)>;
            if constexpr (std::is_same_v<T, EmptySet>) {
                return std::numeric_limits<Scalar>::infinity();
            } else if constexpr (std::is_same_v<T, PointSet<Scalar>>) {
                return modulus(q - alt.point);
            } else if constexpr (std::is_same_v<T, TwoPointSet<Scalar>>) {
                return std::min(modulus(q - alt.first), modulus(q - alt.second));
            } else if constexpr (std::is_same_v<T, SolutionCircle<Scalar>>) {
                const Quaternion<Scalar> d = q - alt.center;
                const Scalar a = dot4(d, alt.plane.e1);
                const Scalar b = dot4(d, alt.plane.e2);
                const Scalar in_plane = std::sqrt(a * a + b * b);
                const Scalar off_sq = std::max(Scalar(0), norm_sq(d) - a * a - b * b);
                const Scalar ring = in_plane - alt.radius;
                return std::sqrt(ring * ring + off_sq);
            } else {
                return std::abs(modulus(q - alt.center) - alt.radius);
            }
        },
        set);
}

/// Members of a finite solution set, in solver order; empty for infinite sets.
template <typename Scalar>
[[nodiscard]] std::vector<Quaternion<Scalar>> finite_members(const SolutionSet<Scalar>& set) {
    std::vector<Quaternion<Scalar>> members;
    if (const auto* pt = std::get_if<PointSet<Scalar>>(&set)) {
        members.push_back(pt->point);
    } else if (const auto* two = std::get_if<TwoPointSet<Scalar>>(&set)) {
        members.push_back(two->first);
        members.push_back(two->second);
    }
    return members;
}

/// Representative members of a solution set.  Finite sets are returned
/// verbatim (n is ignored); circles are sampled at n equispaced angles and
/// spheres at n seeded uniform directions.
template <typename Scalar>
[[nodiscard]] std::vector<Quaternion<Scalar>> sample_solution_set(const SolutionSet<Scalar>& set, std::size_t n,
                                                                  std::uint64_t seed) {
    if (std::holds_alternative<EmptySet>(set) || std::holds_alternative<PointSet<Scalar>>(set) ||
        std::holds_alternative<TwoPointSet<Scalar>>(set)) {
        return finite_members(set);
    }
    std::vector<Quaternion<Scalar>> samples;
    samples.reserve(n);
    if (const auto* circle = std::get_if<SolutionCircle<Scalar>>(&set)) {
        const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
        for (std::size_t k = 0; k < n; ++k) {
            samples.push_back(circle_point(*circle, two_pi * Scalar(k) / Scalar(n)));
        }
        return samples;
    }
    const auto& sphere = std::get<SphereSet<Scalar>>(set);
    std::mt19937_64 rng(seed);
    std::normal_distribution<Scalar> gauss(Scalar(0), Scalar(1));
    while (samples.size() < n) {
        Quaternion<Scalar> dir{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
        const Scalar m = modulus(dir);
        if (m < Scalar(1e-6)) {
            continue;
        }
        samples.push_back(sphere.center + (sphere.radius / m) * dir);
    }
    return samples;
}

}  // namespace quatquad
