#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <variant>
#include <vector>

#include "quatquad/quaternion.hpp"

namespace quatquad {

/// Thrown when a direction that must be non-zero has zero modulus.
struct ZeroVectorError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thrown when a line is given a vanishing direction vector.
struct DegenerateDirectionError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Threshold on |p_hat + s_hat| below which the antipodal plane construction
/// is used instead of the mid-direction one.
inline constexpr double kAntipodalTol = 1e-7;

/// A quadratic discriminant within this relative distance of zero is treated
/// as an exact tangency (one intersection point).
inline constexpr double kTangencyTol = 1e-10;

/// Oriented 2-plane of quaternions V satisfying V p_hat = s_hat V,
/// spanned by the orthonormal frame {e1, e2}.
template <typename Scalar = double>
struct BisectorPlane {
    Quaternion<Scalar> e1, e2;
    Vector3<Scalar> p_hat, s_hat;
};

/// Circle of radius `radius` around `center` inside the 2-plane `plane`,
/// parameterized as center + radius * (cos(phi) e1 + sin(phi) e2).
template <typename Scalar = double>
struct SolutionCircle {
    BisectorPlane<Scalar> plane;
    Scalar radius{};
    Quaternion<Scalar> center;
};

/// Line point + xi * direction in quaternion space.
template <typename Scalar = double>
struct AffineLine {
    Quaternion<Scalar> point;
    Quaternion<Scalar> direction;
};

/// Affine hyperplane { Z : dot4(Z, normal) = offset }.
template <typename Scalar = double>
struct Hyperplane {
    Quaternion<Scalar> normal;
    Scalar offset{};
};

/// Builds the 2-plane of quaternions V with V p_hat = s_hat V.
///
/// For |p_hat + s_hat| > antipodal_tol the plane is u * span{1, p_hat} with
/// u the unit mid-direction of p_hat and s_hat.  At (near-)antipodal inputs
/// it is the plane of pure vectors orthogonal to p_hat.
/// Throws ZeroVectorError when either input vanishes.
template <typename Scalar>
[[nodiscard]] BisectorPlane<Scalar> bisector_plane(const Vector3<Scalar>& p, const Vector3<Scalar>& s,
                                                   Scalar antipodal_tol = Scalar(kAntipodalTol)) {
    const Scalar pn = norm(p);
    const Scalar sn = norm(s);
    if (pn == Scalar(0) || sn == Scalar(0)) {
        throw ZeroVectorError("bisector_plane: both directions must be non-zero");
    }
    const Vector3<Scalar> p_hat = p / pn;
    const Vector3<Scalar> s_hat = s / sn;

    BisectorPlane<Scalar> plane;
    plane.p_hat = p_hat;
    plane.s_hat = s_hat;

    const Vector3<Scalar> mid = p_hat + s_hat;
    const Scalar mid_norm = norm(mid);
    if (mid_norm > antipodal_tol) {
        const Quaternion<Scalar> u = pure(mid / mid_norm);
        plane.e1 = u;
        const Quaternion<Scalar> up = u * pure(p_hat);
        plane.e2 = normalized(up - dot4(up, plane.e1) * plane.e1);
    } else {
        std::size_t axis = 0;
        const Scalar comps[3] = {std::abs(p_hat.x), std::abs(p_hat.y), std::abs(p_hat.z)};
        if (comps[1] < comps[axis]) axis = 1;
        if (comps[2] < comps[axis]) axis = 2;
        Vector3<Scalar> a{};
        (axis == 0 ? a.x : axis == 1 ? a.y : a.z) = Scalar(1);
        const Vector3<Scalar> v1 = normalized(cross(a, p_hat));
        const Vector3<Scalar> v2 = cross(p_hat, v1);
        plane.e1 = pure(v1);
        plane.e2 = pure(v2);
    }
    return plane;
}

template <typename Scalar>
using CircleOrPoint = std::variant<SolutionCircle<Scalar>, Quaternion<Scalar>>;

/// Solution set of X p X* = s over pure non-zero p: a circle of radius
/// sqrt(|s|/|p|) in the bisector plane of p and s, centered at the origin.
/// Inputs with |s| <= zero_tol * |p| collapse to the single point 0.
template <typename Scalar>
[[nodiscard]] CircleOrPoint<Scalar> solution_circle(const Vector3<Scalar>& p, const Vector3<Scalar>& s,
                                                    Scalar zero_tol = Scalar(0)) {
    const Scalar pn = norm(p);
    if (pn == Scalar(0)) {
        throw ZeroVectorError("solution_circle: p must be non-zero");
    }
    const Scalar sn = norm(s);
    if (sn <= zero_tol * pn) {
        return Quaternion<Scalar>::zero();
    }
    SolutionCircle<Scalar> circle;
    circle.plane = bisector_plane(p, s);
    circle.radius = std::sqrt(sn / pn);
    circle.center = Quaternion<Scalar>::zero();
    return circle;
}

/// Point of a circle at angle phi.
template <typename Scalar>
[[nodiscard]] Quaternion<Scalar> circle_point(const SolutionCircle<Scalar>& c, Scalar phi) {
    return c.center + c.radius * (std::cos(phi) * c.plane.e1 + std::sin(phi) * c.plane.e2);
}

/// Intersects the central sphere |Y|^2 = rho with line.point + xi * line.direction.
///
/// Returns 0, 1 or 2 points with the larger line parameter first.  A
/// discriminant within kTangencyTol of zero (relative to the coefficient
/// scale) counts as a tangency.  Empty for rho < 0.
/// Throws DegenerateDirectionError when the direction vanishes.
template <typename Scalar>
[[nodiscard]] std::vector<Quaternion<Scalar>> intersect_sphere_line(Scalar rho, const AffineLine<Scalar>& line) {
    const Scalar a = norm_sq(line.direction);
    if (!(a >= static_cast<Scalar>(kZeroDivisorFloor))) {
        throw DegenerateDirectionError("intersect_sphere_line: zero direction");
    }
    if (rho < Scalar(0)) {
        return {};
    }
    const Scalar b = Scalar(2) * dot4(line.direction, line.point);
    const Scalar c = norm_sq(line.point) - rho;
    const Scalar disc = b * b - Scalar(4) * a * c;
    const Scalar scale = b * b + std::abs(Scalar(4) * a * c);

    std::vector<Quaternion<Scalar>> points;
    if (std::abs(disc) <= static_cast<Scalar>(kTangencyTol) * scale) {
        points.push_back(line.point + (-b / (Scalar(2) * a)) * line.direction);
        return points;
    }
    if (disc < Scalar(0)) {
        return points;
    }
    const Scalar root = std::sqrt(disc);
    const Scalar q = -(b + (b < Scalar(0) ? -root : root)) / Scalar(2);
    const Scalar xi1 = q / a;
    const Scalar xi2 = c / q;
    const Scalar hi = std::max(xi1, xi2);
    const Scalar lo = std::min(xi1, xi2);
    points.push_back(line.point + hi * line.direction);
    points.push_back(line.point + lo * line.direction);
    return points;
}

/// Result of cutting a circle with a hyperplane: either the whole circle is
/// contained, or up to two points ordered by decreasing chart parameter.
template <typename Scalar = double>
struct CircleHyperplaneIntersection {
    bool contained = false;
    std::vector<Quaternion<Scalar>> points;
};

/// Intersects a circle with a hyperplane.
///
/// When the normal is orthogonal to the circle's plane (both frame products
/// within tol * |normal|), the answer is Contained or empty depending on
/// whether the center satisfies the hyperplane equation to tolerance.
/// Otherwise the cut is a chord with 0, 1 or 2 points; tangency follows
/// kTangencyTol as in intersect_sphere_line.
template <typename Scalar>
[[nodiscard]] CircleHyperplaneIntersection<Scalar> intersect_circle_hyperplane(const SolutionCircle<Scalar>& c,
                                                                               const Hyperplane<Scalar>& h,
                                                                               Scalar tol) {
    CircleHyperplaneIntersection<Scalar> result;
    const Scalar nmod = modulus(h.normal);
    const Scalar alpha = dot4(c.plane.e1, h.normal);
    const Scalar beta = dot4(c.plane.e2, h.normal);
    const Scalar gamma = h.offset - dot4(c.center, h.normal);

    if (std::abs(alpha) <= tol * nmod && std::abs(beta) <= tol * nmod) {
        const Scalar span = std::max(Scalar(1), modulus(c.center) + c.radius);
        result.contained = std::abs(gamma) <= tol * nmod * span;
        return result;
    }

    const Scalar n2 = alpha * alpha + beta * beta;
    const Scalar d2 = gamma * gamma / n2;
    const Scalar r2 = c.radius * c.radius;
    const Scalar foot_a = gamma * alpha / n2;
    const Scalar foot_b = gamma * beta / n2;
    const Scalar inv_n = Scalar(1) / std::sqrt(n2);
    const Scalar dir_a = -beta * inv_n;
    const Scalar dir_b = alpha * inv_n;

    const auto chart_point = [&](Scalar t) {
        const Scalar a = foot_a + t * dir_a;
        const Scalar b = foot_b + t * dir_b;
        return c.center + a * c.plane.e1 + b * c.plane.e2;
    };

    const Scalar disc = r2 - d2;
    if (std::abs(disc) <= static_cast<Scalar>(kTangencyTol) * (r2 + d2)) {
        result.points.push_back(chart_point(Scalar(0)));
        return result;
    }
    if (disc < Scalar(0)) {
        return result;
    }
    const Scalar t = std::sqrt(disc);
    result.points.push_back(chart_point(t));
    result.points.push_back(chart_point(-t));
    return result;
}

}  // namespace quatquad
