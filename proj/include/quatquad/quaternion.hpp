#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>

namespace quatquad {

/// Thrown when a quaternion with (numerically) vanishing norm is inverted.
struct ZeroDivisorError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Squared-norm floor below which inversion is refused.
inline constexpr double kZeroDivisorFloor = 1e-300;

/// Pure-imaginary part of a quaternion, kept as a plain 3-vector.
template <typename Scalar = double>
struct Vector3 {
    Scalar x{}, y{}, z{};

    friend constexpr bool operator==(const Vector3&, const Vector3&) = default;
};

template <typename Scalar>
[[nodiscard]] constexpr Vector3<Scalar> operator+(const Vector3<Scalar>& a, const Vector3<Scalar>& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}

template <typename Scalar>
[[nodiscard]] constexpr Vector3<Scalar> operator-(const Vector3<Scalar>& a, const Vector3<Scalar>& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}

template <typename Scalar>
[[nodiscard]] constexpr Vector3<Scalar> operator-(const Vector3<Scalar>& a) {
    return {-a.x, -a.y, -a.z};
}

template <typename Scalar>
[[nodiscard]] constexpr Vector3<Scalar> operator*(Scalar s, const Vector3<Scalar>& a) {
    return {s * a.x, s * a.y, s * a.z};
}

template <typename Scalar>
[[nodiscard]] constexpr Vector3<Scalar> operator*(const Vector3<Scalar>& a, Scalar s) {
    return s * a;
}

template <typename Scalar>
[[nodiscard]] constexpr Vector3<Scalar> operator/(const Vector3<Scalar>& a, Scalar s) {
    return {a.x / s, a.y / s, a.z / s};
}

template <typename Scalar>
[[nodiscard]] constexpr Scalar dot(const Vector3<Scalar>& a, const Vector3<Scalar>& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <typename Scalar>
[[nodiscard]] constexpr Vector3<Scalar> cross(const Vector3<Scalar>& a, const Vector3<Scalar>& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <typename Scalar>
[[nodiscard]] constexpr Scalar norm_sq(const Vector3<Scalar>& a) {
    return dot(a, a);
}

template <typename Scalar>
[[nodiscard]] Scalar norm(const Vector3<Scalar>& a) {
    return std::sqrt(norm_sq(a));
}

template <typename Scalar>
[[nodiscard]] Vector3<Scalar> normalized(const Vector3<Scalar>& a) {
    const Scalar n = norm(a);
    return {a.x / n, a.y / n, a.z / n};
}

/// Quaternion w + x i + y j + z k over a real scalar type.
///
/// Values are immutable in spirit: every operation below is a pure function
/// returning a fresh value, and nothing mutates its arguments.
template <typename Scalar = double>
struct Quaternion {
    Scalar w{}, x{}, y{}, z{};

    constexpr Quaternion() = default;
    constexpr Quaternion(Scalar w_, Scalar x_, Scalar y_, Scalar z_) : w(w_), x(x_), y(y_), z(z_) {}
    /// Embeds a real number as w + 0i + 0j + 0k.
    constexpr Quaternion(Scalar real) : w(real) {}
    /// Assembles a quaternion from its scalar and vector parts.
    constexpr Quaternion(Scalar scalar, const Vector3<Scalar>& v) : w(scalar), x(v.x), y(v.y), z(v.z) {}

    [[nodiscard]] static constexpr Quaternion zero() { return {}; }
    [[nodiscard]] static constexpr Quaternion one() { return {1, 0, 0, 0}; }
    [[nodiscard]] static constexpr Quaternion i() { return {0, 1, 0, 0}; }
    [[nodiscard]] static constexpr Quaternion j() { return {0, 0, 1, 0}; }
    [[nodiscard]] static constexpr Quaternion k() { return {0, 0, 0, 1}; }

    /// Basis element with index 0..3 corresponding to 1, i, j, k.
    [[nodiscard]] static constexpr Quaternion basis(std::size_t index) {
        switch (index) {
            case 0: return one();
            case 1: return i();
            case 2: return j();
            default: return k();
        }
    }

    friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Embeds a 3-vector as the pure quaternion 0 + x i + y j + z k.
template <typename Scalar>
[[nodiscard]] constexpr Quaternion<Scalar> pure(const Vector3<Scalar>& v) {
    return {Scalar(0), v};
}

template <typename Scalar>
[[nodiscard]] constexpr Quaternion<Scalar> operator+(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
}

template <typename Scalar>
[[nodiscard]] constexpr Quaternion<Scalar> operator-(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
}

template <typename Scalar>
[[nodiscard]] constexpr Quaternion<Scalar> operator-(const Quaternion<Scalar>& a) {
    return {-a.w, -a.x, -a.y, -a.z};
}

/// Hamilton product.
template <typename Scalar>
[[nodiscard]] constexpr Quaternion<Scalar> operator*(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

template <typename Scalar>
[[nodiscard]] constexpr Quaternion<Scalar> operator*(Scalar s, const Quaternion<Scalar>& a) {
    return {s * a.w, s * a.x, s * a.y, s * a.z};
}

template <typename Scalar>
[[nodiscard]] constexpr Quaternion<Scalar> operator*(const Quaternion<Scalar>& a, Scalar s) {
    return s * a;
}

template <typename Scalar>
[[nodiscard]] constexpr Quaternion<Scalar> operator/(const Quaternion<Scalar>& a, Scalar s) {
    return {a.w / s, a.x / s, a.y / s, a.z / s};
}

template <typename Scalar>
[[nodiscard]] constexpr Quaternion<Scalar> conjugate(const Quaternion<Scalar>& a) {
    return {a.w, -a.x, -a.y, -a.z};
}

template <typename Scalar>
[[nodiscard]] constexpr Scalar norm_sq(const Quaternion<Scalar>& a) {
    return a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z;
}

template <typename Scalar>
[[nodiscard]] Scalar modulus(const Quaternion<Scalar>& a) {
    return std::sqrt(norm_sq(a));
}

/// Multiplicative inverse a* / |a|^2.  Throws ZeroDivisorError when |a|^2
/// falls below kZeroDivisorFloor.
template <typename Scalar>
[[nodiscard]] Quaternion<Scalar> inverse(const Quaternion<Scalar>& a) {
    const Scalar n2 = norm_sq(a);
    if (!(n2 >= static_cast<Scalar>(kZeroDivisorFloor))) {
        throw ZeroDivisorError("quaternion inverse: squared norm below divisor floor");
    }
    return conjugate(a) / n2;
}

template <typename Scalar>
[[nodiscard]] constexpr Scalar scalar_part(const Quaternion<Scalar>& a) {
    return a.w;
}

template <typename Scalar>
[[nodiscard]] constexpr Vector3<Scalar> vector_part(const Quaternion<Scalar>& a) {
    return {a.x, a.y, a.z};
}

template <typename Scalar>
[[nodiscard]] Quaternion<Scalar> normalized(const Quaternion<Scalar>& a) {
    return a / modulus(a);
}

/// Euclidean inner product of R^4; equals scalar_part(a * conjugate(b)).
template <typename Scalar>
[[nodiscard]] constexpr Scalar dot4(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b) {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Scalar/vector split of a product of pure vectors: x y = -dot(x,y) + cross(x,y).
template <typename Scalar>
[[nodiscard]] constexpr std::pair<Scalar, Vector3<Scalar>> pure_product_parts(const Vector3<Scalar>& a,
                                                                              const Vector3<Scalar>& b) {
    return {-dot(a, b), cross(a, b)};
}

/// Recovers the four components of X through quaternion multiplication alone,
/// using the monomial combinations X - iXi - jXj - kXk and its mates.
template <typename Scalar>
[[nodiscard]] constexpr std::array<Scalar, 4> extract_components(const Quaternion<Scalar>& q) {
    using Q = Quaternion<Scalar>;
    const Q iqi = Q::i() * q * Q::i();
    const Q jqj = Q::j() * q * Q::j();
    const Q kqk = Q::k() * q * Q::k();
    const Q c0 = (q - iqi - jqj - kqk) / Scalar(4);
    const Q c1 = Q::i() * (-q + iqi - jqj - kqk) / Scalar(4);
    const Q c2 = Q::j() * (-q - iqi + jqj - kqk) / Scalar(4);
    const Q c3 = Q::k() * (-q - iqi - jqj + kqk) / Scalar(4);
    return {c0.w, c1.w, c2.w, c3.w};
}

/// Tolerance comparator for property tests: |a-b| <= tol * max(1, |a|, |b|).
template <typename Scalar>
[[nodiscard]] bool approx_equal(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b, Scalar tol) {
    const Scalar scale = std::max({Scalar(1), modulus(a), modulus(b)});
    return modulus(a - b) <= tol * scale;
}

template <typename Scalar>
[[nodiscard]] Eigen::Matrix<Scalar, 4, 1> to_vector4(const Quaternion<Scalar>& a) {
    return Eigen::Matrix<Scalar, 4, 1>{a.w, a.x, a.y, a.z};
}

template <typename Scalar>
[[nodiscard]] Quaternion<Scalar> from_vector4(const Eigen::Matrix<Scalar, 4, 1>& v) {
    return {v[0], v[1], v[2], v[3]};
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const Quaternion<Scalar>& a) {
    return os << '[' << a.w << ", " << a.x << ", " << a.y << ", " << a.z << ']';
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const Vector3<Scalar>& a) {
    return os << '(' << a.x << ", " << a.y << ", " << a.z << ')';
}

}  // namespace quatquad
