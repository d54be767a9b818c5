#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "quatquad/solver.hpp"
#include "support/generators.hpp"

using namespace quatquad;
using Q = Quaternion<double>;
using V = Vector3<double>;
using Coeffs = EquationCoefficients<double>;

namespace {

const Q I = Q::i();
const Q J = Q::j();
const Q K = Q::k();

void check_point(const SolutionSet<double>& set, const Q& expected, double tol = 1e-10) {
    REQUIRE(kind(set) == SolutionKind::Point);
    CHECK(modulus(std::get<PointSet<double>>(set).point - expected) <= tol);
}

void check_two_points(const SolutionSet<double>& set, const Q& first, const Q& second, double tol = 1e-10) {
    REQUIRE(kind(set) == SolutionKind::TwoPoints);
    const auto& two = std::get<TwoPointSet<double>>(set);
    CHECK(modulus(two.first - first) <= tol);
    CHECK(modulus(two.second - second) <= tol);
}

}  // namespace

TEST_CASE("branch classification") {
    CHECK(classify_p(Coeffs{3.0, 0.0, 0.0, 0.0}) == CoefficientBranch::Real);
    CHECK(classify_p(Coeffs{-0.5, 0.0, 0.0, 0.0}) == CoefficientBranch::Real);
    CHECK(classify_p(Coeffs{I, 0.0, 0.0, 0.0}) == CoefficientBranch::Nonreal);
    CHECK(classify_p(Coeffs{Q{1, 1e-15, 0, 0}, 0.0, 0.0, 0.0}) == CoefficientBranch::Real);
    CHECK(classify_p(Coeffs{Q{1, 1e-3, 0, 0}, 0.0, 0.0, 0.0}) == CoefficientBranch::Nonreal);
    CHECK_THROWS_AS((void)classify_p(Coeffs{Q::zero(), 1.0, 1.0, 1.0}), InvalidCoefficientsError);
}

TEST_CASE("real reduction fields") {
    SUBCASE("completed square of x^2 + x + x* = 0") {
        const auto red = reduce_real(Coeffs{1.0, 1.0, 1.0, 0.0});
        CHECK(red.p0 == 1.0);
        CHECK(modulus(red.shift - Q::one()) <= 1e-15);
        CHECK(modulus(red.Q_tilde) <= 1e-15);
        CHECK(modulus(red.S_tilde - Q::one()) <= 1e-15);
        CHECK(red.rho == doctest::Approx(1.0).epsilon(1e-14));
        CHECK_FALSE(red.delta.has_value());
    }
    SUBCASE("tangent family x^2 + x - x* = 1 + 2j") {
        const auto red = reduce_real(Coeffs{1.0, 1.0, -1.0, Q(1.0) + 2.0 * J});
        CHECK(modulus(red.shift) <= 1e-15);
        CHECK(modulus(red.Q_tilde - Q::one()) <= 1e-15);
        CHECK(red.rho == doctest::Approx(1.0).epsilon(1e-14));
        REQUIRE(red.delta.has_value());
        CHECK(*red.delta == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("rho consistency: rho = scalar_part(S_tilde) / p0") {
        std::mt19937_64 rng(31);
        for (int t = 0; t < 200; ++t) {
            Coeffs c = testsupport::random_instance(rng);
            c.P = Q(scalar_part(c.P) + (scalar_part(c.P) >= 0 ? 0.5 : -0.5));
            const auto red = reduce_real(c);
            CHECK(red.rho == doctest::Approx(scalar_part(red.S_tilde) / red.p0).epsilon(1e-13));
        }
    }
}

TEST_CASE("nonreal reduction fields") {
    const auto red = reduce_nonreal(Coeffs{I, 1.0, 1.0, Q(2.0) + I});
    CHECK(modulus(red.R_tilde - Q::one()) <= 1e-15);
    CHECK(modulus(red.shift) <= 1e-15);
    CHECK(modulus(red.S_tilde - (Q(2.0) + I)) <= 1e-15);
    CHECK(red.hyperplane_offset == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("reduction preserves the residual identically") {
    std::mt19937_64 rng(32);
    SUBCASE("real branch") {
        for (int t = 0; t < 1000; ++t) {
            Coeffs c = testsupport::random_instance(rng);
            c.P = Q(scalar_part(c.P) + (scalar_part(c.P) >= 0 ? 0.5 : -0.5));
            const auto red = reduce_real(c);
            const Q X = testsupport::random_quaternion(rng);
            const Q Y = X + red.shift;
            const Q original = X * c.P * conjugate(X) + X * c.Q + c.R * conjugate(X) - c.S;
            const Q reduced =
                Q(red.p0 * norm_sq(Y)) + Y * red.Q_tilde - conjugate(red.Q_tilde) * conjugate(Y) - red.S_tilde;
            CHECK(modulus(original - reduced) <= 1e-10 * residual_scale(c, X));
        }
    }
    SUBCASE("nonreal branch") {
        int done = 0;
        while (done < 1000) {
            const Coeffs c = testsupport::random_instance(rng);
            if (norm(vector_part(c.P)) < 0.1) {
                continue;
            }
            ++done;
            const auto red = reduce_nonreal(c);
            const Q X = testsupport::random_quaternion(rng);
            const Q Z = X + red.shift;
            const Q original = X * c.P * conjugate(X) + X * c.Q + c.R * conjugate(X) - c.S;
            const Q reduced =
                Z * c.P * conjugate(Z) + Z * conjugate(red.R_tilde) + red.R_tilde * conjugate(Z) - red.S_tilde;
            CHECK(modulus(original - reduced) <= 1e-10 * residual_scale(c, X));
        }
    }
}

TEST_CASE("known solution sets, real branch") {
    CHECK(kind(solve(Coeffs{1.0, 0.0, 0.0, -1.0})) == SolutionKind::Empty);

    check_point(solve(Coeffs{1.0, 1.0, 1.0, -1.0}), -Q::one());

    const auto sphere = solve(Coeffs{1.0, 1.0, 1.0, 0.0});
    REQUIRE(kind(sphere) == SolutionKind::ThreeSphere);
    CHECK(modulus(std::get<SphereSet<double>>(sphere).center + Q::one()) <= 1e-10);
    CHECK(std::get<SphereSet<double>>(sphere).radius == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(kind(solve(Coeffs{1.0, 1.0, 1.0, I})) == SolutionKind::Empty);

    for (const Q& shat : {I, J, (I + K) / std::sqrt(2.0)}) {
        const double theta = std::numbers::pi / 6;
        const Coeffs c{1.0, 1.0, -1.0, Q(1.0) + 2.0 * std::sin(theta) * shat};
        check_two_points(solve(c), Q(std::cos(theta)) + std::sin(theta) * shat,
                         Q(-std::cos(theta)) + std::sin(theta) * shat);
        const Coeffs tangent{1.0, 1.0, -1.0, Q(1.0) + 2.0 * shat};
        check_point(solve(tangent), shat);
    }

    CHECK(kind(solve(Coeffs{1.0, 1.0, -1.0, Q(1.0) + 3.0 * J})) == SolutionKind::Empty);
}

TEST_CASE("known solution sets, nonreal branch") {
    check_point(solve(Coeffs{I, 1.0, 1.0, 0.0}), Q::zero());

    CHECK(kind(solve(Coeffs{I, 1.0, 1.0, 1.0})) == SolutionKind::Empty);

    const auto circle = solve(Coeffs{I, 1.0, 1.0, -I});
    REQUIRE(kind(circle) == SolutionKind::Circle);
    const auto& ring = std::get<SolutionCircle<double>>(circle);
    CHECK(ring.radius == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(modulus(ring.center) <= 1e-10);
    for (const Q& e : {ring.plane.e1, ring.plane.e2}) {
        CHECK(std::abs(e.w) <= 1e-12);
        CHECK(std::abs(e.x) <= 1e-12);
    }

    CHECK(kind(solve(Coeffs{I, 1.0, 1.0, Q(1.0) - I})) == SolutionKind::Empty);

    check_point(solve(Coeffs{I, 1.0, 1.0, Q(2.0) + I}), Q::one());
    const double phi0 = std::numbers::pi / 3;
    check_two_points(solve(Coeffs{I, 1.0, 1.0, Q(2.0 * std::cos(phi0)) + I}),
                     Q(std::cos(phi0)) + std::sin(phi0) * I, Q(std::cos(phi0)) - std::sin(phi0) * I);
}

TEST_CASE("solve rejects a vanishing quadratic coefficient") {
    CHECK_THROWS_AS((void)solve(Coeffs{Q::zero(), 1.0, 1.0, 1.0}), InvalidCoefficientsError);
}

TEST_CASE("residual examples") {
    CHECK(residual(Coeffs{1.0, 1.0, 1.0, -1.0}, -Q::one()) <= 1e-15);
    CHECK(residual(Coeffs{I, 1.0, 1.0, 0.0}, Q::zero()) <= 1e-15);
    CHECK(residual(Coeffs{1.0, 0.0, 0.0, -1.0}, Q::zero()) == doctest::Approx(1.0));
}

TEST_CASE("every returned member satisfies the equation") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 1000; ++t) {
        const Coeffs c = testsupport::random_instance(rng);
        const auto set = solve(c);
        for (const auto& member : sample_solution_set(set, 16, 99)) {
            CHECK(residual(c, member) <= 1e-8 * residual_scale(c, member));
        }
    }
}

TEST_CASE("real scaling leaves the solution set unchanged") {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> lam_draw(0.3, 3.0);
    std::uniform_real_distribution<double> coin(-1.0, 1.0);
    for (int t = 0; t < 300; ++t) {
        const Coeffs c = testsupport::random_instance(rng);
        const double lambda = (coin(rng) < 0 ? -1.0 : 1.0) * lam_draw(rng);
        const Coeffs scaled{lambda * c.P, lambda * c.Q, lambda * c.R, lambda * c.S};
        const auto set = solve(c);
        const auto scaled_set = solve(scaled);
        CHECK(testsupport::sets_equal(set, scaled_set, 1e-9 * coefficient_scale(scaled)));
    }
}

TEST_CASE("conjugating and swapping the linear coefficients preserves solutions") {
    std::mt19937_64 rng(35);
    for (int t = 0; t < 300; ++t) {
        const Coeffs c = testsupport::random_instance(rng);
        const Coeffs conjugated{conjugate(c.P), conjugate(c.R), conjugate(c.Q), conjugate(c.S)};
        CHECK(testsupport::sets_equal(solve(c), solve(conjugated), 1e-9 * coefficient_scale(c)));
    }
}

TEST_CASE("member count tracks the discriminant sign") {
    SUBCASE("real branch family") {
        for (double a : {0.5, 1.0, 1.9}) {
            CHECK(kind(solve(Coeffs{1.0, 1.0, -1.0, Q(1.0) + a * J})) == SolutionKind::TwoPoints);
        }
        CHECK(kind(solve(Coeffs{1.0, 1.0, -1.0, Q(1.0) + 2.0 * J})) == SolutionKind::Point);
        for (double a : {2.1, 3.0, 10.0}) {
            CHECK(kind(solve(Coeffs{1.0, 1.0, -1.0, Q(1.0) + a * J})) == SolutionKind::Empty);
        }
    }
    SUBCASE("nonreal branch family") {
        for (double s0 : {0.0, 1.0, 1.9}) {
            CHECK(kind(solve(Coeffs{I, 1.0, 1.0, Q(s0) + I})) == SolutionKind::TwoPoints);
        }
        CHECK(kind(solve(Coeffs{I, 1.0, 1.0, Q(2.0) + I})) == SolutionKind::Point);
        for (double s0 : {2.1, 5.0}) {
            CHECK(kind(solve(Coeffs{I, 1.0, 1.0, Q(s0) + I})) == SolutionKind::Empty);
        }
    }
}

TEST_CASE("real-branch two-point case agrees with the sphere-line route") {
    std::mt19937_64 rng(36);
    int done = 0;
    while (done < 200) {
        Coeffs c = testsupport::random_instance(rng);
        c.P = Q(scalar_part(c.P) + (scalar_part(c.P) >= 0 ? 0.5 : -0.5));
        const auto red = reduce_real(c);
        if (!red.delta || red.rho <= 0.01 || *red.delta <= 0.01) {
            continue;
        }
        ++done;
        const auto set = solve(c);
        REQUIRE(kind(set) == SolutionKind::TwoPoints);
        const Q lin_inv = inverse(c.Q - conjugate(c.R));
        const AffineLine<double> line{pure(vector_part(red.S_tilde)) * lin_inv, lin_inv};
        const auto pts = intersect_sphere_line(red.rho, line);
        REQUIRE(pts.size() == 2);
        const auto& two = std::get<TwoPointSet<double>>(set);
        const double tol = 1e-9 * coefficient_scale(c);
        const bool direct = modulus(pts[0] - red.shift - two.first) <= tol;
        const bool swapped = modulus(pts[1] - red.shift - two.first) <= tol;
        CHECK((direct || swapped));
        CHECK(modulus((direct ? pts[1] : pts[0]) - red.shift - two.second) <= tol);
    }
}

TEST_CASE("distance to each kind of solution set") {
    CHECK(distance_to_set(SolutionSet<double>{EmptySet{}}, Q::zero()) == std::numeric_limits<double>::infinity());
    CHECK(distance_to_set(SolutionSet<double>{PointSet<double>{Q::one()}}, Q{1, 1, 0, 0}) == doctest::Approx(1.0));
    CHECK(distance_to_set(SolutionSet<double>{TwoPointSet<double>{Q::one(), -Q::one()}}, Q(-0.5)) ==
          doctest::Approx(0.5));
    const SolutionSet<double> sphere{SphereSet<double>{Q::one(), 2.0}};
    CHECK(distance_to_set(sphere, Q::one()) == doctest::Approx(2.0));
    CHECK(distance_to_set(sphere, Q{1, 3, 0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("solution set sampling") {
    SUBCASE("finite sets come back verbatim") {
        const SolutionSet<double> pt{PointSet<double>{Q::i()}};
        CHECK(sample_solution_set(pt, 10, 1) == std::vector<Q>{Q::i()});
        const SolutionSet<double> two{TwoPointSet<double>{Q::one(), Q::j()}};
        CHECK(sample_solution_set(two, 10, 1) == std::vector<Q>{Q::one(), Q::j()});
        CHECK(sample_solution_set(SolutionSet<double>{EmptySet{}}, 10, 1).empty());
    }
    SUBCASE("sphere samples lie on the sphere and depend only on the seed") {
        const SolutionSet<double> sphere{SphereSet<double>{-Q::one(), 1.0}};
        const auto a = sample_solution_set(sphere, 16, 42);
        const auto b = sample_solution_set(sphere, 16, 42);
        CHECK(a == b);
        for (const auto& x : a) {
            CHECK(std::abs(modulus(x + Q::one()) - 1.0) <= 1e-12);
        }
    }
    SUBCASE("circle samples are equispaced on the stored frame") {
        const auto set = solve(Coeffs{I, 1.0, 1.0, -I});
        const auto samples = sample_solution_set(set, 4, 0);
        REQUIRE(samples.size() == 4);
        for (const auto& x : samples) {
            CHECK(std::abs(norm_sq(x) - 1.0) <= 1e-12);
            CHECK(std::abs(x.w) <= 1e-12);
            CHECK(std::abs(x.x) <= 1e-12);
        }
        // quarter turns land on antipodal pairs
        CHECK(modulus(samples[0] + samples[2]) <= 1e-12);
        CHECK(modulus(samples[1] + samples[3]) <= 1e-12);
    }
}

TEST_CASE("degenerate instance generators produce the advertised kinds") {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 25; ++t) {
        const Coeffs sphere = testsupport::sphere_instance(rng);
        CHECK(kind(solve(sphere)) == SolutionKind::ThreeSphere);
        const Coeffs circle = testsupport::circle_instance(rng);
        CHECK(kind(solve(circle)) == SolutionKind::Circle);
    }
}
