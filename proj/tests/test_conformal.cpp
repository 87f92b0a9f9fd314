#include <doctest.h>

#include <cmath>
#include <random>

#include "vregion/conformal.hpp"

using namespace vregion;

namespace {
std::complex<double> random_disk_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(0.98 * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}
}  // namespace

TEST_CASE("strip map values and domain") {
    CHECK(std::abs(strip_map(DiskPoint{0.0}).value) == 0.0);
    const Complex li2 = strip_map(DiskPoint{Complex(0.0, 0.5)}).value;
    CHECK(li2.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(li2.imag() == doctest::Approx(std::arg(Complex(0.6, 0.8))).epsilon(1e-14));
    CHECK(strip_map(DiskPoint{0.6}).value.real() == doctest::Approx(std::log(4.0)));
    CHECK_THROWS_AS(DiskPoint{1.0}, std::domain_error);
    CHECK_THROWS_AS(DiskPoint{Complex(0.8, 0.7)}, std::domain_error);
}

TEST_CASE("strip map inverse and round trips") {
    CHECK(std::abs(strip_map_inv(StripPoint{0.0}).value) == 0.0);
    CHECK(strip_map_inv(StripPoint{std::log(4.0)}).value.real() == doctest::Approx(0.6));
    CHECK_THROWS_AS(StripPoint{Complex(0.0, kHalfPi)}, std::domain_error);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const Complex z = random_disk_point(rng);
        CHECK(std::abs(strip_map_inv(strip_map(DiskPoint{z})).value - z) < 1e-13);
    }
}

TEST_CASE("cayley map and inverse") {
    CHECK(std::abs(cayley(DiskPoint{0.0}).value - Complex(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(cayley(DiskPoint{0.5}).value - Complex(0.0, 3.0)) < 1e-14);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 1000; ++i) {
        const Complex w = random_disk_point(rng);
        CHECK(std::abs(cayley_inv(cayley(DiskPoint{w})).value - w) < 1e-13);
    }
}

TEST_CASE("hyperbolic automorphism") {
    CHECK(hyperbolic_automorphism(std::log(4.0), DiskPoint{0.0}).value.real() ==
          doctest::Approx(0.6).epsilon(1e-14));
    // identity limit
    const Complex z(0.3, -0.2);
    CHECK(std::abs(hyperbolic_automorphism(1e-12, DiskPoint{z}).value - z) < 1e-11);
    // conjugate to a shift of the strip
    for (double T : {std::log(2.0), std::log(4.0), std::log(6.0)}) {
        const DiskPoint z0{Complex(0.0, 0.5)};
        const Complex lhs = strip_map(hyperbolic_automorphism(T, z0)).value;
        const Complex rhs = strip_map(z0).value + T;
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("julia horodisk containment") {
    const DiskPoint z0{Complex(0.0, 0.5)};
    const JuliaDiskSpec d1{1.0, 1.0, z0};
    CHECK(julia_contains(d1, z0));  // equality case

    const double T = std::log(4.0);
    const JuliaDiskSpec d2{-1.0, std::exp(T), z0};
    const DiskPoint image = hyperbolic_automorphism(T, z0);
    // automorphisms attain equality
    const double lhs = std::norm(image.value + 1.0) / (1.0 - std::norm(image.value));
    const double rhs = std::exp(T) * std::norm(z0.value + 1.0) / (1.0 - std::norm(z0.value));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(julia_contains(d2, image));

    // pulling toward the tangency point stays inside the horodisk at 1
    const DiskPoint mid{0.5 * (z0.value + 1.0) * 0.999};
    CHECK(julia_contains(d1, DiskPoint{0.5 * (z0.value + 1.0)}));
    CHECK(julia_contains(d1, mid));
}

TEST_CASE("koebe and pick functions") {
    CHECK(std::abs(koebe(DiskPoint{0.0})) == 0.0);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        const Complex z = random_disk_point(rng);
        CHECK(std::abs(koebe_inv(koebe(DiskPoint{z})).value - z) < 1e-12);
    }

    for (double alpha : {0.2, 0.5, 0.9}) {
        CHECK(std::abs(pick(alpha, DiskPoint{0.0}).value) == 0.0);
        // p_alpha'(0) = alpha by central differences
        const double h = 1e-6;
        const Complex d =
            (pick(alpha, DiskPoint{h}).value - pick(alpha, DiskPoint{-h}).value) / (2.0 * h);
        CHECK(std::abs(d - alpha) < 1e-6);
    }

    // image omits a radial slit toward -1: negative reals stay negative real
    for (double x : {-0.1, -0.5, -0.9}) {
        const Complex v = pick(0.5, DiskPoint{x}).value;
        CHECK(std::abs(v.imag()) < 1e-14);
        CHECK(v.real() < 0.0);
    }

    // semigroup property p_a(p_b(z)) = p_ab(z)
    std::mt19937_64 rng2(10);
    for (int i = 0; i < 100; ++i) {
        const Complex z = random_disk_point(rng2);
        const Complex lhs = pick(0.7, pick(0.4, DiskPoint{z})).value;
        const Complex rhs = pick(0.28, DiskPoint{z}).value;
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}
