#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace vregion {

using Complex = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Point of the open unit disk.
struct DiskPoint {
    Complex value;
    explicit DiskPoint(Complex v) : value(v) {
        if (!(std::abs(v) < 1.0)) throw std::domain_error("DiskPoint: |z| must be < 1");
    }
};

/// Point of the horizontal strip {|Im z| < pi/2}.
struct StripPoint {
    Complex value;
    explicit StripPoint(Complex v) : value(v) {
        if (!(std::abs(v.imag()) < kHalfPi))
            throw std::domain_error("StripPoint: |Im z| must be < pi/2");
    }
    double x1() const { return value.real(); }
    double x2() const { return value.imag(); }
};

/// Point of the upper half-plane.
struct HalfPlanePoint {
    Complex value;
    explicit HalfPlanePoint(Complex v) : value(v) {
        if (!(v.imag() > 0.0)) throw std::domain_error("HalfPlanePoint: Im z must be > 0");
    }
};

/// Conformal map of the disk onto the strip, z -> log((1+z)/(1-z)),
/// principal branch.
inline StripPoint strip_map(DiskPoint z) {
    return StripPoint{std::log((1.0 + z.value) / (1.0 - z.value))};
}

/// Inverse of strip_map: zeta -> tanh(zeta/2).
inline DiskPoint strip_map_inv(StripPoint zeta) {
    return DiskPoint{std::tanh(zeta.value / 2.0)};
}

/// Cayley map of the disk onto the upper half-plane, w -> i(1+w)/(1-w).
inline HalfPlanePoint cayley(DiskPoint w) {
    return HalfPlanePoint{Complex(0.0, 1.0) * (1.0 + w.value) / (1.0 - w.value)};
}

/// Inverse Cayley map, omega -> (omega - i)/(omega + i).
inline DiskPoint cayley_inv(HalfPlanePoint omega) {
    const Complex i(0.0, 1.0);
    return DiskPoint{(omega.value - i) / (omega.value + i)};
}

// Unchecked Cayley inverse: also valid for real omega (maps onto the unit
// circle), used when tracing slit samples that end on the boundary.
inline Complex cayley_inv_closure(Complex omega) {
    const Complex i(0.0, 1.0);
    return (omega - i) / (omega + i);
}

/// Hyperbolic automorphism of the disk fixing +-1 with derivative e^T at -1:
/// z -> (z + c)/(1 + c z), c = tanh(T/2).  Conjugate to zeta -> zeta + T on
/// the strip.
inline DiskPoint hyperbolic_automorphism(double T, DiskPoint z) {
    if (!(T > 0.0)) throw std::domain_error("hyperbolic_automorphism: T must be > 0");
    const double c = std::tanh(T / 2.0);
    return DiskPoint{(z.value + c) / (1.0 + c * z.value)};
}

/// Horodisk data for the Julia inequality at a boundary point sigma:
/// |w - sigma|^2/(1 - |w|^2) <= factor * |base - sigma|^2/(1 - |base|^2).
struct JuliaDiskSpec {
    Complex sigma;
    double factor;
    DiskPoint base;
    JuliaDiskSpec(Complex s, double f, DiskPoint b) : sigma(s), factor(f), base(b) {
        if (std::abs(std::abs(s) - 1.0) > 1e-14)
            throw std::domain_error("JuliaDiskSpec: |sigma| must be 1");
        if (!(f > 0.0)) throw std::domain_error("JuliaDiskSpec: factor must be > 0");
    }
};

inline bool julia_contains(const JuliaDiskSpec& spec, DiskPoint w, double tol = 1e-12) {
    const double lhs = std::norm(w.value - spec.sigma) / (1.0 - std::norm(w.value));
    const double rhs =
        spec.factor * std::norm(spec.base.value - spec.sigma) / (1.0 - std::norm(spec.base.value));
    return lhs <= rhs * (1.0 + tol) + tol;
}

/// Koebe function z/(1-z)^2.
inline Complex koebe(DiskPoint z) {
    const Complex d = 1.0 - z.value;
    return z.value / (d * d);
}

/// Branch of the inverse Koebe function taking values in the disk:
/// solves w/(1-w)^2 = v, roots w = (2v + 1 +- sqrt(4v + 1))/(2v).
inline DiskPoint koebe_inv(Complex v) {
    if (v == Complex(0.0, 0.0)) return DiskPoint{0.0};
    const Complex s = std::sqrt(4.0 * v + 1.0);
    // The two roots multiply to 1; the minus root is rationalized to
    // 2v/(2v + 1 + s) so small v does not cancel.
    const Complex r1 = 2.0 * v / (2.0 * v + 1.0 + s);
    const Complex r2 = (2.0 * v + 1.0 + s) / (2.0 * v);
    const Complex w = (std::abs(r1) < std::abs(r2)) ? r1 : r2;
    if (!(std::abs(w) < 1.0))
        throw std::domain_error("koebe_inv: value outside the Koebe image of the disk");
    return DiskPoint{w};
}

/// Pick function p_alpha = koebe_inv(alpha * koebe(z)); maps the disk onto
/// the disk minus a radial slit ending at -1.
inline DiskPoint pick(double alpha, DiskPoint z) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("pick: alpha must be in (0,1)");
    return koebe_inv(alpha * koebe(z));
}

}  // namespace vregion
