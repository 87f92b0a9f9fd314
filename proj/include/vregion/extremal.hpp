#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "vregion/conformal.hpp"
#include "vregion/loewner.hpp"
#include "vregion/ode.hpp"
#include "vregion/region.hpp"

namespace vregion {

// ---------------------------------------------------------------------------
// Pontryagin maximum-principle system for the strip control problem.
// State (x1, x2), adjoint (psi1, psi2), phi = arg(psi1 + i psi2).
// ---------------------------------------------------------------------------

struct ExtremalState {
    double x1 = 0.0;
    double x2 = 0.0;
    double psi1 = 0.0;
    double psi2 = 0.0;

    double phi() const {
        if (psi1 == 0.0 && psi2 == 0.0)
            throw std::domain_error("ExtremalState: zero adjoint vector");
        return std::atan2(psi2, psi1);
    }
};

/// H(x, psi, u) = Re(u e^{-i x2} (psi1 - i psi2)) / (2 cos x2).
inline double hamiltonian(const ExtremalState& s, Complex u) {
    const Complex psi(s.psi1, -s.psi2);
    return (u * std::exp(Complex(0.0, -s.x2)) * psi).real() / (2.0 * std::cos(s.x2));
}

/// Unique maximizer of the Hamiltonian over {|u - 1| <= 1}:
/// u* = 1 + e^{i(x2 + phi)}.
inline Complex optimal_u(const ExtremalState& s) {
    return 1.0 + std::exp(Complex(0.0, s.x2 + s.phi()));
}

/// Full extremal system with the maximizing control substituted:
///   dx1   = (cos phi + cos x2)/(2 cos x2)
///   dx2   = (sin phi - sin x2)/(2 cos x2)
///   dpsi1 = 0
///   dpsi2 = (sin phi - sin x2)/(2 cos^2 x2) * |psi1 - i psi2|
inline ExtremalState pontryagin_rhs(const ExtremalState& s) {
    const double phi = s.phi();
    const double c = std::cos(s.x2);
    ExtremalState d;
    d.x1 = (std::cos(phi) + c) / (2.0 * c);
    d.x2 = (std::sin(phi) - std::sin(s.x2)) / (2.0 * c);
    d.psi1 = 0.0;
    d.psi2 = (std::sin(phi) - std::sin(s.x2)) / (2.0 * c * c) * std::hypot(s.psi1, s.psi2);
    return d;
}

/// First integral I(x2, phi) = (1 - sin phi)/(1 + sin phi) * (1 + sin x2)/(1 - sin x2),
/// conserved along extremal trajectories.
inline double first_integral(double x2, double phi) {
    const double sp = std::sin(phi);
    if (1.0 + sp == 0.0) throw std::domain_error("first_integral: pole at sin phi = -1");
    return (1.0 - sp) / (1.0 + sp) * (1.0 + std::sin(x2)) / (1.0 - std::sin(x2));
}

struct QuadratureSolution {
    double C = 1.0;       // first-integral constant
    double B1 = 0.0;      // log((1 - s_T)/(1 - s_0))
    double B2 = 0.0;      // log((1 + s_T)/(1 + s_0))
    double target_sin_x2 = 0.0;
    double endpoint_x1 = 0.0;
};

/// Quadrature inversion: given the target sin x2(T) strictly inside
/// (a_minus, a_plus), recovers the first-integral constant C and the
/// endpoint x1(T) = x1_0 + T/2 + sqrt(R(target, T)).
inline QuadratureSolution solve_C(const RegionSpec& spec, double target_sin_x2) {
    const auto [am, ap] = a_pm(spec);
    if (!(target_sin_x2 > am && target_sin_x2 < ap))
        throw std::domain_error("solve_C: target must lie strictly between a_minus and a_plus");
    const double s0 = std::sin(spec.x2_0());
    QuadratureSolution q;
    q.target_sin_x2 = target_sin_x2;
    q.B1 = std::log((1.0 - target_sin_x2) / (1.0 - s0));
    q.B2 = std::log((1.0 + target_sin_x2) / (1.0 + s0));
    const double half_T = spec.T / 2.0;
    q.C = (q.B1 + half_T) / (q.B2 + half_T);
    if (!(q.C > 0.0)) throw std::domain_error("solve_C: degenerate C (target at a boundary cap)");
    q.endpoint_x1 =
        spec.x1_0() + 0.5 * (spec.T + std::sqrt((spec.T + 2.0 * q.B1) * (spec.T + 2.0 * q.B2)));
    return q;
}

/// Initial phi from the first-integral value: sin phi0 = (1 - K)/(1 + K),
/// K = C (1 - sin x2_0)/(1 + sin x2_0).
inline double phi0_from_C(double x2_0, double C) {
    if (!(C > 0.0)) throw std::domain_error("phi0_from_C: C must be > 0");
    const double s0 = std::sin(x2_0);
    const double K = C * (1.0 - s0) / (1.0 + s0);
    return std::asin((1.0 - K) / (1.0 + K));
}

/// Extremal single-atom driving
/// lambda*(t) = e^{-x1} sin((phi - x2)/2) / cos((phi + x2)/2).
inline double extremal_driving_value(const ExtremalState& s) {
    const double phi = s.phi();
    const double den = std::cos((phi + s.x2) / 2.0);
    if (std::abs(den) < 1e-14)
        throw std::domain_error("extremal_driving_value: pole at phi + x2 = +-pi");
    return std::exp(-s.x1) * std::sin((phi - s.x2) / 2.0) / den;
}

/// Same value from the unsimplified control-to-measure inversion; used as a
/// cross-check of the trigonometric closed form.
inline double extremal_driving_value_raw(const ExtremalState& s) {
    const Complex i(0.0, 1.0);
    const double phi = s.phi();
    const Complex num = 1.0 - 2.0 * std::cos(s.x2) / (std::exp(-i * s.x2) + std::exp(i * phi));
    const Complex val = num / (i * std::exp(Complex(s.x1, s.x2)));
    return val.real();
}

enum class ExtremalBranch { PsiPlus, PsiMinus, PsiZeroUp, PsiZeroDown };

struct ExtremalDriving {
    std::vector<double> times;
    std::vector<double> lambda;
};

struct ExtremalTrajectory {
    std::vector<double> times;
    std::vector<double> x1, x2, phi;
    ExtremalDriving driving;
    ExtremalBranch branch;
    double C = 1.0;  // meaningful on the PsiPlus/PsiMinus branches

    Complex endpoint() const { return {x1.back(), x2.back()}; }
    ExtremalState state_at(std::size_t k) const {
        const double p = phi[k];
        return {x1[k], x2[k], std::cos(p), std::sin(p)};
    }
};

namespace detail {

// Reduced extremal system in (x1, x2, phi); valid on every branch,
// dphi = (cos phi / cos x2) dx2.
inline void reduced_rhs(const std::array<double, 3>& s, std::array<double, 3>& d) {
    const double c = std::cos(s[1]);
    const double dx2 = (std::sin(s[2]) - std::sin(s[1])) / (2.0 * c);
    d[0] = (std::cos(s[2]) + c) / (2.0 * c);
    d[1] = dx2;
    d[2] = std::cos(s[2]) / c * dx2;
}

}  // namespace detail

/// Integrates the extremal system on a uniform output grid of n_samples+1
/// points over [0, T].  PsiPlus/PsiMinus take phi0 from the quadrature
/// constant of the requested target; PsiZero branches run at phi = +-pi/2.
inline ExtremalTrajectory integrate_extremal(const RegionSpec& spec, ExtremalBranch branch,
                                             double target_sin_x2, const SolverConfig& cfg,
                                             int n_samples = 2048) {
    ExtremalTrajectory out;
    out.branch = branch;
    out.times.reserve(n_samples + 1);

    double phi0;
    if (branch == ExtremalBranch::PsiZeroUp) {
        phi0 = kHalfPi;
    } else if (branch == ExtremalBranch::PsiZeroDown) {
        phi0 = -kHalfPi;
    } else {
        const QuadratureSolution q = solve_C(spec, target_sin_x2);
        out.C = q.C;
        const double base = phi0_from_C(spec.x2_0(), q.C);
        phi0 = branch == ExtremalBranch::PsiPlus ? base : kPi - base;
    }

    std::array<double, 3> y{spec.x1_0(), spec.x2_0(), phi0};
    auto record = [&](double t) {
        out.times.push_back(t);
        out.x1.push_back(y[0]);
        out.x2.push_back(y[1]);
        out.phi.push_back(y[2]);
        out.driving.times.push_back(t);
        out.driving.lambda.push_back(
            extremal_driving_value({y[0], y[1], std::cos(y[2]), std::sin(y[2])}));
    };
    record(0.0);
    auto f = [](double, const std::array<double, 3>& s, std::array<double, 3>& d) {
        detail::reduced_rhs(s, d);
    };
    for (int k = 1; k <= n_samples; ++k) {
        const double t = spec.T * static_cast<double>(k) / n_samples;
        integrate_ode<3>(f, y, out.times.back(), t, cfg);
        if (!(std::abs(y[1]) < kHalfPi))
            throw OdeFailure("integrate_extremal: state left the strip");
        record(t);
    }
    return out;
}

/// Full-adjoint integration of the (x, psi) system with psi1 frozen at
/// sign in {-1, 0, +1}; cross-validation path for the reduced phi form.
inline ExtremalTrajectory integrate_extremal_full(const RegionSpec& spec, double psi1,
                                                  double psi2_0, const SolverConfig& cfg,
                                                  int n_samples = 2048) {
    ExtremalTrajectory out;
    out.branch = psi1 > 0.0 ? ExtremalBranch::PsiPlus
               : psi1 < 0.0 ? ExtremalBranch::PsiMinus
               : (psi2_0 > 0.0 ? ExtremalBranch::PsiZeroUp : ExtremalBranch::PsiZeroDown);
    std::array<double, 4> y{spec.x1_0(), spec.x2_0(), psi1, psi2_0};
    auto record = [&](double t) {
        ExtremalState s{y[0], y[1], y[2], y[3]};
        out.times.push_back(t);
        out.x1.push_back(s.x1);
        out.x2.push_back(s.x2);
        out.phi.push_back(s.phi());
        out.driving.times.push_back(t);
        out.driving.lambda.push_back(extremal_driving_value(s));
    };
    record(0.0);
    auto f = [](double, const std::array<double, 4>& s, std::array<double, 4>& d) {
        const ExtremalState ds = pontryagin_rhs({s[0], s[1], s[2], s[3]});
        d = {ds.x1, ds.x2, ds.psi1, ds.psi2};
    };
    for (int k = 1; k <= n_samples; ++k) {
        const double t = spec.T * static_cast<double>(k) / n_samples;
        integrate_ode<4>(f, y, out.times.back(), t, cfg);
        record(t);
    }
    return out;
}

/// Piecewise-constant single-atom schedule sampling lambda* at interval
/// midpoints; replaying it through the controllable ODE recovers the
/// extremal endpoint.
inline ControlSchedule schedule_from_driving(const ExtremalTrajectory& traj) {
    const std::size_t n = traj.times.size();
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("schedule_from_driving: need an odd number of samples");
    std::vector<double> breaks, mids;
    for (std::size_t k = 0; k < n; k += 2) breaks.push_back(traj.times[k]);
    for (std::size_t k = 1; k < n; k += 2) mids.push_back(traj.driving.lambda[k]);
    return ControlSchedule::single_atom(breaks, mids);
}

/// Residual of the finite-difference identity
/// (1 + 2 d/dt log lambda*)^2 = cos^2 phi / cos^2 x2 over the interior
/// samples of a trajectory with nonvanishing driving.
inline double log_derivative_test(const ExtremalTrajectory& traj) {
    double worst = 0.0;
    const auto& t = traj.times;
    const auto& lam = traj.driving.lambda;
    for (std::size_t k = 1; k + 1 < t.size(); ++k) {
        if (lam[k] == 0.0 || lam[k - 1] * lam[k + 1] <= 0.0)
            throw std::domain_error("log_derivative_test: driving vanishes in the window");
        const double dlog =
            (std::log(std::abs(lam[k + 1])) - std::log(std::abs(lam[k - 1]))) /
            (t[k + 1] - t[k - 1]);
        const double lhs = (1.0 + 2.0 * dlog) * (1.0 + 2.0 * dlog);
        const double ratio = std::cos(traj.phi[k]) / std::cos(traj.x2[k]);
        worst = std::max(worst, std::abs(lhs - ratio * ratio));
    }
    return worst;
}

inline void write_driving_csv(std::ostream& os, const ExtremalDriving& d) {
    os << "t,lambda_star\n";
    for (std::size_t i = 0; i < d.times.size(); ++i) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", d.times[i], d.lambda[i]);
        os << buf;
    }
}

}  // namespace vregion
