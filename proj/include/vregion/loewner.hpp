#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vregion/conformal.hpp"
#include "vregion/ode.hpp"

namespace vregion {

// ---------------------------------------------------------------------------
// Control measures.  Canonical internal form is the strip-side one: atoms at
// real positions lambda with nonnegative masses, total mass in [0,1].  The
// circle-side form (atoms at kappa on the unit circle, kappa != 1) is kept
// for the disk coordinates of the evolution.
// ---------------------------------------------------------------------------

/// lambda = i(1+kappa)/(1-kappa), real for unimodular kappa != 1.
inline double kappa_to_lambda(Complex kappa) {
    if (std::abs(kappa - 1.0) < 1e-12) throw std::domain_error("kappa_to_lambda: pole at kappa=1");
    return (Complex(0.0, 1.0) * (1.0 + kappa) / (1.0 - kappa)).real();
}

inline Complex lambda_to_kappa(double lambda) {
    const Complex i(0.0, 1.0);
    return (lambda - i) / (lambda + i);
}

struct CircleAtom {
    Complex kappa;
    double mass;
};

struct AtomicMeasure {
    std::vector<CircleAtom> atoms;

    double total_mass() const {
        double m = 0.0;
        for (const auto& a : atoms) m += a.mass;
        return m;
    }
    void validate() const {
        for (const auto& a : atoms) {
            if (std::abs(std::abs(a.kappa) - 1.0) > 1e-12)
                throw std::domain_error("AtomicMeasure: atom off the unit circle");
            if (std::abs(a.kappa - 1.0) < 1e-12)
                throw std::domain_error("AtomicMeasure: atom at the excluded point 1");
            if (a.mass < 0.0) throw std::domain_error("AtomicMeasure: negative mass");
        }
        if (total_mass() > 1.0 + 1e-12) throw std::domain_error("AtomicMeasure: total mass > 1");
    }
};

struct StripAtom {
    double lambda;
    double mass;
};

struct StripMeasure {
    std::vector<StripAtom> atoms;

    double total_mass() const {
        double m = 0.0;
        for (const auto& a : atoms) m += a.mass;
        return m;
    }
    AtomicMeasure to_circle() const {
        AtomicMeasure m;
        for (const auto& a : atoms) m.atoms.push_back({lambda_to_kappa(a.lambda), a.mass});
        return m;
    }
    static StripMeasure from_circle(const AtomicMeasure& m) {
        StripMeasure s;
        for (const auto& a : m.atoms) s.atoms.push_back({kappa_to_lambda(a.kappa), a.mass});
        return s;
    }
};

// ---------------------------------------------------------------------------
// Vector fields.
// ---------------------------------------------------------------------------

/// Herglotz-type control field q(z) = sum_j mass_j (1-kappa_j)/(1+kappa_j z).
inline Complex herglotz_q(Complex z, const AtomicMeasure& m) {
    Complex q = 0.0;
    for (const auto& a : m.atoms) {
        if (std::abs(a.kappa - 1.0) < 1e-12)
            throw std::domain_error("herglotz_q: atom at the excluded point 1");
        q += a.mass * (1.0 - a.kappa) / (1.0 + a.kappa * z);
    }
    return q;
}

/// Disk-coordinate right-hand side dw/dt = (1/4)(1-w)^2 (1+w) q(w).
inline Complex disk_rhs(Complex w, const AtomicMeasure& m) {
    const Complex d = 1.0 - w;
    return 0.25 * d * d * (1.0 + w) * herglotz_q(w, m);
}

/// Strip-coordinate right-hand side dzeta/dt = sum_j mass_j/(1 - i lambda_j e^zeta).
inline Complex strip_rhs(Complex zeta, const StripMeasure& m) {
    const Complex e = std::exp(zeta);
    const Complex i(0.0, 1.0);
    Complex v = 0.0;
    for (const auto& a : m.atoms) v += a.mass / (1.0 - i * a.lambda * e);
    return v;
}

/// Complex-control form: for |u - 1| <= 1,
/// dx1 = Re(u e^{-i x2})/(2 cos x2), dx2 = Im(u e^{-i x2})/(2 cos x2).
inline std::pair<double, double> u_rhs(double x1, double x2, Complex u) {
    (void)x1;
    if (!(std::abs(x2) < kHalfPi)) throw std::domain_error("u_rhs: |x2| must be < pi/2");
    const double t = std::tan(x2);
    return {0.5 * u.real() + 0.5 * t * u.imag(), 0.5 * u.imag() - 0.5 * t * u.real()};
}

/// Control value u attached to a measure at state zeta: u = 2 e^{i x2} cos x2 * strip_rhs.
inline Complex measure_to_u(Complex zeta, const StripMeasure& m) {
    const double x2 = zeta.imag();
    return 2.0 * std::exp(Complex(0.0, x2)) * std::cos(x2) * strip_rhs(zeta, m);
}

// ---------------------------------------------------------------------------
// Schedules and trajectories.
// ---------------------------------------------------------------------------

/// Piecewise-constant-in-time control: values[k] acts on
/// [breakpoints[k], breakpoints[k+1]].
struct ControlSchedule {
    std::vector<double> breakpoints;
    std::vector<StripMeasure> values;

    double t_begin() const { return breakpoints.front(); }
    double t_end() const { return breakpoints.back(); }
    void validate() const {
        if (breakpoints.size() != values.size() + 1 || values.empty())
            throw std::invalid_argument("ControlSchedule: breakpoints must bracket values");
        for (std::size_t i = 1; i < breakpoints.size(); ++i)
            if (!(breakpoints[i] > breakpoints[i - 1]))
                throw std::invalid_argument("ControlSchedule: breakpoints must increase");
        for (const auto& v : values) v.to_circle().validate();
    }
    static ControlSchedule constant(const StripMeasure& m, double T) {
        return ControlSchedule{{0.0, T}, {m}};
    }
    /// Single-atom, unit-mass schedule from midpoint samples of a driving
    /// function: lambda_mid[k] acts between breakpoints k and k+1.
    static ControlSchedule single_atom(const std::vector<double>& breakpoints,
                                       const std::vector<double>& lambda_mid) {
        ControlSchedule s;
        s.breakpoints = breakpoints;
        s.values.reserve(lambda_mid.size());
        for (double lam : lambda_mid) s.values.push_back(StripMeasure{{{lam, 1.0}}});
        s.validate();
        return s;
    }
};

enum class Coord { Disk, Strip };

struct Trajectory {
    std::vector<double> times;
    std::vector<Complex> states;
    Coord coord = Coord::Strip;

    Complex endpoint() const { return states.back(); }
};

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,re,im,coord\n";
    const char* tag = traj.coord == Coord::Disk ? "disk" : "strip";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%s\n", traj.times[i],
                      traj.states[i].real(), traj.states[i].imag(), tag);
        os << buf;
    }
}

namespace detail {

// Near the strip boundary the field scales like 1/cos x2; shrink the step
// bound there.
inline double strip_step_cap(double x2, double max_step) {
    const double c = std::cos(x2);
    if (c >= 0.05) return max_step;
    return std::max(max_step * (c / 0.05), 1e-6 * max_step);
}

template <class RhsPiece>
Trajectory integrate_piecewise(Complex start, const ControlSchedule& schedule, RhsPiece&& rhs_of,
                               const SolverConfig& cfg, double t0, double t1, Coord coord,
                               double domain_guard) {
    schedule.validate();
    if (t0 < schedule.t_begin() - 1e-12 || t1 > schedule.t_end() + 1e-12 || t1 < t0)
        throw std::invalid_argument("integrate: span not covered by schedule");

    Trajectory traj;
    traj.coord = coord;
    std::array<double, 2> y{start.real(), start.imag()};
    traj.times.push_back(t0);
    traj.states.push_back(start);

    auto observer = [&](double t, const std::array<double, 2>& s) {
        const Complex z(s[0], s[1]);
        const double excess = coord == Coord::Strip ? std::abs(s[1]) - kHalfPi
                                                    : std::abs(z) - 1.0;
        if (excess > -domain_guard)
            throw OdeFailure("integrate: state left the open domain at t=" + std::to_string(t));
        if (t > traj.times.back()) {
            traj.times.push_back(t);
            traj.states.push_back(z);
        }
    };
    auto cap = [&](double, const std::array<double, 2>& s) {
        return coord == Coord::Strip ? strip_step_cap(s[1], cfg.max_step) : cfg.max_step;
    };

    for (std::size_t k = 0; k + 1 < schedule.breakpoints.size(); ++k) {
        const double a = std::max(schedule.breakpoints[k], t0);
        const double b = std::min(schedule.breakpoints[k + 1], t1);
        if (b <= a) continue;
        auto rhs = rhs_of(schedule.values[k]);
        auto f = [&](double, const std::array<double, 2>& s, std::array<double, 2>& dy) {
            const Complex v = rhs(Complex(s[0], s[1]));
            dy[0] = v.real();
            dy[1] = v.imag();
        };
        integrate_ode<2>(f, y, a, b, cfg, observer, cap);
    }
    return traj;
}

}  // namespace detail

/// Integrates the strip-coordinate controllable ODE over [t0, t1].
inline Trajectory integrate(StripPoint start, const ControlSchedule& schedule,
                            const SolverConfig& cfg, double t0, double t1) {
    return detail::integrate_piecewise(
        start.value, schedule,
        [](const StripMeasure& m) {
            return [&m](Complex z) { return strip_rhs(z, m); };
        },
        cfg, t0, t1, Coord::Strip, 1e-12);
}

inline Trajectory integrate(StripPoint start, const ControlSchedule& schedule,
                            const SolverConfig& cfg) {
    return integrate(start, schedule, cfg, schedule.t_begin(), schedule.t_end());
}

/// Disk-coordinate form of the same evolution (validation path).
inline Trajectory integrate_disk(DiskPoint start, const ControlSchedule& schedule,
                                 const SolverConfig& cfg, double t0, double t1) {
    return detail::integrate_piecewise(
        start.value, schedule,
        [](const StripMeasure& m) {
            AtomicMeasure circ = m.to_circle();
            return [circ](Complex w) { return disk_rhs(w, circ); };
        },
        cfg, t0, t1, Coord::Disk, 1e-12);
}

inline Trajectory integrate_disk(DiskPoint start, const ControlSchedule& schedule,
                                 const SolverConfig& cfg) {
    return integrate_disk(start, schedule, cfg, schedule.t_begin(), schedule.t_end());
}

/// Evolution-family transition phi_{s,t}: endpoint of the flow over [s, t].
inline Complex evolution_compose(const ControlSchedule& schedule, const SolverConfig& cfg,
                                 double s, double t, StripPoint start) {
    return integrate(start, schedule, cfg, s, t).endpoint();
}

/// Closed-loop integration with a state-feedback control u(t, zeta),
/// |u - 1| <= 1.
template <class ControlFn>
Trajectory integrate_u(StripPoint start, ControlFn&& u_of, const SolverConfig& cfg, double t0,
                       double t1) {
    Trajectory traj;
    traj.coord = Coord::Strip;
    std::array<double, 2> y{start.value.real(), start.value.imag()};
    traj.times.push_back(t0);
    traj.states.push_back(start.value);
    auto f = [&](double t, const std::array<double, 2>& s, std::array<double, 2>& dy) {
        const auto [d1, d2] = u_rhs(s[0], s[1], u_of(t, Complex(s[0], s[1])));
        dy[0] = d1;
        dy[1] = d2;
    };
    auto observer = [&](double t, const std::array<double, 2>& s) {
        if (std::abs(s[1]) >= kHalfPi)
            throw OdeFailure("integrate_u: state left the strip at t=" + std::to_string(t));
        if (t > traj.times.back()) {
            traj.times.push_back(t);
            traj.states.emplace_back(s[0], s[1]);
        }
    };
    auto cap = [&](double, const std::array<double, 2>& s) {
        return detail::strip_step_cap(s[1], cfg.max_step);
    };
    integrate_ode<2>(f, y, t0, t1, cfg, observer, cap);
    return traj;
}

}  // namespace vregion
