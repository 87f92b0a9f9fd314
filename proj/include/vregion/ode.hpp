#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace vregion {

enum class OdeMethod { AdaptiveRK, FixedRK4Richardson };

struct SolverConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.1;
    OdeMethod method = OdeMethod::AdaptiveRK;
};

struct OdeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <std::size_t N>
using OdeState = std::array<double, N>;

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double dp_b5[7] = {35.0 / 384,      0.0,         500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784,  11.0 / 84,   0.0};
inline constexpr double dp_b4[7] = {5179.0 / 57600,  0.0,         7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace detail

/// One adaptive Dormand-Prince 5(4) (or fixed RK4 + Richardson) sweep of
/// y' = rhs(t, y) from t0 to t1.  `observer(t, y)` fires at every accepted
/// step including the endpoints; `step_cap(t, y)` may shrink the step bound
/// below cfg.max_step (state-dependent stiffness guard).
template <std::size_t N, class Rhs, class Observer, class StepCap>
void integrate_ode(Rhs&& rhs, std::array<double, N>& y, double t0, double t1,
                   const SolverConfig& cfg, Observer&& observer, StepCap&& step_cap) {
    using State = std::array<double, N>;
    if (!(t1 > t0)) {
        if (t1 == t0) {
            observer(t0, y);
            return;
        }
        throw OdeFailure("integrate_ode: t1 < t0");
    }

    observer(t0, y);

    if (cfg.method == OdeMethod::FixedRK4Richardson) {
        auto rk4_step = [&](double t, const State& s, double h) {
            State k1, k2, k3, k4, tmp, out;
            rhs(t, s, k1);
            for (std::size_t i = 0; i < N; ++i) tmp[i] = s[i] + 0.5 * h * k1[i];
            rhs(t + 0.5 * h, tmp, k2);
            for (std::size_t i = 0; i < N; ++i) tmp[i] = s[i] + 0.5 * h * k2[i];
            rhs(t + 0.5 * h, tmp, k3);
            for (std::size_t i = 0; i < N; ++i) tmp[i] = s[i] + h * k3[i];
            rhs(t + h, tmp, k4);
            for (std::size_t i = 0; i < N; ++i)
                out[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            return out;
        };
        double t = t0;
        while (t < t1) {
            double h = std::min({cfg.max_step, step_cap(t, y), t1 - t});
            State full = rk4_step(t, y, h);
            State half = rk4_step(t, y, 0.5 * h);
            State two = rk4_step(t + 0.5 * h, half, 0.5 * h);
            // Richardson extrapolation of the two half steps.
            for (std::size_t i = 0; i < N; ++i) y[i] = two[i] + (two[i] - full[i]) / 15.0;
            t += h;
            observer(t, y);
        }
        return;
    }

    double t = t0;
    double h = std::min({cfg.max_step, step_cap(t0, y), t1 - t0});
    State k[7];
    int rejected_in_a_row = 0;
    while (t < t1) {
        h = std::min({h, cfg.max_step, step_cap(t, y), t1 - t});
        if (!(h > 0.0) || t + h == t)
            throw OdeFailure("integrate_ode: step size underflow at t=" + std::to_string(t));

        rhs(t, y, k[0]);
        State stage, y5;
        for (int s = 1; s < 7; ++s) {
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j) acc += detail::dp_a[s][j] * k[j][i];
                stage[i] = y[i] + h * acc;
            }
            rhs(t + detail::dp_c[s] * h, stage, k[s]);
        }
        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double acc5 = 0.0, acc4 = 0.0;
            for (int s = 0; s < 7; ++s) {
                acc5 += detail::dp_b5[s] * k[s][i];
                acc4 += detail::dp_b4[s] * k[s][i];
            }
            y5[i] = y[i] + h * acc5;
            double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(h * (acc5 - acc4)) / scale);
        }
        if (err <= 1.0) {
            t += h;
            y = y5;
            observer(t, y);
            rejected_in_a_row = 0;
            double factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
        } else {
            if (++rejected_in_a_row > 200)
                throw OdeFailure("integrate_ode: repeated step rejection at t=" + std::to_string(t));
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
    }
}

template <std::size_t N, class Rhs, class Observer>
void integrate_ode(Rhs&& rhs, std::array<double, N>& y, double t0, double t1,
                   const SolverConfig& cfg, Observer&& observer) {
    integrate_ode(rhs, y, t0, t1, cfg, observer,
                  [&](double, const std::array<double, N>&) { return cfg.max_step; });
}

template <std::size_t N, class Rhs>
void integrate_ode(Rhs&& rhs, std::array<double, N>& y, double t0, double t1,
                   const SolverConfig& cfg) {
    integrate_ode(rhs, y, t0, t1, cfg, [](double, const std::array<double, N>&) {});
}

}  // namespace vregion
