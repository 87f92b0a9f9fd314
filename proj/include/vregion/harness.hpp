#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "vregion/conformal.hpp"
#include "vregion/extremal.hpp"
#include "vregion/loewner.hpp"
#include "vregion/region.hpp"

namespace vregion {

enum class MeasureClass { Probability, SubProbability };

struct ExperimentConfig {
    RegionSpec spec;
    int n_samples = 1000;
    int n_pieces = 3;
    int atoms_per_piece = 3;
    std::uint64_t seed = 1;
    SolverConfig solver{};
    MeasureClass measure_class = MeasureClass::Probability;
};

struct Failure {
    int sample;
    std::string what;
};

struct ExperimentReport {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<std::string> verdicts;   // per sample, sorted by index
    std::vector<double> margins;         // per sample signed margin (when meaningful)
    double worst_margin = 0.0;
    std::vector<Failure> failures;
    double wall_seconds = 0.0;           // excluded from serialization

    bool ok() const { return failures.empty(); }

    void write_text(std::ostream& os) const {
        char buf[256];
        std::snprintf(buf, sizeof buf, "experiment %s seed=%llu samples=%zu worst_margin=%.9e\n",
                      name.c_str(), static_cast<unsigned long long>(seed), verdicts.size(),
                      worst_margin);
        os << buf;
        for (const auto& f : failures) os << "FAIL sample " << f.sample << ": " << f.what << "\n";
        os << (ok() ? "result: PASS\n" : "result: FAIL\n");
    }
    void write_csv(std::ostream& os) const {
        os << "sample,verdict,margin\n";
        for (std::size_t i = 0; i < verdicts.size(); ++i) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%zu,%s,%.17g\n", i, verdicts[i].c_str(),
                          i < margins.size() ? margins[i] : 0.0);
            os << buf;
        }
    }
};

namespace detail {

// splitmix64: decorrelates the per-sample streams from (master seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Random admissible piecewise-constant schedule over [0, T]: atom positions
/// uniform on the circle minus a guard arc around 1, masses Dirichlet
/// (probability class) or additionally damped by a uniform factor
/// (sub-probability class).  Deterministic in (seed, sample index).
inline ControlSchedule random_schedule(const ExperimentConfig& cfg, std::uint64_t sample_index) {
    std::mt19937_64 rng(detail::mix_seed(cfg.seed, sample_index));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    constexpr double guard = 1e-6;

    ControlSchedule s;
    const double T = cfg.spec.T;
    s.breakpoints.push_back(0.0);
    for (int k = 1; k < cfg.n_pieces; ++k)
        s.breakpoints.push_back(T * static_cast<double>(k) / cfg.n_pieces);
    s.breakpoints.push_back(T);

    for (int k = 0; k < cfg.n_pieces; ++k) {
        StripMeasure m;
        std::vector<double> w(cfg.atoms_per_piece);
        double total = 0.0;
        for (double& x : w) {
            x = -std::log(1.0 - unif(rng));  // Exp(1) draws; normalized -> Dirichlet(1,..,1)
            total += x;
        }
        double scale = 1.0 / total;
        if (cfg.measure_class == MeasureClass::SubProbability) scale *= unif(rng);
        for (int j = 0; j < cfg.atoms_per_piece; ++j) {
            const double theta = guard + (2.0 * kPi - 2.0 * guard) * unif(rng);
            m.atoms.push_back({kappa_to_lambda(std::polar(1.0, theta)), w[j] * scale});
        }
        s.values.push_back(std::move(m));
    }
    return s;
}

/// Monte Carlo check that every admissible endpoint lands in the value
/// region (interior or boundary); probability-class endpoints must also stay
/// away from the excluded base point.
inline ExperimentReport containment_experiment(const ExperimentConfig& cfg,
                                               double margin_tol = 1e-8) {
    const auto t_start = std::chrono::steady_clock::now();
    ExperimentReport rep;
    rep.name = "containment";
    rep.seed = cfg.seed;
    rep.worst_margin = 1e300;
    Region region(cfg.spec);
    const StripPoint zeta0{cfg.spec.zeta0};

    for (int i = 0; i < cfg.n_samples; ++i) {
        const ControlSchedule schedule = random_schedule(cfg, i);
        Complex end;
        try {
            end = integrate(zeta0, schedule, cfg.solver).endpoint();
        } catch (const std::exception& e) {
            rep.failures.push_back({i, std::string("integration failure: ") + e.what()});
            rep.verdicts.emplace_back("error");
            rep.margins.push_back(0.0);
            continue;
        }
        const double margin = region.signed_distance(end);
        rep.worst_margin = std::min(rep.worst_margin, margin);
        const MembershipVerdict v = region.contains(end, margin_tol);
        rep.verdicts.emplace_back(verdict_name(v));
        rep.margins.push_back(margin);
        if (v == MembershipVerdict::Outside)
            rep.failures.push_back(
                {i, "endpoint outside the region, margin " + std::to_string(margin) +
                        " (reproduce: seed " + std::to_string(cfg.seed) + ", sample " +
                        std::to_string(i) + ")"});
        if (cfg.measure_class == MeasureClass::Probability &&
            std::abs(end - cfg.spec.zeta0) <= margin_tol)
            rep.failures.push_back({i, "probability-class endpoint collapsed onto zeta0"});
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

/// Boundary attainment via the extremal flow: for targets on both arcs the
/// integrated endpoint must match the quadrature value, and replaying the
/// extremal driving through the controllable ODE must reproduce it.
inline ExperimentReport attainment_experiment(const RegionSpec& spec, int n_targets_per_branch,
                                              const SolverConfig& solver,
                                              double endpoint_tol = 1e-7,
                                              double replay_tol = 1e-6) {
    const auto t_start = std::chrono::steady_clock::now();
    ExperimentReport rep;
    rep.name = "attainment";
    rep.worst_margin = 0.0;
    const auto [am, ap] = a_pm(spec);
    const StripPoint zeta0{spec.zeta0};

    int idx = 0;
    for (Branch arc_branch : {Branch::GammaPlus, Branch::GammaMinus}) {
        const ExtremalBranch eb =
            arc_branch == Branch::GammaPlus ? ExtremalBranch::PsiPlus : ExtremalBranch::PsiMinus;
        for (int j = 0; j < n_targets_per_branch; ++j, ++idx) {
            double s = am + (ap - am) * (j + 0.5) / n_targets_per_branch;
            // At sin x2_0 the lower-branch driving degenerates (the target
            // is the excluded base point); nudge such targets sideways.
            const double s0 = std::sin(spec.x2_0());
            const double nudge = 0.25 * (ap - am) / n_targets_per_branch;
            if (std::abs(s - s0) < nudge) s = s0 + (s >= s0 ? nudge : -nudge);
            try {
                const QuadratureSolution q = solve_C(spec, s);
                const double expect_x1 = arc_x1(spec, arc_branch, s);
                const ExtremalTrajectory traj = integrate_extremal(spec, eb, s, solver);
                const Complex end = traj.endpoint();
                const double err_target =
                    std::max(std::abs(std::sin(end.imag()) - s), std::abs(end.real() - expect_x1));
                const double err_quad =
                    arc_branch == Branch::GammaPlus
                        ? std::abs(end.real() - q.endpoint_x1)
                        : std::abs(end.real() -
                                   (2.0 * (spec.x1_0() + spec.T / 2.0) - q.endpoint_x1));
                const Complex replay =
                    integrate(zeta0, schedule_from_driving(traj), solver).endpoint();
                const double err_replay = std::abs(replay - end);
                rep.worst_margin = std::max({rep.worst_margin, err_target, err_quad});
                rep.margins.push_back(err_replay);
                if (err_target > endpoint_tol || err_quad > endpoint_tol) {
                    rep.failures.push_back(
                        {idx, "endpoint mismatch at target sin_x2=" + std::to_string(s)});
                    rep.verdicts.emplace_back("mismatch");
                } else if (err_replay > replay_tol) {
                    rep.failures.push_back(
                        {idx, "driving replay mismatch at target sin_x2=" + std::to_string(s)});
                    rep.verdicts.emplace_back("replay_mismatch");
                } else {
                    rep.verdicts.emplace_back("attained");
                }
            } catch (const std::exception& e) {
                rep.failures.push_back({idx, std::string("exception: ") + e.what()});
                rep.verdicts.emplace_back("error");
                rep.margins.push_back(0.0);
            }
        }
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

/// Derivative-product bound over Monte Carlo endpoints: with f'(-1) = e^T
/// and f'(1) <= 1 at the Denjoy-Wolff point, e^{T/2} >= L(sin x2_0, sin x2(T)).
inline ExperimentReport corollary_experiment(const ExperimentConfig& cfg, double tol = 1e-9) {
    const auto t_start = std::chrono::steady_clock::now();
    ExperimentReport rep;
    rep.name = "corollary";
    rep.seed = cfg.seed;
    rep.worst_margin = 1e300;
    const double bound = std::exp(cfg.spec.T / 2.0);
    const double s0 = std::sin(cfg.spec.x2_0());
    const StripPoint zeta0{cfg.spec.zeta0};

    for (int i = 0; i < cfg.n_samples; ++i) {
        const ControlSchedule schedule = random_schedule(cfg, i);
        const Complex end = integrate(zeta0, schedule, cfg.solver).endpoint();
        const double L = corollary_bound(s0, std::sin(end.imag()));
        const double margin = bound - L;
        rep.worst_margin = std::min(rep.worst_margin, margin);
        rep.margins.push_back(margin);
        rep.verdicts.emplace_back(margin >= -tol ? "ok" : "violated");
        if (margin < -tol)
            rep.failures.push_back({i, "bound violated by " + std::to_string(-margin)});
    }
    // Sharpness witnesses: the hyperbolic automorphism (L = 1) and the
    // vertical-cap endpoint (L = e^{T/2} exactly).
    if (std::abs(corollary_bound(s0, s0) - 1.0) > 0.0)
        rep.failures.push_back({-1, "L(a,a) != 1"});
    const auto [am, ap] = a_pm(cfg.spec);
    if (std::abs(corollary_bound(s0, ap) - bound) > tol * bound)
        rep.failures.push_back({-2, "equality defect at the a_plus endpoint"});
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

/// Compares the boundary of V(0, T), mapped to the disk, with the boundary
/// of the closed comparison disk of diameter [0, tanh(T/2)]: they meet only
/// near 0 and tanh(T/2).
inline ExperimentReport goryainov_comparison(double T, int n_samples,
                                             double contact_radius = 1e-6) {
    const auto t_start = std::chrono::steady_clock::now();
    ExperimentReport rep;
    rep.name = "goryainov";
    rep.worst_margin = 1e300;
    const RegionSpec spec(StripPoint{Complex(0.0, 0.0)}, T);
    const double c = std::tanh(T / 2.0) / 2.0;  // disk center; radius equals c
    const Complex common1(0.0, 0.0), common2(2.0 * c, 0.0);

    int idx = 0;
    for (Branch b : {Branch::GammaPlus, Branch::GammaMinus}) {
        const BoundaryArcSample arc = gamma_arc(spec, b, n_samples);
        for (const Complex& zeta : arc.points) {
            const Complex w = std::tanh(zeta / 2.0);
            const bool near_common =
                std::abs(w - common1) < contact_radius || std::abs(w - common2) < contact_radius;
            const double separation = c - std::abs(w - c);  // > 0 strictly inside
            if (!near_common) {
                rep.worst_margin = std::min(rep.worst_margin, separation);
                if (separation <= 0.0)
                    rep.failures.push_back(
                        {idx, "region boundary point outside the comparison disk"});
            }
            rep.verdicts.emplace_back(near_common ? "common" : "inside");
            rep.margins.push_back(separation);
            ++idx;
        }
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

}  // namespace vregion
