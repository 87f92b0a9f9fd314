#include <doctest.h>

#include <cmath>

#include "vregion/extremal.hpp"
#include "vregion/loewner.hpp"
#include "vregion/region.hpp"

using namespace vregion;

namespace {
RegionSpec spec_i2(double T) { return {strip_map(DiskPoint{Complex(0.0, 0.5)}), T}; }
const double ln4 = std::log(4.0);
}  // namespace

TEST_CASE("optimal control maximizes the Hamiltonian") {
    const ExtremalState states[] = {{0.1, 0.4, 1.0, 0.3},
                                    {0.0, -0.7, -1.0, 0.2},
                                    {1.0, 0.9, 0.0, 1.0},
                                    {0.5, 0.2, 0.3, -0.8}};
    for (const ExtremalState& s : states) {
        const Complex u_star = optimal_u(s);
        CHECK(std::abs(std::abs(u_star - 1.0) - 1.0) < 1e-14);
        const double h_star = hamiltonian(s, u_star);
        double grid_best = -1e300;
        double alpha_best = 0.0;
        for (int j = 0; j < 20000; ++j) {
            const double alpha = 2.0 * kPi * j / 20000;
            const double h = hamiltonian(s, 1.0 + std::exp(Complex(0.0, alpha)));
            if (h > grid_best) {
                grid_best = h;
                alpha_best = alpha;
            }
        }
        CHECK(h_star >= grid_best - 1e-12);
        const double target = std::remainder(s.x2 + s.phi() - alpha_best, 2.0 * kPi);
        CHECK(std::abs(target) < 1e-3);
    }
}

TEST_CASE("adjoint equation is minus the state gradient") {
    const ExtremalState states[] = {{0.2, 0.3, 1.0, 0.5}, {0.0, -0.6, -1.0, 0.1}};
    for (const ExtremalState& s : states) {
        const Complex u = optimal_u(s);
        const ExtremalState d = pontryagin_rhs(s);
        const double h = 1e-5;
        ExtremalState up = s, dn = s;
        up.x2 += h;
        dn.x2 -= h;
        const double dh_dx2 = (hamiltonian(up, u) - hamiltonian(dn, u)) / (2.0 * h);
        CHECK(d.psi1 == 0.0);
        CHECK(std::abs(d.psi2 + dh_dx2) < 1e-6);
        // state equations agree with the control field
        const auto [dx1, dx2] = u_rhs(s.x1, s.x2, u);
        CHECK(std::abs(d.x1 - dx1) < 1e-14);
        CHECK(std::abs(d.x2 - dx2) < 1e-14);
    }
}

TEST_CASE("quadrature constants") {
    const RegionSpec s = spec_i2(ln4);
    const QuadratureSolution q5 = solve_C(s, 0.5);
    CHECK(q5.C == doctest::Approx(3.1506601030871244).epsilon(1e-13));
    CHECK(q5.endpoint_x1 == doctest::Approx(1.5998677138731505).epsilon(1e-13));
    CHECK(phi0_from_C(s.x2_0(), q5.C) ==
          doctest::Approx(0.502252411394856).epsilon(1e-12));

    const QuadratureSolution q3 = solve_C(s, 0.3);
    CHECK(q3.C == doctest::Approx(5.291756917747466).epsilon(1e-13));
    CHECK(q3.endpoint_x1 == doctest::Approx(1.5390546114913615).epsilon(1e-13));

    // endpoint matches the upper-branch boundary formula
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.85}) {
        const QuadratureSolution q = solve_C(s, a);
        CHECK(q.endpoint_x1 == doctest::Approx(arc_x1(s, Branch::GammaPlus, a)).epsilon(1e-12));
        // first integral of the initial phi reproduces C
        CHECK(first_integral(s.x2_0(), phi0_from_C(s.x2_0(), q.C)) ==
              doctest::Approx(q.C).epsilon(1e-12));
    }
    CHECK_THROWS_AS(solve_C(s, 0.95), std::domain_error);
    CHECK_THROWS_AS(solve_C(s, -0.15), std::domain_error);
}

TEST_CASE("extremal trajectories hit the quadrature endpoints") {
    const RegionSpec s = spec_i2(ln4);
    SolverConfig cfg;
    for (double a : {0.3, 0.5, 0.7}) {
        const ExtremalTrajectory plus = integrate_extremal(s, ExtremalBranch::PsiPlus, a, cfg, 256);
        CHECK(std::abs(std::sin(plus.endpoint().imag()) - a) < 1e-8);
        CHECK(std::abs(plus.endpoint().real() - arc_x1(s, Branch::GammaPlus, a)) < 1e-8);

        const ExtremalTrajectory minus =
            integrate_extremal(s, ExtremalBranch::PsiMinus, a, cfg, 256);
        CHECK(std::abs(std::sin(minus.endpoint().imag()) - a) < 1e-8);
        CHECK(std::abs(minus.endpoint().real() - arc_x1(s, Branch::GammaMinus, a)) < 1e-8);
    }
}

TEST_CASE("first integral is conserved") {
    const RegionSpec s = spec_i2(ln4);
    SolverConfig cfg;
    for (ExtremalBranch b : {ExtremalBranch::PsiPlus, ExtremalBranch::PsiMinus}) {
        const ExtremalTrajectory traj = integrate_extremal(s, b, 0.4, cfg, 256);
        const double I0 = first_integral(traj.x2.front(), traj.phi.front());
        double drift = 0.0;
        for (std::size_t k = 0; k < traj.times.size(); ++k)
            drift = std::max(drift, std::abs(first_integral(traj.x2[k], traj.phi[k]) - I0));
        CHECK(drift < 1e-9);
        if (b == ExtremalBranch::PsiPlus) CHECK(I0 == doctest::Approx(traj.C).epsilon(1e-12));
    }
}

TEST_CASE("reduced and full adjoint forms agree") {
    const RegionSpec s = spec_i2(ln4);
    SolverConfig cfg;
    for (ExtremalBranch b : {ExtremalBranch::PsiPlus, ExtremalBranch::PsiMinus}) {
        const ExtremalTrajectory red = integrate_extremal(s, b, 0.45, cfg, 64);
        const double phi0 = red.phi.front();
        const ExtremalTrajectory full =
            integrate_extremal_full(s, std::cos(phi0), std::sin(phi0), cfg, 64);
        CHECK(std::abs(red.endpoint() - full.endpoint()) < 1e-9);
        for (std::size_t k = 0; k < red.times.size(); k += 8)
            CHECK(std::abs(std::sin(red.phi[k]) - std::sin(full.phi[k])) < 1e-9);
    }
}

TEST_CASE("abnormal branches run along the caps") {
    const RegionSpec s = spec_i2(ln4);
    const auto [am, ap] = a_pm(s);
    SolverConfig cfg;
    const ExtremalTrajectory up =
        integrate_extremal(s, ExtremalBranch::PsiZeroUp, 0.0, cfg, 128);
    CHECK(std::abs(up.endpoint().real() - (s.x1_0() + s.T / 2.0)) < 1e-9);
    CHECK(std::abs(std::sin(up.endpoint().imag()) - ap) < 1e-9);
    const ExtremalTrajectory down =
        integrate_extremal(s, ExtremalBranch::PsiZeroDown, 0.0, cfg, 128);
    CHECK(std::abs(down.endpoint().real() - (s.x1_0() + s.T / 2.0)) < 1e-9);
    CHECK(std::abs(std::sin(down.endpoint().imag()) - am) < 1e-9);

    // driving is the explicit exponential +-e^{-x1_0 - t/2}
    for (std::size_t k = 0; k < up.times.size(); k += 16) {
        const double ref = std::exp(-s.x1_0() - up.times[k] / 2.0);
        CHECK(std::abs(up.driving.lambda[k] - ref) < 1e-10);
        CHECK(std::abs(down.driving.lambda[k] + ref) < 1e-10);
    }
}

TEST_CASE("stationary branch at the base height") {
    const RegionSpec s = spec_i2(ln4);
    SolverConfig cfg;
    const double s0 = std::sin(s.x2_0());
    const ExtremalTrajectory traj = integrate_extremal(s, ExtremalBranch::PsiPlus, s0, cfg, 64);
    CHECK(traj.C == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(traj.endpoint() - (s.zeta0 + s.T)) < 1e-10);
    for (double lam : traj.driving.lambda) CHECK(std::abs(lam) < 1e-10);
}

TEST_CASE("driving closed form matches the raw inversion") {
    const RegionSpec s = spec_i2(ln4);
    SolverConfig cfg;
    for (ExtremalBranch b : {ExtremalBranch::PsiPlus, ExtremalBranch::PsiMinus}) {
        const ExtremalTrajectory traj = integrate_extremal(s, b, 0.35, cfg, 64);
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const ExtremalState st = traj.state_at(k);
            CHECK(std::abs(extremal_driving_value(st) - extremal_driving_value_raw(st)) < 1e-12);
        }
    }
}

TEST_CASE("log-derivative identity of the driving") {
    const RegionSpec s = spec_i2(ln4);
    SolverConfig cfg;
    const ExtremalTrajectory traj =
        integrate_extremal(s, ExtremalBranch::PsiPlus, 0.4, cfg, 4096);
    CHECK(log_derivative_test(traj) < 1e-5);
}

TEST_CASE("replaying the extremal driving through the controllable equation") {
    const RegionSpec s = spec_i2(ln4);
    SolverConfig cfg;
    for (ExtremalBranch b : {ExtremalBranch::PsiPlus, ExtremalBranch::PsiMinus,
                             ExtremalBranch::PsiZeroUp}) {
        const ExtremalTrajectory traj = integrate_extremal(s, b, 0.55, cfg, 2048);
        const ControlSchedule sched = schedule_from_driving(traj);
        const Complex replay = integrate(StripPoint{s.zeta0}, sched, cfg).endpoint();
        CHECK(std::abs(replay - traj.endpoint()) < 1e-6);
    }
}

TEST_CASE("zero adjoint is rejected") {
    CHECK_THROWS_AS(ExtremalState({0.0, 0.0, 0.0, 0.0}).phi(), std::domain_error);
}
