#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vregion/harness.hpp"

using namespace vregion;

namespace {
ExperimentConfig small_config(std::uint64_t seed) {
    ExperimentConfig cfg{RegionSpec(strip_map(DiskPoint{Complex(0.0, 0.5)}), std::log(4.0))};
    cfg.n_samples = 60;
    cfg.seed = seed;
    return cfg;
}
}  // namespace

TEST_CASE("random schedules are deterministic and admissible") {
    const ExperimentConfig cfg = small_config(42);
    for (int i = 0; i < 20; ++i) {
        const ControlSchedule a = random_schedule(cfg, i);
        const ControlSchedule b = random_schedule(cfg, i);
        a.validate();
        REQUIRE(a.breakpoints == b.breakpoints);
        REQUIRE(a.values.size() == b.values.size());
        for (std::size_t k = 0; k < a.values.size(); ++k) {
            CHECK(a.values[k].total_mass() == doctest::Approx(1.0).epsilon(1e-12));
            for (std::size_t j = 0; j < a.values[k].atoms.size(); ++j) {
                CHECK(a.values[k].atoms[j].lambda == b.values[k].atoms[j].lambda);
                CHECK(a.values[k].atoms[j].mass == b.values[k].atoms[j].mass);
            }
        }
    }
    // different indices give different schedules
    CHECK(random_schedule(cfg, 0).values[0].atoms[0].lambda !=
          random_schedule(cfg, 1).values[0].atoms[0].lambda);

    ExperimentConfig sub = cfg;
    sub.measure_class = MeasureClass::SubProbability;
    for (int i = 0; i < 20; ++i) {
        const ControlSchedule s = random_schedule(sub, i);
        s.validate();
        for (const StripMeasure& m : s.values) CHECK(m.total_mass() <= 1.0 + 1e-12);
    }
}

TEST_CASE("containment experiment passes on a small run") {
    ExperimentReport rep = containment_experiment(small_config(7));
    CHECK(rep.ok());
    CHECK(rep.worst_margin >= -1e-8);
    CHECK(rep.verdicts.size() == 60);

    ExperimentConfig sub = small_config(8);
    sub.measure_class = MeasureClass::SubProbability;
    sub.n_samples = 40;
    ExperimentReport sub_rep = containment_experiment(sub);
    CHECK(sub_rep.ok());
    CHECK(sub_rep.worst_margin >= -1e-8);
}

TEST_CASE("attainment experiment passes on a small run") {
    const RegionSpec spec(strip_map(DiskPoint{Complex(0.0, 0.5)}), std::log(4.0));
    // 7 targets per branch; a multiple of 5 would put one target exactly at
    // sin x2_0, where the lower-branch driving degenerates.
    ExperimentReport rep = attainment_experiment(spec, 7, SolverConfig{});
    CHECK(rep.ok());
    CHECK(rep.worst_margin < 1e-7);
    CHECK(rep.verdicts.size() == 14);
}

TEST_CASE("corollary experiment passes and witnesses sharpness") {
    ExperimentReport rep = corollary_experiment(small_config(9));
    CHECK(rep.ok());
    CHECK(rep.worst_margin >= -1e-9);
}

TEST_CASE("comparison with the non-univalent disk") {
    ExperimentReport rep = goryainov_comparison(std::log(6.0), 200, 0.02);
    CHECK(rep.ok());
    CHECK(rep.worst_margin > 0.0);
    // samples near the two common points are classified as contact points
    int common = 0;
    for (const std::string& v : rep.verdicts) common += v == "common";
    CHECK(common >= 2);
    CHECK(common < 200);  // most of the boundary is strictly inside
}

TEST_CASE("reports serialize reproducibly") {
    const ExperimentReport a = containment_experiment(small_config(11));
    const ExperimentReport b = containment_experiment(small_config(11));
    std::ostringstream ta, tb, ca, cb;
    a.write_text(ta);
    b.write_text(tb);
    a.write_csv(ca);
    b.write_csv(cb);
    CHECK(ta.str() == tb.str());
    CHECK(ca.str() == cb.str());
    CHECK(ta.str().find("result: PASS") != std::string::npos);
}

TEST_CASE("piecewise-constant refinement converges to the smooth evolution") {
    const StripPoint zeta0 = strip_map(DiskPoint{Complex(0.0, 0.5)});
    const double T = std::log(4.0);
    SolverConfig cfg;
    auto lambda = [](double t) { return std::exp(-t / 2.0); };

    auto endpoint_with = [&](int pieces) {
        std::vector<double> breaks, mids;
        for (int k = 0; k <= pieces; ++k) breaks.push_back(T * k / pieces);
        for (int k = 0; k < pieces; ++k) mids.push_back(lambda(T * (k + 0.5) / pieces));
        return integrate(zeta0, ControlSchedule::single_atom(breaks, mids), cfg).endpoint();
    };
    const Complex ref = endpoint_with(4096);
    const double e64 = std::abs(endpoint_with(64) - ref);
    const double e256 = std::abs(endpoint_with(256) - ref);
    CHECK(e256 < e64);
    CHECK(e256 < 1e-6);
    CHECK(e64 < 1e-4);
}
