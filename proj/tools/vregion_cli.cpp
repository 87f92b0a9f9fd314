// Command-line front end: boundary-arc export, trajectory simulation,
// extremal targeting, slit construction, verification suites and figures.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vregion/conformal.hpp"
#include "vregion/extremal.hpp"
#include "vregion/figure.hpp"
#include "vregion/harness.hpp"
#include "vregion/loewner.hpp"
#include "vregion/region.hpp"
#include "vregion/slit.hpp"

namespace {

using namespace vregion;

Complex parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) return Complex(std::stod(s), 0.0);
    return Complex(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

double parse_T(const std::string& s) {
    if (s == "ln2") return std::log(2.0);
    if (s == "ln4") return std::log(4.0);
    if (s == "ln6") return std::log(6.0);
    return std::stod(s);
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
    return file;
}

ControlSchedule schedule_from_file(const std::string& path, double T) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--schedule", "cannot open " + path);
    // Rows: t0 t1 lambda mass (comma or whitespace separated); consecutive
    // rows with the same interval contribute atoms to the same piece.
    ControlSchedule s;
    std::string line;
    double cur_t0 = 0.0, cur_t1 = -1.0;
    while (std::getline(in, line)) {
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream row(line);
        double t0, t1, lam, mass;
        if (!(row >> t0 >> t1 >> lam >> mass)) continue;
        if (s.values.empty() || t0 != cur_t0 || t1 != cur_t1) {
            if (s.values.empty()) s.breakpoints.push_back(t0);
            s.breakpoints.push_back(t1);
            s.values.emplace_back();
            cur_t0 = t0;
            cur_t1 = t1;
        }
        s.values.back().atoms.push_back({lam, mass});
    }
    (void)T;
    s.validate();
    return s;
}

ControlSchedule builtin_schedule(const std::string& name, const RegionSpec& spec,
                                 const SolverConfig& solver) {
    if (name == "automorphism")
        return ControlSchedule::constant(StripMeasure{{{0.0, 1.0}}}, spec.T);
    if (name == "psizero-up" || name == "psizero-down") {
        const ExtremalBranch b =
            name == "psizero-up" ? ExtremalBranch::PsiZeroUp : ExtremalBranch::PsiZeroDown;
        return schedule_from_driving(integrate_extremal(spec, b, 0.0, solver));
    }
    if (name.rfind("random:", 0) == 0) {
        ExperimentConfig cfg{spec};
        cfg.seed = std::stoull(name.substr(7));
        return random_schedule(cfg, 0);
    }
    if (name.rfind("file:", 0) == 0) return schedule_from_file(name.substr(5), spec.T);
    throw CLI::ValidationError("--schedule", "unknown schedule " + name);
}

int run_verify(const std::string& suite, std::uint64_t seed, double scale,
               const SolverConfig& solver) {
    const std::vector<std::pair<Complex, double>> instances = {
        {Complex(0.0, 0.5), std::log(4.0)}, {Complex(0.0, 0.0), std::log(4.0)}};
    bool all_ok = true;
    auto report = [&](const ExperimentReport& r) {
        r.write_text(std::cout);
        all_ok = all_ok && r.ok();
    };
    for (const auto& [z0, T] : instances) {
        const RegionSpec spec(strip_map(DiskPoint{z0}), T);
        if (suite == "containment" || suite == "all") {
            ExperimentConfig cfg{spec};
            cfg.n_samples = std::max(1, static_cast<int>(1000 * scale));
            cfg.seed = seed;
            cfg.solver = solver;
            report(containment_experiment(cfg));
        }
        if (suite == "attainment" || suite == "all")
            report(attainment_experiment(spec, std::max(1, static_cast<int>(20 * scale)), solver));
        if (suite == "corollary" || suite == "all") {
            ExperimentConfig cfg{spec};
            cfg.n_samples = std::max(1, static_cast<int>(500 * scale));
            cfg.seed = seed;
            cfg.solver = solver;
            report(corollary_experiment(cfg));
        }
    }
    if (suite == "goryainov" || suite == "all")
        report(goryainov_comparison(std::log(6.0), std::max(2, static_cast<int>(200 * scale))));
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Value regions of univalent self-maps with two boundary fixed points"};
    app.require_subcommand(1);

    std::string z0_str = "0,0", T_str = "ln4", out_path, schedule_name = "automorphism";
    std::vector<std::string> T_list_str;
    std::string suite = "all", target_str, format = "csv";
    std::vector<std::string> show_flags;
    std::uint64_t seed = 1;
    double scale = 1.0, C1 = 1.0, C2 = 0.0, tol = 1e-9;
    int n = 256, size_px = 640;
    SolverConfig solver;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "output file ('-' for stdout)");
        cmd->add_option("--tol", tol, "tolerance");
    };

    auto* cmd_region = app.add_subcommand("region", "boundary arcs of the value region");
    cmd_region->add_option("--z0", z0_str, "base point, 're,im'");
    cmd_region->add_option("--T", T_str, "log of f'(-1): decimal or ln2/ln4/ln6");
    cmd_region->add_option("--n", n, "samples per branch");
    add_common(cmd_region);

    auto* cmd_simulate = app.add_subcommand("simulate", "integrate the controllable ODE");
    cmd_simulate->add_option("--z0", z0_str);
    cmd_simulate->add_option("--T", T_str);
    cmd_simulate->add_option("--schedule", schedule_name,
                             "automorphism | psizero-up | psizero-down | random:<seed> | "
                             "file:<path>");
    add_common(cmd_simulate);

    auto* cmd_extremal = app.add_subcommand("extremal", "Pontryagin extremal trajectory");
    cmd_extremal->add_option("--z0", z0_str);
    cmd_extremal->add_option("--T", T_str);
    cmd_extremal->add_option("--target", target_str,
                             "target sin x2 on gamma+ ('minus:<v>' for gamma-), or "
                             "psizero-up/psizero-down");
    add_common(cmd_extremal);

    auto* cmd_slit = app.add_subcommand("slit", "circular-arc slit construction");
    cmd_slit->add_option("--C1", C1)->required();
    cmd_slit->add_option("--C2", C2);
    cmd_slit->add_option("--T", T_str);
    cmd_slit->add_option("--n", n);
    cmd_slit->add_option("--format", format, "csv | svg");
    add_common(cmd_slit);

    auto* cmd_verify = app.add_subcommand("verify", "randomized verification suites");
    cmd_verify->add_option("--suite", suite, "containment|attainment|corollary|goryainov|all");
    cmd_verify->add_option("--seed", seed);
    cmd_verify->add_option("--scale", scale, "sample-count multiplier");

    auto* cmd_figure = app.add_subcommand("figure", "value-region figure (SVG)");
    cmd_figure->add_option("--z0", z0_str);
    cmd_figure->add_option("--T", T_list_str, "one or more T values")->required();
    cmd_figure->add_option("--show", show_flags, "region d1 d2 goryainov labels");
    cmd_figure->add_option("--size", size_px);
    cmd_figure->add_option("--n", n);
    add_common(cmd_figure);

    try {
        app.parse(argc, argv);

        std::ofstream file;
        if (cmd_region->parsed()) {
            const double T = parse_T(T_str);
            const RegionSpec spec(strip_map(DiskPoint{parse_complex(z0_str)}), T);
            std::ostream& os = open_out(file, out_path);
            os << "branch,x2,x1,disk_re,disk_im\n";
            for (Branch b : {Branch::GammaPlus, Branch::GammaMinus}) {
                const BoundaryArcSample arc = gamma_arc(spec, b, n);
                for (std::size_t i = 0; i < arc.points.size(); ++i) {
                    const Complex w = std::tanh(arc.points[i] / 2.0);
                    char buf[200];
                    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g\n",
                                  branch_name(b), arc.x2_grid[i], arc.points[i].real(), w.real(),
                                  w.imag());
                    os << buf;
                }
            }
        } else if (cmd_simulate->parsed()) {
            const double T = parse_T(T_str);
            const StripPoint zeta0 = strip_map(DiskPoint{parse_complex(z0_str)});
            const RegionSpec spec(zeta0, T);
            const ControlSchedule schedule = builtin_schedule(schedule_name, spec, solver);
            const Trajectory traj = integrate(zeta0, schedule, solver);
            write_trajectory_csv(open_out(file, out_path), traj);
        } else if (cmd_extremal->parsed()) {
            const double T = parse_T(T_str);
            const RegionSpec spec(strip_map(DiskPoint{parse_complex(z0_str)}), T);
            ExtremalBranch branch = ExtremalBranch::PsiPlus;
            double target = 0.0;
            if (target_str == "psizero-up") {
                branch = ExtremalBranch::PsiZeroUp;
            } else if (target_str == "psizero-down") {
                branch = ExtremalBranch::PsiZeroDown;
            } else if (target_str.rfind("minus:", 0) == 0) {
                branch = ExtremalBranch::PsiMinus;
                target = std::stod(target_str.substr(6));
            } else if (!target_str.empty()) {
                target = std::stod(target_str);
            } else {
                throw CLI::ValidationError("--target", "required");
            }
            const ExtremalTrajectory traj = integrate_extremal(spec, branch, target, solver, 512);
            std::ostream& os = open_out(file, out_path);
            os << "t,x1,x2,phi,lambda_star\n";
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                char buf[200];
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.times[i],
                              traj.x1[i], traj.x2[i], traj.phi[i], traj.driving.lambda[i]);
                os << buf;
            }
        } else if (cmd_slit->parsed()) {
            const double T = parse_T(T_str);
            const CircularArcParams p{C1, C2};
            const AbSolution ab = integrate_ab(p, default_a0(p), T, solver);
            const SlitGeometry g = slit_geometry(ab, n >= 4 ? n : 50);
            std::ostream& os = open_out(file, out_path);
            if (format == "svg") {
                SvgCanvas canvas(size_px);
                canvas.circle(Complex(0.0, 0.0), 1.0, "black");
                canvas.polyline(g.disk_arc_samples, "#d62728");
                os << canvas.finish();
            } else {
                os << "index,re,im\n";
                for (std::size_t i = 0; i < g.disk_arc_samples.size(); ++i) {
                    char buf[128];
                    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i,
                                  g.disk_arc_samples[i].real(), g.disk_arc_samples[i].imag());
                    os << buf;
                }
            }
        } else if (cmd_verify->parsed()) {
            return run_verify(suite, seed, scale, solver);
        } else if (cmd_figure->parsed()) {
            FigureSpec fs;
            fs.z0 = parse_complex(z0_str);
            for (const auto& t : T_list_str) fs.T_list.push_back(parse_T(t));
            fs.size_px = size_px;
            fs.n_per_branch = n;
            if (!show_flags.empty()) {
                fs.show_region = fs.show_d1 = fs.show_d2 = fs.show_goryainov_disk = false;
                for (const auto& f : show_flags) {
                    if (f == "region") fs.show_region = true;
                    else if (f == "d1") fs.show_d1 = true;
                    else if (f == "d2") fs.show_d2 = true;
                    else if (f == "goryainov") fs.show_goryainov_disk = true;
                    else if (f == "labels") fs.gamma_labels = true;
                    else throw CLI::ValidationError("--show", "unknown flag " + f);
                }
            }
            open_out(file, out_path) << make_figure(fs);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
