#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vregion/conformal.hpp"

namespace vregion {

/// One value-region problem instance: base point zeta0 in the strip and
/// T = log of the angular derivative at -1.
struct RegionSpec {
    Complex zeta0;
    double T;
    RegionSpec(StripPoint z0, double T_) : zeta0(z0.value), T(T_) {
        if (!(T > 0.0)) throw std::domain_error("RegionSpec: T must be > 0");
    }
    double x1_0() const { return zeta0.real(); }
    double x2_0() const { return zeta0.imag(); }
};

/// Vertical extent of the region: a_pm = e^{-T/2} sin x2_0 +- (1 - e^{-T/2}).
inline std::pair<double, double> a_pm(const RegionSpec& spec) {
    const double e = std::exp(-spec.T / 2.0);
    const double s0 = std::sin(spec.x2_0());
    return {e * s0 - (1.0 - e), e * s0 + (1.0 - e)};
}

/// R(a,T) = log((1-a)/(1-a_plus)) * log((1+a)/(1+a_minus)); vanishes exactly
/// at a = a_pm and equals T^2/4 at a = sin x2_0.
inline double big_R(double a, const RegionSpec& spec) {
    const auto [am, ap] = a_pm(spec);
    if (a < am - 1e-14 || a > ap + 1e-14)
        throw std::domain_error("big_R: a outside [a_minus, a_plus]");
    // Clamp at the ends where one log factor crosses zero.
    if (std::abs(a - ap) < 1e-14 || std::abs(a - am) < 1e-14) return 0.0;
    const double r = std::log((1.0 - a) / (1.0 - ap)) * std::log((1.0 + a) / (1.0 + am));
    return std::max(r, 0.0);
}

enum class Branch { GammaPlus, GammaMinus };

inline const char* branch_name(Branch b) {
    return b == Branch::GammaPlus ? "gamma_plus" : "gamma_minus";
}

/// x1 coordinate of the boundary arc at a given sin x2.
inline double arc_x1(const RegionSpec& spec, Branch branch, double sin_x2) {
    const double root = std::sqrt(big_R(sin_x2, spec));
    return spec.x1_0() + spec.T / 2.0 + (branch == Branch::GammaPlus ? root : -root);
}

struct BoundaryArcSample {
    Branch branch;
    std::vector<Complex> points;
    std::vector<double> x2_grid;
};

/// Samples one boundary arc on a uniform grid in sin x2 between a_minus and
/// a_plus; both branches share the endpoints omega_pm.
inline BoundaryArcSample gamma_arc(const RegionSpec& spec, Branch branch, int n) {
    if (n < 2) throw std::invalid_argument("gamma_arc: n must be >= 2");
    const auto [am, ap] = a_pm(spec);
    BoundaryArcSample out{branch, {}, {}};
    out.points.reserve(n);
    out.x2_grid.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double s = am + (ap - am) * static_cast<double>(i) / (n - 1);
        const double x2 = std::asin(std::clamp(s, -1.0, 1.0));
        out.points.emplace_back(arc_x1(spec, branch, s), x2);
        out.x2_grid.push_back(x2);
    }
    return out;
}

/// Common endpoints of the two boundary arcs.
inline std::pair<Complex, Complex> omega_pm(const RegionSpec& spec) {
    const auto [am, ap] = a_pm(spec);
    const double x1 = spec.x1_0() + spec.T / 2.0;
    return {Complex(x1, std::asin(am)), Complex(x1, std::asin(ap))};
}

enum class MembershipVerdict { Interior, Boundary, Outside, ExcludedBasePoint };

inline const char* verdict_name(MembershipVerdict v) {
    switch (v) {
        case MembershipVerdict::Interior: return "interior";
        case MembershipVerdict::Boundary: return "boundary";
        case MembershipVerdict::Outside: return "outside";
        default: return "excluded_base_point";
    }
}

/// Membership and boundary-distance queries against one region instance.
/// Caches dense arc samples so repeated queries are cheap.
class Region {
  public:
    explicit Region(const RegionSpec& spec, int cache_resolution = 2049)
        : spec_(spec),
          plus_(gamma_arc(spec, Branch::GammaPlus, cache_resolution)),
          minus_(gamma_arc(spec, Branch::GammaMinus, cache_resolution)) {}

    const RegionSpec& spec() const { return spec_; }

    /// True membership test against the closed region (both defining
    /// inequalities, no tolerance).
    bool in_closed_region(Complex zeta) const {
        const auto [am, ap] = a_pm(spec_);
        const double s = std::sin(zeta.imag());
        if (s < am || s > ap) return false;
        const double dx = zeta.real() - spec_.x1_0() - spec_.T / 2.0;
        // Squared form avoids sqrt of tiny negatives near the arcs.
        return dx * dx <= big_R(s, spec_);
    }

    /// Distance from zeta to the region boundary (the union of the two arcs).
    double boundary_distance(Complex zeta) const {
        return std::min(branch_distance(plus_, Branch::GammaPlus, zeta),
                        branch_distance(minus_, Branch::GammaMinus, zeta));
    }

    /// Signed boundary distance: positive inside the closed region.
    double signed_distance(Complex zeta) const {
        const double d = boundary_distance(zeta);
        return in_closed_region(zeta) ? d : -d;
    }

    MembershipVerdict contains(Complex zeta, double tol = 1e-9) const {
        if (std::abs(zeta - spec_.zeta0) <= tol) return MembershipVerdict::ExcludedBasePoint;
        const double d = signed_distance(zeta);
        if (std::abs(d) <= tol) return MembershipVerdict::Boundary;
        return d > 0.0 ? MembershipVerdict::Interior : MembershipVerdict::Outside;
    }

  private:
    double branch_distance(const BoundaryArcSample& arc, Branch branch, Complex zeta) const {
        const auto [am, ap] = a_pm(spec_);
        const int n = static_cast<int>(arc.points.size());
        int best = 0;
        double best_d2 = std::norm(zeta - arc.points[0]);
        for (int i = 1; i < n; ++i) {
            const double d2 = std::norm(zeta - arc.points[i]);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = i;
            }
        }
        // Golden-section refinement in the sin x2 parameter around the
        // bracketing grid cells.
        const double ds = (ap - am) / (n - 1);
        double lo = am + ds * std::max(best - 1, 0);
        double hi = am + ds * std::min(best + 1, n - 1);
        auto dist = [&](double s) {
            s = std::clamp(s, am, ap);
            const Complex p(arc_x1(spec_, branch, s), std::asin(std::clamp(s, -1.0, 1.0)));
            return std::abs(zeta - p);
        };
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        double fc = dist(c), fd = dist(d);
        for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - gr * (hi - lo);
                fc = dist(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + gr * (hi - lo);
                fd = dist(d);
            }
        }
        return std::min({dist(lo), dist(hi), dist(0.5 * (lo + hi))});
    }

    RegionSpec spec_;
    BoundaryArcSample plus_;
    BoundaryArcSample minus_;
};

inline MembershipVerdict contains(const RegionSpec& spec, StripPoint zeta, double tol = 1e-9) {
    return Region(spec).contains(zeta.value, tol);
}

/// Disk-coordinate version: membership of z under the strip map.
inline MembershipVerdict region_in_disk(const RegionSpec& spec, DiskPoint z, double tol = 1e-9) {
    return Region(spec).contains(strip_map(z).value, tol);
}

/// L(a,b) = max{(1+a)/(1+b), (1-a)/(1-b)}; the two-fixed-point derivative
/// bound reads sqrt(f'(-1)f'(1)) >= L.
inline double corollary_bound(double a, double b) {
    if (!(std::abs(a) < 1.0 && std::abs(b) < 1.0))
        throw std::domain_error("corollary_bound: arguments must lie in (-1,1)");
    return std::max((1.0 + a) / (1.0 + b), (1.0 - a) / (1.0 - b));
}

/// Value region of f -> f(0) over the non-univalent class: the closed disk
/// with diameter [0, tanh(T/2)], the point 0 itself excluded.
inline bool goryainov_disk_contains(double T, DiskPoint w, double tol = 1e-9) {
    if (!(T > 0.0)) throw std::domain_error("goryainov_disk_contains: T must be > 0");
    const double r = std::tanh(T / 2.0) / 2.0;
    if (!(std::abs(w.value) > tol)) return false;
    return std::abs(w.value - r) <= r + tol;
}

/// CSV rows (branch, x2, x1, sin_x2) for one sampled arc.
inline void write_arc_csv(std::ostream& os, const BoundaryArcSample& arc) {
    os << "branch,x2,x1,sin_x2\n";
    for (std::size_t i = 0; i < arc.points.size(); ++i) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", branch_name(arc.branch),
                      arc.x2_grid[i], arc.points[i].real(), std::sin(arc.x2_grid[i]));
        os << buf;
    }
}

}  // namespace vregion
