#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include <math.h>  // global isnan, needed by the boost interpolator header

#include <boost/math/interpolators/pchip.hpp>

#include "vregion/conformal.hpp"
#include "vregion/loewner.hpp"
#include "vregion/ode.hpp"

namespace vregion {

// ---------------------------------------------------------------------------
// Single-atom (slit) evolutions and the disk -> half-plane -> chordal
// transform chain.
// ---------------------------------------------------------------------------

/// Continuous nonvanishing driving lambda : [0,T] -> R \ {0}; the circle
/// position of the atom is theta with lambda = i(1+e^{i theta})/(1-e^{i theta}).
struct DrivingFunction {
    std::function<double(double)> lambda;
    double T;

    double theta(double t) const { return std::arg(lambda_to_kappa(lambda(t))); }
};

/// Disk field of a unit point mass at e^{i theta}:
/// (1/4)(1-w)^2 (1+w)(1 - e^{i theta})/(1 + e^{i theta} w).
inline Complex single_atom_disk_rhs(Complex w, double theta) {
    if (theta == 0.0) throw std::domain_error("single_atom_disk_rhs: theta = 0 excluded");
    const Complex k = std::exp(Complex(0.0, theta));
    const Complex d = 1.0 - w;
    return 0.25 * d * d * (1.0 + w) * (1.0 - k) / (1.0 + k * w);
}

/// Half-plane form of the same field: d omega/dt = omega/(1 - lambda omega).
inline Complex halfplane_rhs(Complex omega, double lambda) {
    const Complex den = 1.0 - lambda * omega;
    if (den == Complex(0.0, 0.0)) throw std::domain_error("halfplane_rhs: pole 1 = lambda*omega");
    return omega / den;
}

/// Standard chordal field d w_hat/d tau = 2/(xi - w_hat).
inline Complex chordal_rhs(Complex w_hat, double xi) {
    const Complex den = xi - w_hat;
    if (den == Complex(0.0, 0.0))
        throw std::domain_error("chordal_rhs: trajectory hit the driving point");
    return 2.0 / den;
}

namespace detail {

// 7-point Gauss-Legendre panel quadrature.
inline constexpr double gl7_x[7] = {-0.9491079123427585, -0.7415311855993945,
                                    -0.4058451513773972, 0.0,
                                    0.4058451513773972,  0.7415311855993945,
                                    0.9491079123427585};
inline constexpr double gl7_w[7] = {0.1294849661688697, 0.2797053914892766,
                                    0.3818300505051189, 0.4179591836734694,
                                    0.3818300505051189, 0.2797053914892766,
                                    0.1294849661688697};

template <class F>
double gl7_panel(F&& f, double a, double b) {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < 7; ++i) s += gl7_w[i] * f(c + h * gl7_x[i]);
    return h * s;
}

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

}  // namespace detail

/// Reparameterization data of the chordal chain: the shift
/// omega_hat = omega + int 1/lambda, the driving xi = 1/lambda + int 1/lambda,
/// and the chordal time tau = v(t) = (1/2) int 1/lambda^2.
class ChordalFrame {
  public:
    ChordalFrame(const DrivingFunction& d, int n_panels = 1024) : driving_(d) {
        if (n_panels < 8) throw std::invalid_argument("ChordalFrame: too few panels");
        std::vector<double> t(n_panels + 1), ish(n_panels + 1), v(n_panels + 1);
        t[0] = ish[0] = v[0] = 0.0;
        const double sign0 = d.lambda(0.0);
        for (int i = 0; i < n_panels; ++i) {
            const double a = d.T * i / n_panels, b = d.T * (i + 1) / n_panels;
            auto check = [&](double s) {
                const double l = d.lambda(s);
                if (l * sign0 <= 0.0)
                    throw std::domain_error("ChordalFrame: driving vanishes or changes sign");
                return l;
            };
            t[i + 1] = b;
            ish[i + 1] = ish[i] + detail::gl7_panel([&](double s) { return 1.0 / check(s); }, a, b);
            v[i + 1] =
                v[i] + detail::gl7_panel([&](double s) { const double l = check(s);
                                                         return 0.5 / (l * l); }, a, b);
        }
        C_total_ = ish.back();
        v_total_ = v.back();
        std::vector<double> tc = t, vc = v;
        ish_of_t_ = std::make_shared<detail::Pchip>(std::move(tc), std::move(ish));
        tc = t;
        v_of_t_ = std::make_shared<detail::Pchip>(std::move(tc), std::move(vc));
        t_of_v_ = std::make_shared<detail::Pchip>(std::move(v), std::move(t));
    }

    double omega_shift(double t) const { return (*ish_of_t_)(t); }
    double xi(double t) const { return 1.0 / driving_.lambda(t) + omega_shift(t); }
    double tau_of_t(double t) const { return (*v_of_t_)(t); }
    double t_of_tau(double tau) const { return (*t_of_v_)(tau); }
    double C_total() const { return C_total_; }
    double tau_total() const { return v_total_; }
    const DrivingFunction& driving() const { return driving_; }

  private:
    DrivingFunction driving_;
    double C_total_ = 0.0, v_total_ = 0.0;
    std::shared_ptr<detail::Pchip> ish_of_t_, v_of_t_, t_of_v_;
};

inline ChordalFrame build_chordal_frame(const DrivingFunction& d, int n_panels = 1024) {
    return ChordalFrame(d, n_panels);
}

/// Integrates the single-atom disk equation with time-varying atom position.
inline Complex integrate_single_atom_disk(DiskPoint z, const DrivingFunction& d,
                                          const SolverConfig& cfg) {
    std::array<double, 2> y{z.value.real(), z.value.imag()};
    auto f = [&](double t, const std::array<double, 2>& s, std::array<double, 2>& dy) {
        const Complex v = single_atom_disk_rhs(Complex(s[0], s[1]), d.theta(t));
        dy[0] = v.real();
        dy[1] = v.imag();
    };
    integrate_ode<2>(f, y, 0.0, d.T, cfg);
    return {y[0], y[1]};
}

/// Integrates the chordal equation in tau-time and undoes the shift:
/// returns w(T) = H^{-1}(w_hat(v(T)) - C).
inline Complex integrate_via_chordal(DiskPoint z, const ChordalFrame& frame,
                                     const SolverConfig& cfg) {
    const Complex w0 = cayley(z).value;
    std::array<double, 2> y{w0.real(), w0.imag()};
    auto f = [&](double tau, const std::array<double, 2>& s, std::array<double, 2>& dy) {
        const Complex v = chordal_rhs(Complex(s[0], s[1]), frame.xi(frame.t_of_tau(tau)));
        dy[0] = v.real();
        dy[1] = v.imag();
    };
    integrate_ode<2>(f, y, 0.0, frame.tau_total(), cfg);
    return cayley_inv_closure(Complex(y[0], y[1]) - frame.C_total());
}

// ---------------------------------------------------------------------------
// Circular-arc driving family and the explicit slit geometry.
// ---------------------------------------------------------------------------

/// Parameters of the driving family whose slit is a circular arc (or straight
/// segment) orthogonal to the unit circle:
/// lambda(t) = C1 e^{-t/2} (C2 e^{t/2} + sqrt(C2^2 (e^t - 1) + 1))^3.
struct CircularArcParams {
    double C1;
    double C2;

    double lambda(double t) const {
        const double E = std::exp(t / 2.0);
        const double rad = C2 * C2 * (E * E - 1.0) + 1.0;
        if (rad < 0.0) throw std::domain_error("CircularArcParams: negative radicand");
        return C1 * std::exp(-t / 2.0) * std::pow(C2 * E + std::sqrt(rad), 3);
    }
    /// lambda'(t)/lambda(t), closed form.
    double log_lambda_deriv(double t) const {
        const double E = std::exp(t / 2.0);
        const double W = std::sqrt(C2 * C2 * (E * E - 1.0) + 1.0);
        return -0.5 + 3.0 * (C2 * E / 2.0 + C2 * C2 * E * E / (2.0 * W)) / (C2 * E + W);
    }
    DrivingFunction driving(double T) const {
        return {[p = *this](double t) { return p.lambda(t); }, T};
    }
};

/// Numerical solution of the auxiliary system
///   da/dt = a^3/b^2,  db/dt = -3a + b + 3a^2/b,
/// with the side conditions lambda'/lambda = 1 - 3a/b and b*lambda > 0,
/// plus the accumulated slit-length integral Q(t) = 2 int_0^t b^{-2}.
struct AbSolution {
    CircularArcParams params;
    double T = 0.0;
    std::vector<double> t, a, b;
    double Q_T = 0.0;
    double side_condition_residual = 0.0;  // max |lambda'/lambda - (1 - 3a/b)|

    double a_at(double s) const { return (*a_interp)(s); }
    double b_at(double s) const { return (*b_interp)(s); }
    std::shared_ptr<detail::Pchip> a_interp, b_interp;
};

/// Default scale normalization: |a(0)| = 1 with the sign that makes
/// b(0) lambda(0) > 0.  The scale is immaterial for the slit geometry.
inline double default_a0(const CircularArcParams& p) {
    const double s = p.C1 * (p.C2 + 1.0);
    if (s == 0.0) throw std::domain_error("default_a0: lambda(0) = 0");
    return s > 0.0 ? 1.0 : -1.0;
}

inline AbSolution integrate_ab(const CircularArcParams& p, double a0, double T,
                               const SolverConfig& cfg, int n_samples = 512) {
    const double k0 = (1.0 - p.log_lambda_deriv(0.0)) / 3.0;
    if (!(k0 > 0.0))
        throw std::domain_error("integrate_ab: side conditions unsatisfiable at t = 0");
    AbSolution out;
    out.params = p;
    out.T = T;
    std::array<double, 3> y{a0, a0 / k0, 0.0};
    if (!(y[1] * p.lambda(0.0) > 0.0))
        throw std::domain_error("integrate_ab: b(0) lambda(0) <= 0");
    auto record = [&](double t) {
        out.t.push_back(t);
        out.a.push_back(y[0]);
        out.b.push_back(y[1]);
        const double resid = std::abs(p.log_lambda_deriv(t) - (1.0 - 3.0 * y[0] / y[1]));
        out.side_condition_residual = std::max(out.side_condition_residual, resid);
        if (!(y[1] * p.lambda(t) > 0.0))
            throw OdeFailure("integrate_ab: b(t) lambda(t) changed sign");
    };
    record(0.0);
    auto f = [](double, const std::array<double, 3>& s, std::array<double, 3>& d) {
        if (s[1] == 0.0) throw OdeFailure("integrate_ab: b reached 0");
        d[0] = s[0] * s[0] * s[0] / (s[1] * s[1]);
        d[1] = -3.0 * s[0] + s[1] + 3.0 * s[0] * s[0] / s[1];
        d[2] = 2.0 / (s[1] * s[1]);
    };
    for (int k = 1; k <= n_samples; ++k) {
        const double t = T * static_cast<double>(k) / n_samples;
        integrate_ode<3>(f, y, out.t.back(), t, cfg);
        record(t);
    }
    out.Q_T = y[2];
    std::vector<double> tc = out.t, ac = out.a, bc = out.b;
    out.a_interp = std::make_shared<detail::Pchip>(std::move(tc), std::move(ac));
    tc = out.t;
    out.b_interp = std::make_shared<detail::Pchip>(std::move(tc), std::move(bc));
    return out;
}

/// Moebius frame H_t(w) = (lambda H(w) - 1)/(a (lambda H(w) - 1) + b) with
/// the coefficients of the auxiliary system.
inline Complex moebius_frame(const AbSolution& ab, double t, DiskPoint w) {
    const double lam = ab.params.lambda(t);
    const Complex y = lam * cayley(w).value - 1.0;
    const Complex den = ab.a_at(t) * y + ab.b_at(t);
    if (den == Complex(0.0, 0.0)) throw std::domain_error("moebius_frame: pole");
    return y / den;
}

/// Inverse frame on the closure: solves H_t(w) = s.
inline Complex moebius_frame_inv(const AbSolution& ab, double t, Complex s) {
    const double lam = ab.params.lambda(t);
    const Complex y = s * ab.b_at(t) / (1.0 - ab.a_at(t) * s);
    return cayley_inv_closure((y + 1.0) / lam);
}

struct SlitGeometry {
    double Q_T = 0.0;
    Complex tip;                          // free end of the slit in the disk
    std::vector<Complex> disk_arc_samples;  // preimage of [0, i sqrt(Q_T)], base first
};

/// Explicit slit of the circular family: gamma = H_T^{-1}([0, i sqrt(Q_T)]).
inline SlitGeometry slit_geometry(const AbSolution& ab, int n_samples = 50) {
    SlitGeometry g;
    g.Q_T = ab.Q_T;
    const double top = std::sqrt(ab.Q_T);
    g.disk_arc_samples.reserve(n_samples);
    for (int j = 0; j < n_samples; ++j) {
        const Complex s(0.0, top * static_cast<double>(j) / (n_samples - 1));
        g.disk_arc_samples.push_back(moebius_frame_inv(ab, ab.T, s));
    }
    g.tip = g.disk_arc_samples.back();
    return g;
}

/// Circle through three points (circumcenter formula).
inline std::pair<Complex, double> circle_through(Complex p, Complex q, Complex r) {
    const double ax = p.real(), ay = p.imag(), bx = q.real(), by = q.imag(), cx = r.real(),
                 cy = r.imag();
    const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if (d == 0.0) throw std::domain_error("circle_through: collinear points");
    const double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                       (cx * cx + cy * cy) * (ay - by)) /
                      d;
    const double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                       (cx * cx + cy * cy) * (bx - ax)) /
                      d;
    const Complex c(ux, uy);
    return {c, std::abs(p - c)};
}

namespace detail {

inline double line_residual(const std::vector<Complex>& samples) {
    const Complex d = samples.back() - samples.front();
    const Complex n = Complex(-d.imag(), d.real()) / std::abs(d);
    double worst = 0.0;
    for (const Complex& s : samples)
        worst = std::max(worst, std::abs(((s - samples.front()) * std::conj(n)).real()));
    return worst;
}

}  // namespace detail

/// Max deviation of the samples from the circle through three well-separated
/// samples (or from a straight line in the degenerate radial case); near zero
/// for a genuinely circular slit.
inline double circularity_residual(const std::vector<Complex>& samples) {
    if (samples.size() < 4) throw std::invalid_argument("circularity_residual: too few samples");
    const double line = detail::line_residual(samples);
    if (line < 1e-9) return line;
    const auto [c, r] =
        circle_through(samples.front(), samples[samples.size() / 2], samples.back());
    double worst = 0.0;
    for (const Complex& s : samples) worst = std::max(worst, std::abs(std::abs(s - c) - r));
    return std::min(worst, line);
}

/// Inversive-distance orthogonality defect against the unit circle: 0 iff
/// the circle (or line) through the samples meets the unit circle at right
/// angles.  A line is orthogonal iff it passes through the origin.
inline double orthogonality_residual(const std::vector<Complex>& samples) {
    if (detail::line_residual(samples) < 1e-9) {
        const Complex d = samples.back() - samples.front();
        const Complex n = Complex(-d.imag(), d.real()) / std::abs(d);
        return std::abs((samples.front() * std::conj(n)).real());
    }
    const auto [c, r] =
        circle_through(samples.front(), samples[samples.size() / 2], samples.back());
    return std::abs(std::norm(c) - r * r - 1.0) / (2.0 * r);
}

}  // namespace vregion
