#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "vregion/conformal.hpp"
#include "vregion/region.hpp"

namespace vregion {

// ---------------------------------------------------------------------------
// Deterministic SVG output.  Fixed viewBox [-1.05, 1.05]^2, y axis flipped so
// the picture matches mathematical orientation.
// ---------------------------------------------------------------------------

class SvgCanvas {
  public:
    explicit SvgCanvas(int size_px = 640) : size_(size_px) {
        buf_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(size_) +
                "\" height=\"" + std::to_string(size_) +
                "\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n";
    }

    void circle(Complex center, double r, const std::string& stroke, double width = 0.006,
                const std::string& fill = "none") {
        char b[256];
        std::snprintf(b, sizeof b,
                      "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\" stroke=\"%s\" "
                      "stroke-width=\"%.4f\" fill=\"%s\"/>\n",
                      center.real(), -center.imag(), r, stroke.c_str(), width, fill.c_str());
        buf_ += b;
    }

    void polyline(const std::vector<Complex>& pts, const std::string& stroke,
                  double width = 0.006, bool close = false) {
        if (pts.empty()) return;
        buf_ += "<path d=\"";
        char b[64];
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::snprintf(b, sizeof b, "%c%.6f %.6f", i == 0 ? 'M' : 'L', pts[i].real(),
                          -pts[i].imag());
            buf_ += b;
        }
        if (close) buf_ += "Z";
        std::snprintf(b, sizeof b, "\" stroke-width=\"%.4f\"", width);
        buf_ += "\" stroke=\"" + stroke + b + " fill=\"none\"/>\n";
    }

    void label(Complex at, const std::string& text) {
        char b[256];
        std::snprintf(b, sizeof b,
                      "<text x=\"%.6f\" y=\"%.6f\" font-size=\"0.07\">%s</text>\n", at.real(),
                      -at.imag(), text.c_str());
        buf_ += b;
    }

    std::string finish() const { return buf_ + "</svg>\n"; }

  private:
    int size_;
    std::string buf_;
};

/// Closed boundary of the value region in disk coordinates: Gamma+ followed
/// by reversed Gamma-, mapped by the inverse strip map.
inline std::vector<Complex> region_disk_boundary(DiskPoint z0, double T, int n_per_branch) {
    const RegionSpec spec(strip_map(z0), T);
    const BoundaryArcSample plus = gamma_arc(spec, Branch::GammaPlus, n_per_branch);
    const BoundaryArcSample minus = gamma_arc(spec, Branch::GammaMinus, n_per_branch);
    std::vector<Complex> out;
    out.reserve(2 * n_per_branch);
    for (const Complex& z : plus.points) out.push_back(std::tanh(z / 2.0));
    for (auto it = minus.points.rbegin(); it != minus.points.rend(); ++it)
        out.push_back(std::tanh(*it / 2.0));
    return out;
}

/// Horodisk at sigma through the sublevel value k: center sigma/(1+k),
/// radius k/(1+k).
inline std::pair<Complex, double> horodisk_circle(Complex sigma, double k) {
    return {sigma / (1.0 + k), k / (1.0 + k)};
}

inline std::pair<Complex, double> julia_disk_d1(DiskPoint z0) {
    const double k = std::norm(z0.value - 1.0) / (1.0 - std::norm(z0.value));
    return horodisk_circle(1.0, k);
}

inline std::pair<Complex, double> julia_disk_d2(DiskPoint z0, double T) {
    const double k = std::exp(T) * std::norm(z0.value + 1.0) / (1.0 - std::norm(z0.value));
    return horodisk_circle(-1.0, k);
}

struct FigureSpec {
    Complex z0{0.0, 0.0};
    std::vector<double> T_list;
    bool show_region = true;
    bool show_d1 = false;
    bool show_d2 = false;
    bool show_goryainov_disk = false;
    bool gamma_labels = false;
    int size_px = 640;
    int n_per_branch = 256;
};

/// Value-region figure: unit circle, region boundaries for each T, and the
/// comparison disks.  Output is deterministic for fixed inputs.
inline std::string make_figure(const FigureSpec& fs) {
    if (fs.T_list.empty()) throw std::invalid_argument("make_figure: empty T list");
    const DiskPoint z0{fs.z0};
    SvgCanvas canvas(fs.size_px);
    canvas.circle(Complex(0.0, 0.0), 1.0, "black");
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (std::size_t i = 0; i < fs.T_list.size(); ++i) {
        const double T = fs.T_list[i];
        const char* color = palette[i % 4];
        if (fs.show_region)
            canvas.polyline(region_disk_boundary(z0, T, fs.n_per_branch), color, 0.006, true);
        if (fs.show_d2) {
            const auto [c, r] = julia_disk_d2(z0, T);
            canvas.circle(c, r, color, 0.003);
        }
        if (fs.show_goryainov_disk) {
            const double r = std::tanh(T / 2.0) / 2.0;
            canvas.circle(Complex(r, 0.0), r, "#7f7f7f", 0.003);
        }
        if (fs.gamma_labels) {
            const RegionSpec spec(strip_map(z0), T);
            const auto [om, op] = omega_pm(spec);
            canvas.label(std::tanh(0.5 * Complex(op)), "w+");
            canvas.label(std::tanh(0.5 * Complex(om)), "w-");
        }
    }
    if (fs.show_d1) {
        const auto [c, r] = julia_disk_d1(z0);
        canvas.circle(c, r, "#ff7f0e", 0.003);
    }
    return canvas.finish();
}

}  // namespace vregion
