#include "mrwbandit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace mrwb {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 180.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string px(double v) { return fmt("%.2f", v); }

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    bool log = false;
    double lo = 0.0;
    double hi = 1.0;

    double map(double v) const { return log ? std::log10(v) : v; }
    double unmap(double v) const { return log ? std::pow(10.0, v) : v; }
};

Axis make_axis(bool log, double lo, double hi) {
    Axis a{log, lo, hi};
    if (!(lo < hi)) {
        const double pad = (lo == 0.0 || log) ? 1.0 : std::abs(lo) * 0.1;
        a.lo = lo - pad;
        a.hi = hi + pad;
    } else {
        const double pad = (hi - lo) * 0.05;
        a.lo = lo - pad;
        a.hi = hi + pad;
    }
    return a;
}

std::string tick_label(double v) {
    if (v != 0.0 && (std::abs(v) >= 1e5 || std::abs(v) < 1e-3)) return fmt("%.2g", v);
    return fmt("%.4g", v);
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& s : spec.series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("series x/y length mismatch");
        if (!s.yerr.empty() && s.yerr.size() != s.y.size()) throw std::invalid_argument("series yerr length mismatch");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if ((spec.log_x && s.x[i] <= 0.0) || (spec.log_y && s.y[i] <= 0.0)) continue;
            const double err = s.yerr.empty() ? 0.0 : s.yerr[i];
            const double x = spec.log_x ? std::log10(s.x[i]) : s.x[i];
            double top = s.y[i] + err;
            double bottom = s.y[i] - err;
            if (spec.log_y && bottom <= 0.0) bottom = s.y[i];
            top = spec.log_y ? std::log10(top) : top;
            bottom = spec.log_y ? std::log10(bottom) : bottom;
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, bottom);
            yhi = std::max(yhi, top);
        }
    }
    if (!std::isfinite(xlo)) {
        xlo = ylo = 0.0;
        xhi = yhi = 1.0;
    }
    const Axis ax = make_axis(spec.log_x, xlo, xhi);
    const Axis ay = make_axis(spec.log_y, ylo, yhi);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto sx = [&](double v) { return kLeft + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * plot_w; };
    const auto sy = [&](double v) { return kTop + plot_h - (ay.map(v) - ay.lo) / (ay.hi - ay.lo) * plot_h; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) + "\" height=\"" + px(kHeight) +
           "\" viewBox=\"0 0 " + px(kWidth) + " " + px(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + px(kLeft + plot_w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(spec.title) + "</text>\n";

    // Frame and ticks.
    out += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(plot_w) + "\" height=\"" +
           px(plot_h) + "\" fill=\"none\" stroke=\"#333\"/>\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = ax.lo + (ax.hi - ax.lo) * i / kTicks;
        const double x = kLeft + plot_w * i / kTicks;
        out += "<line x1=\"" + px(x) + "\" y1=\"" + px(kTop + plot_h) + "\" x2=\"" + px(x) + "\" y2=\"" +
               px(kTop + plot_h + 5) + "\" stroke=\"#333\"/>\n";
        out += "<text x=\"" + px(x) + "\" y=\"" + px(kTop + plot_h + 18) + "\" text-anchor=\"middle\">" +
               tick_label(ax.unmap(fx)) + "</text>\n";
        const double fy = ay.lo + (ay.hi - ay.lo) * i / kTicks;
        const double y = kTop + plot_h - plot_h * i / kTicks;
        out += "<line x1=\"" + px(kLeft - 5) + "\" y1=\"" + px(y) + "\" x2=\"" + px(kLeft) + "\" y2=\"" + px(y) +
               "\" stroke=\"#333\"/>\n";
        out += "<text x=\"" + px(kLeft - 8) + "\" y=\"" + px(y + 4) + "\" text-anchor=\"end\">" +
               tick_label(ay.unmap(fy)) + "</text>\n";
    }
    out += "<text x=\"" + px(kLeft + plot_w / 2) + "\" y=\"" + px(kHeight - 15) + "\" text-anchor=\"middle\">" +
           escape(spec.x_label) + (spec.log_x ? " (log)" : "") + "</text>\n";
    out += "<text transform=\"translate(18," + px(kTop + plot_h / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
           escape(spec.y_label) + (spec.log_y ? " (log)" : "") + "</text>\n";

    for (std::size_t k = 0; k < spec.series.size(); ++k) {
        const auto& s = spec.series[k];
        const std::string color = kPalette[k % std::size(kPalette)];
        out += "<g class=\"series\" data-label=\"" + escape(s.label) + "\">\n";
        std::string points;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if ((spec.log_x && s.x[i] <= 0.0) || (spec.log_y && s.y[i] <= 0.0)) continue;
            points += px(sx(s.x[i])) + "," + px(sy(s.y[i])) + " ";
        }
        out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        for (std::size_t i = 0; spec.markers && i < s.x.size(); ++i) {
            if ((spec.log_x && s.x[i] <= 0.0) || (spec.log_y && s.y[i] <= 0.0)) continue;
            const double cx = sx(s.x[i]);
            out += "<circle cx=\"" + px(cx) + "\" cy=\"" + px(sy(s.y[i])) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
            if (!s.yerr.empty() && s.yerr[i] > 0.0) {
                double lo = s.y[i] - s.yerr[i];
                if (spec.log_y && lo <= 0.0) lo = s.y[i];
                out += "<line class=\"errorbar\" x1=\"" + px(cx) + "\" y1=\"" + px(sy(lo)) + "\" x2=\"" + px(cx) +
                       "\" y2=\"" + px(sy(s.y[i] + s.yerr[i])) + "\" stroke=\"" + color + "\"/>\n";
            }
        }
        out += "</g>\n";

        const double ly = kTop + 10 + 34.0 * static_cast<double>(k);
        const double lx = kLeft + plot_w + 12;
        out += "<line x1=\"" + px(lx) + "\" y1=\"" + px(ly) + "\" x2=\"" + px(lx + 18) + "\" y2=\"" + px(ly) +
               "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + px(lx + 24) + "\" y=\"" + px(ly + 4) + "\">" + escape(s.label) + "</text>\n";
        if (s.slope) {
            const std::string slope = fmt("%.3f", *s.slope);
            out += "<text class=\"slope\" data-slope=\"" + slope + "\" x=\"" + px(lx + 24) + "\" y=\"" +
                   px(ly + 18) + "\">slope " + slope + "</text>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace mrwb
