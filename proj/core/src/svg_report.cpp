#include "synkit/svg_report.hpp"

#include "synkit/errors.hpp"
#include "synkit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace synkit {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

constexpr int kWidth = 1000;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 30;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

}  // namespace

std::string render_target_estimate_svg(const Eigen::VectorXd& targets,
                                       const Eigen::VectorXd& estimates, int n,
                                       std::uint64_t seed) {
    if (targets.size() != estimates.size()) {
        throw ShapeError("svg report: target and estimate lengths differ");
    }
    if (n < 1) throw ArgumentError("svg report: need at least 1 sample (empty plot)");
    if (n > targets.size()) {
        throw ArgumentError("svg report: " + std::to_string(n) + " samples requested but only " +
                            std::to_string(targets.size()) + " rows available");
    }

    Rng rng(seed);
    auto picked = rng.sample_without_replacement(static_cast<std::size_t>(targets.size()),
                                                 static_cast<std::size_t>(n));
    std::sort(picked.begin(), picked.end());

    double lo = targets[static_cast<Eigen::Index>(picked[0])];
    double hi = lo;
    for (std::size_t i : picked) {
        lo = std::min({lo, targets[static_cast<Eigen::Index>(i)],
                       estimates[static_cast<Eigen::Index>(i)]});
        hi = std::max({hi, targets[static_cast<Eigen::Index>(i)],
                       estimates[static_cast<Eigen::Index>(i)]});
    }
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    }
    double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto x_of = [&](int i) {
        double t = n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
        return kMarginLeft + t * plot_w;
    };
    auto y_of = [&](double v) { return kMarginTop + (hi - v) / (hi - lo) * plot_h; };

    auto polyline = [&](const Eigen::VectorXd& series, const char* color) {
        std::ostringstream pts;
        for (int i = 0; i < n; ++i) {
            if (i > 0) pts << ' ';
            pts << fmt(x_of(i)) << ','
                << fmt(y_of(series[static_cast<Eigen::Index>(picked[static_cast<std::size_t>(i)])]));
        }
        return "  <polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts.str() + "\"/>\n";
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

    // Axes
    svg << "  <line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << (kHeight - kMarginBottom) << "\" stroke=\"black\"/>\n";
    svg << "  <line x1=\"" << kMarginLeft << "\" y1=\"" << (kHeight - kMarginBottom) << "\" x2=\""
        << (kWidth - kMarginRight) << "\" y2=\"" << (kHeight - kMarginBottom)
        << "\" stroke=\"black\"/>\n";

    // y ticks
    for (int t = 0; t <= 4; ++t) {
        double v = lo + (hi - lo) * static_cast<double>(t) / 4.0;
        double y = y_of(v);
        svg << "  <line x1=\"" << (kMarginLeft - 4) << "\" y1=\"" << fmt(y) << "\" x2=\""
            << kMarginLeft << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
        svg << "  <text x=\"" << (kMarginLeft - 8) << "\" y=\"" << fmt(y + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    }
    // x ticks at 1, n/2, n
    for (int i : {0, (n - 1) / 2, n - 1}) {
        double x = x_of(i);
        svg << "  <line x1=\"" << fmt(x) << "\" y1=\"" << (kHeight - kMarginBottom) << "\" x2=\""
            << fmt(x) << "\" y2=\"" << (kHeight - kMarginBottom + 4) << "\" stroke=\"black\"/>\n";
        svg << "  <text x=\"" << fmt(x) << "\" y=\"" << (kHeight - kMarginBottom + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\">" << (i + 1) << "</text>\n";
    }

    svg << polyline(targets, "#1f77b4");
    svg << polyline(estimates, "#d62728");

    // Legend
    int lx = kWidth - kMarginRight - 160;
    int ly = kMarginTop + 8;
    svg << "  <rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"150\" height=\"44\" fill=\"white\""
        << " stroke=\"black\" stroke-width=\"0.5\"/>\n";
    svg << "  <line x1=\"" << (lx + 10) << "\" y1=\"" << (ly + 14) << "\" x2=\"" << (lx + 40)
        << "\" y2=\"" << (ly + 14) << "\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
    svg << "  <text x=\"" << (lx + 48) << "\" y=\"" << (ly + 18)
        << "\" font-size=\"12\">target</text>\n";
    svg << "  <line x1=\"" << (lx + 10) << "\" y1=\"" << (ly + 32) << "\" x2=\"" << (lx + 40)
        << "\" y2=\"" << (ly + 32) << "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
    svg << "  <text x=\"" << (lx + 48) << "\" y=\"" << (ly + 36)
        << "\" font-size=\"12\">estimate</text>\n";

    // Axis labels
    svg << "  <text x=\"" << (kMarginLeft + plot_w / 2) << "\" y=\"" << (kHeight - 12)
        << "\" font-size=\"13\" text-anchor=\"middle\">sample</text>\n";
    svg << "  <text x=\"18\" y=\"" << (kMarginTop + plot_h / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << (kMarginTop + plot_h / 2) << ")\">synergy score</text>\n";

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace synkit
