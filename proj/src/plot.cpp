#include "snngb/harness.hpp"

#include "snngb/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace snngb {

PlotAxis parse_plot_axis(std::string_view name) {
    if (name == "L") return PlotAxis::L;
    if (name == "Nw" || name == "N_w") return PlotAxis::Nw;
    if (name == "T") return PlotAxis::T;
    throw InvalidArgument("axis must be L, Nw or T");
}

std::vector<PlotSeries> plot_series(const std::vector<RunRecord>& rows, PlotAxis axis) {
    // key: (co-variable a, co-variable b, x) -> epsilons
    using Key = std::tuple<double, double>;
    std::map<Key, std::map<double, std::vector<double>>> groups;
    for (const auto& r : rows) {
        if (r.status != "ok" || !std::isfinite(r.epsilon)) continue;
        const double T = r.T, w = static_cast<double>(r.N_w), l = static_cast<double>(r.L);
        switch (axis) {
        case PlotAxis::L: groups[{T, w}][std::log2(l)].push_back(r.epsilon); break;
        case PlotAxis::Nw: groups[{T, l}][w].push_back(r.epsilon); break;
        case PlotAxis::T: groups[{w, l}][T].push_back(r.epsilon); break;
        }
    }
    if (groups.empty()) throw InvalidArgument("plot: no usable rows in the selection");

    std::vector<PlotSeries> out;
    for (const auto& [key, xs] : groups) {
        PlotSeries s;
        char buf[96];
        const auto [a, b] = key;
        switch (axis) {
        case PlotAxis::L: std::snprintf(buf, sizeof buf, "T=%g Nw=%g", a, b); break;
        case PlotAxis::Nw: std::snprintf(buf, sizeof buf, "T=%g L=%g", a, b); break;
        case PlotAxis::T: std::snprintf(buf, sizeof buf, "Nw=%g L=%g", a, b); break;
        }
        s.label = buf;
        for (const auto& [x, eps] : xs) {
            PlotPoint p;
            p.x = x;
            p.count = eps.size();
            double sum = 0.0;
            for (double e : eps) sum += e;
            p.mean = sum / static_cast<double>(eps.size());
            if (eps.size() > 1) {
                double ss = 0.0;
                for (double e : eps) ss += (e - p.mean) * (e - p.mean);
                p.stddev = std::sqrt(ss / static_cast<double>(eps.size() - 1));
            }
            s.points.push_back(p);
        }
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace

std::string render_svg(const std::vector<PlotSeries>& series, PlotAxis axis) {
    if (series.empty()) throw InvalidArgument("plot: empty selection");
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series)
        for (const auto& p : s.points) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.mean - p.stddev);
            y1 = std::max(y1, p.mean + p.stddev);
        }
    if (x1 - x0 < 1e-12) { x0 -= 1; x1 += 1; }
    if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double W = 640, H = 420, left = 70, right = 170, top = 30, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    const char* xlabel = axis == PlotAxis::L ? "log2 L" : axis == PlotAxis::Nw ? "N_w" : "T";
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    o << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(left + pw) << "\" y2=\""
      << num(top + ph) << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\""
      << num(top + ph) << "\" stroke=\"black\"/>\n";

    // x ticks at the distinct data positions
    std::vector<double> xs;
    for (const auto& s : series)
        for (const auto& p : s.points) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (double x : xs) {
        o << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(sx(x)) << "\" y2=\""
          << num(top + ph + 4) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(top + ph + 16) << "\" text-anchor=\"middle\">" << tick(x)
          << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double y = y0 + (y1 - y0) * i / 4.0;
        o << "<line x1=\"" << num(left - 4) << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << num(left) << "\" y2=\""
          << num(sy(y)) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy(y) + 4) << "\" text-anchor=\"end\">" << tick(y)
          << "</text>\n";
    }
    o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(H - 12) << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
    o << "<text x=\"16\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(top + ph / 2) << ")\">epsilon (test - train)</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* c = palette[i % (sizeof palette / sizeof palette[0])];
        o << "<g stroke=\"" << c << "\" fill=\"" << c << "\">\n";
        if (s.points.size() > 1) {
            o << "<polyline fill=\"none\" points=\"";
            for (std::size_t k = 0; k < s.points.size(); ++k)
                o << (k ? " " : "") << num(sx(s.points[k].x)) << ',' << num(sy(s.points[k].mean));
            o << "\"/>\n";
        }
        for (const auto& p : s.points) {
            const double x = sx(p.x);
            o << "<line x1=\"" << num(x) << "\" y1=\"" << num(sy(p.mean - p.stddev)) << "\" x2=\"" << num(x)
              << "\" y2=\"" << num(sy(p.mean + p.stddev)) << "\"/>\n";
            o << "<circle cx=\"" << num(x) << "\" cy=\"" << num(sy(p.mean)) << "\" r=\"3\"/>\n";
        }
        const double ly = top + 14.0 * static_cast<double>(i);
        o << "<rect x=\"" << num(left + pw + 12) << "\" y=\"" << num(ly) << "\" width=\"10\" height=\"10\"/>\n";
        o << "<text x=\"" << num(left + pw + 26) << "\" y=\"" << num(ly + 9) << "\" stroke=\"none\" fill=\"black\">"
          << s.label << "</text>\n";
        o << "</g>\n";
    }
    o << "</g>\n</svg>\n";
    return o.str();
}

void plot_csv(const std::string& csv_path, PlotAxis axis, const std::string& svg_path) {
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open '" + csv_path + "'");
    const auto rows = read_runs_csv(in);
    const std::string svg = render_svg(plot_series(rows, axis), axis);
    std::ofstream out(svg_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + svg_path + "'");
    out << svg;
    if (!out) throw IoError("write failed for '" + svg_path + "'");
}

} // namespace snngb
