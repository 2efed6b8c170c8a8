#include "fna/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fna {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << g17(values[i]);
    }
    out_ << '\n';
}

void CsvWriter::row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

namespace {

constexpr double kW = 860.0, kH = 600.0;
constexpr double kL = 90.0, kR = 200.0, kT = 50.0, kB = 70.0;

const char* kColors[] = {"#1f6fb4", "#d85c27", "#2f8f4e", "#b03a9c",
                         "#a58a28", "#4e4e4e", "#7a4ee0", "#c23b3b"};

std::string fmt_tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;
    double map(double v, double p0, double p1) const {
        double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
        t = std::clamp(t, 0.0, 1.0);
        return p0 + t * (p1 - p0);
    }
    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            const int a = static_cast<int>(std::ceil(lo)), b = static_cast<int>(std::floor(hi));
            const int step = std::max(1, (b - a) / 8);
            for (int e = a; e <= b; e += step) out.push_back(std::pow(10.0, e));
        } else {
            const double span = hi - lo;
            if (span <= 0.0) return {lo};
            const double raw = span / 6.0;
            const double mag = std::pow(10.0, std::floor(std::log10(raw)));
            double step = mag;
            for (double m : {1.0, 2.0, 5.0, 10.0})
                if (mag * m >= raw) { step = mag * m; break; }
            for (double v = std::ceil(lo / step) * step; v <= hi + 0.5 * step; v += step)
                out.push_back(v);
        }
        return out;
    }
};

Axis make_axis(double lo, double hi, bool log) {
    Axis ax;
    ax.log = log;
    if (log) {
        lo = std::max(lo, 1e-300);
        hi = std::max(hi, lo * 10.0);
        ax.lo = std::log10(lo);
        ax.hi = std::log10(hi);
        if (ax.hi - ax.lo < 1e-9) ax.hi = ax.lo + 1.0;
    } else {
        if (hi <= lo) hi = lo + 1.0;
        const double pad = 0.03 * (hi - lo);
        ax.lo = lo - pad;
        ax.hi = hi + pad;
    }
    return ax;
}

std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

} // namespace

void svg_line_plot(const std::string& path, const PlotOptions& opt,
                   const std::vector<Series>& series) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double x = s.x[i], y = s.y[i];
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (opt.logy && y <= 0.0) continue;
            if (opt.logx && x <= 0.0) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmin > xmax) { xmin = 0.0; xmax = 1.0; ymin = 0.0; ymax = 1.0; }
    const Axis ax = make_axis(xmin, xmax, opt.logx);
    const Axis ay = make_axis(ymin, ymax, opt.logy);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' viewBox='0 0 " << kW << " " << kH
        << "' font-family='sans-serif' font-size='13'>\n";
    out << "<rect width='" << kW << "' height='" << kH << "' fill='white'/>\n";
    out << "<text x='" << kW / 2 << "' y='24' text-anchor='middle' font-size='16'>"
        << esc(opt.title) << "</text>\n";

    const double x0 = kL, x1 = kW - kR, y0 = kH - kB, y1 = kT;
    out << "<rect x='" << x0 << "' y='" << y1 << "' width='" << x1 - x0 << "' height='"
        << y0 - y1 << "' fill='none' stroke='black'/>\n";
    for (double t : ax.ticks()) {
        const double px = ax.map(t, x0, x1);
        out << "<line x1='" << px << "' y1='" << y0 << "' x2='" << px << "' y2='" << y0 + 5
            << "' stroke='black'/>\n";
        out << "<text x='" << px << "' y='" << y0 + 20 << "' text-anchor='middle'>" << fmt_tick(t)
            << "</text>\n";
        out << "<line x1='" << px << "' y1='" << y0 << "' x2='" << px << "' y2='" << y1
            << "' stroke='#dddddd'/>\n";
    }
    for (double t : ay.ticks()) {
        const double py = ay.map(t, y0, y1);
        out << "<line x1='" << x0 - 5 << "' y1='" << py << "' x2='" << x0 << "' y2='" << py
            << "' stroke='black'/>\n";
        out << "<text x='" << x0 - 8 << "' y='" << py + 4 << "' text-anchor='end'>" << fmt_tick(t)
            << "</text>\n";
        out << "<line x1='" << x0 << "' y1='" << py << "' x2='" << x1 << "' y2='" << py
            << "' stroke='#dddddd'/>\n";
    }
    out << "<text x='" << (x0 + x1) / 2 << "' y='" << kH - 20 << "' text-anchor='middle'>"
        << esc(opt.xlabel) << "</text>\n";
    out << "<text x='20' y='" << (y0 + y1) / 2 << "' text-anchor='middle' transform='rotate(-90 20 "
        << (y0 + y1) / 2 << ")'>" << esc(opt.ylabel) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kColors[si % 8];
        std::string pts;
        bool pen_down = false;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double x = s.x[i], y = s.y[i];
            const bool ok = std::isfinite(x) && std::isfinite(y) && !(opt.logy && y <= 0.0) &&
                            !(opt.logx && x <= 0.0);
            if (!ok) { pen_down = false; continue; }
            pts += (pen_down ? "L" : "M");
            pts += g17(ax.map(x, x0, x1)) + " " + g17(ay.map(y, y0, y1)) + " ";
            pen_down = true;
        }
        out << "<path d='" << pts << "' fill='none' stroke='" << color
            << "' stroke-width='1.8'/>\n";
        const double ly = kT + 18.0 * double(si);
        out << "<line x1='" << x1 + 10 << "' y1='" << ly << "' x2='" << x1 + 34 << "' y2='" << ly
            << "' stroke='" << color << "' stroke-width='3'/>\n";
        out << "<text x='" << x1 + 40 << "' y='" << ly + 4 << "'>" << esc(s.name) << "</text>\n";
    }
    out << "</svg>\n";
}

void svg_heatmap(const std::string& path, const PlotOptions& opt, const std::vector<double>& xs,
                 const std::vector<double>& ys, const std::vector<std::vector<double>>& values,
                 bool log_color) {
    double vmin = 1e300, vmax = -1e300;
    for (const auto& row : values)
        for (double v : row) {
            if (!std::isfinite(v)) continue;
            if (log_color && v <= 0.0) continue;
            const double t = log_color ? std::log10(v) : v;
            vmin = std::min(vmin, t);
            vmax = std::max(vmax, t);
        }
    if (vmin > vmax) { vmin = 0.0; vmax = 1.0; }
    if (vmax - vmin < 1e-12) vmax = vmin + 1.0;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' viewBox='0 0 " << kW << " " << kH
        << "' font-family='sans-serif' font-size='13'>\n";
    out << "<rect width='" << kW << "' height='" << kH << "' fill='white'/>\n";
    out << "<text x='" << kW / 2 << "' y='24' text-anchor='middle' font-size='16'>"
        << esc(opt.title) << "</text>\n";
    const double x0 = kL, x1 = kW - kR, y0 = kH - kB, y1 = kT;
    const std::size_t nx = xs.size(), ny = ys.size();
    const double cw = (x1 - x0) / double(nx), ch = (y0 - y1) / double(ny);
    for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = 0; j < nx; ++j) {
            const double v = values[i][j];
            std::string fill = "black";
            if (std::isfinite(v) && !(log_color && v <= 0.0)) {
                const double t =
                    std::clamp(((log_color ? std::log10(v) : v) - vmin) / (vmax - vmin), 0.0, 1.0);
                // blue (low) to yellow (high)
                const int r = static_cast<int>(30 + 225 * t);
                const int g = static_cast<int>(60 + 180 * t);
                const int b = static_cast<int>(180 - 140 * t);
                char buf[16];
                std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
                fill = buf;
            }
            // ys increase upward
            const double px = x0 + cw * double(j);
            const double py = y0 - ch * double(i + 1);
            out << "<rect x='" << px << "' y='" << py << "' width='" << cw * 1.01 << "' height='"
                << ch * 1.01 << "' fill='" << fill << "'/>\n";
        }
    for (std::size_t j = 0; j < nx; ++j)
        out << "<text x='" << x0 + cw * (double(j) + 0.5) << "' y='" << y0 + 18
            << "' text-anchor='middle' font-size='10'>" << fmt_tick(xs[j]) << "</text>\n";
    for (std::size_t i = 0; i < ny; ++i)
        out << "<text x='" << x0 - 6 << "' y='" << y0 - ch * (double(i) + 0.5) + 4
            << "' text-anchor='end' font-size='10'>" << fmt_tick(ys[i]) << "</text>\n";
    out << "<text x='" << (x0 + x1) / 2 << "' y='" << kH - 20 << "' text-anchor='middle'>"
        << esc(opt.xlabel) << "</text>\n";
    out << "<text x='20' y='" << (y0 + y1) / 2 << "' text-anchor='middle' transform='rotate(-90 20 "
        << (y0 + y1) / 2 << ")'>" << esc(opt.ylabel) << "</text>\n";
    out << "<text x='" << x1 + 12 << "' y='" << y1 + 10 << "' font-size='11'>"
        << (log_color ? "log10 scale" : "linear scale") << ", range [" << fmt_tick(vmin) << ", "
        << fmt_tick(vmax) << "]; black = out of range</text>\n";
    out << "</svg>\n";
}

namespace {

std::string now_iso() {
    const auto t = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    return buf;
}

} // namespace

Manifest::Manifest(const std::string& subcommand) {
    j_["subcommand"] = subcommand;
    j_["version"] = "fna 1.0.0";
    j_["started"] = now_iso();
    j_["parameters"] = nlohmann::json::object();
    j_["outputs"] = nlohmann::json::array();
}

void Manifest::write(const std::string& dir) {
    j_["finished"] = now_iso();
    const std::string path = dir + "/manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j_.dump(2) << "\n";
}

} // namespace fna
