#include "chart.hpp"

#include "kellybet/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

namespace kellybet::cli {

namespace {

constexpr double kWidth = 960, kHeight = 480;
constexpr double kLeft = 70, kRight = 180, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

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

}  // namespace

void write_equity_svg(std::ostream& out, const std::vector<NamedCurve>& curves, const std::string& title) {
    Timestamp t0 = std::numeric_limits<Timestamp>::max(), t1 = std::numeric_limits<Timestamp>::min();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& c : curves)
        for (const auto& p : c.curve.points) {
            t0 = std::min(t0, p.timestamp);
            t1 = std::max(t1, p.timestamp);
            lo = std::min(lo, p.bankroll);
            hi = std::max(hi, p.bankroll);
        }
    const bool any = t0 <= t1;
    const bool log_scale = any && lo > 0;
    auto ty = [&](double v) { return log_scale ? std::log10(v) : v; };
    double y0 = any ? ty(lo) : 0.0, y1 = any ? ty(hi) : 1.0;
    if (y1 - y0 < 1e-12) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    if (!any || t1 == t0) t1 = t0 + 1;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](Timestamp t) { return kLeft + pw * static_cast<double>(t - t0) / static_cast<double>(t1 - t0); };
    auto sy = [&](double v) { return kTop + ph * (1.0 - (ty(v) - y0) / (y1 - y0)); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"15\">" << escape(title) << "</text>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444\"/>\n";

    for (int k = 0; k <= 4; ++k) {
        const double yv = y0 + (y1 - y0) * k / 4.0;
        const double v = log_scale ? std::pow(10.0, yv) : yv;
        const double y = kTop + ph * (1.0 - k / 4.0);
        out << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << num(y) << "\" y2=\"" << num(y)
            << "\" stroke=\"#ddd\"/>\n";
        char label[32];
        std::snprintf(label, sizeof(label), "%.4g", v);
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << label << "</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const Timestamp t = t0 + (t1 - t0) * k / 4;
        out << "<text x=\"" << num(sx(t)) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
            << format_iso8601(t).substr(0, 10) << "</text>\n";
    }
    out << "<text x=\"14\" y=\"" << kTop + ph / 2 << "\" transform=\"rotate(-90 14 " << kTop + ph / 2
        << ")\" text-anchor=\"middle\">bankroll" << (log_scale ? " (log)" : "") << "</text>\n";

    for (std::size_t i = 0; i < curves.size(); ++i) {
        const char* color = kPalette[i % std::size(kPalette)];
        const auto& pts = curves[i].curve.points;
        if (!pts.empty()) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
            for (std::size_t j = 0; j < pts.size(); ++j) {
                if (j) out << ' ';
                out << num(sx(pts[j].timestamp)) << ',' << num(sy(pts[j].bankroll));
            }
            out << "\"/>\n";
        }
        const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
        const double lx = kLeft + pw + 12;
        out << "<line x1=\"" << lx << "\" x2=\"" << lx + 20 << "\" y1=\"" << num(ly) << "\" y2=\"" << num(ly)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << lx + 26 << "\" y=\"" << num(ly + 4) << "\">" << escape(curves[i].name) << "</text>\n";
    }
    out << "</svg>\n";
}

void write_equity_chart_csv(std::ostream& out, const std::vector<NamedCurve>& curves) {
    std::set<Timestamp> stamps;
    std::vector<std::map<Timestamp, double>> values(curves.size());
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (const auto& p : curves[i].curve.points) {
            stamps.insert(p.timestamp);
            values[i][p.timestamp] = p.bankroll;
        }
    out << "timestamp";
    for (const auto& c : curves) out << ',' << c.name;
    out << '\n';
    for (Timestamp t : stamps) {
        out << t;
        for (const auto& v : values) {
            out << ',';
            if (auto it = v.find(t); it != v.end()) out << csv::format_double(it->second);
        }
        out << '\n';
    }
}

}  // namespace kellybet::cli
