#include "hew/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hew {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// Round tick spacing to 1, 2, or 5 times a power of ten.
double nice_step(double span, int target_ticks) {
    double raw = span / target_ticks;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double frac = raw / mag;
    double nice = frac < 1.5 ? 1.0 : frac < 3.5 ? 2.0 : frac < 7.5 ? 5.0 : 10.0;
    return nice * mag;
}

}  // namespace

std::string render_svg(const std::vector<Panel>& panels, int panel_width, int panel_height) {
    const int ml = 64, mr = 16, mt = 28, mb = 44;  // margins around the data area
    int total_h = static_cast<int>(panels.size()) * panel_height;

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << panel_width << "\" height=\""
      << total_h << "\" viewBox=\"0 0 " << panel_width << " " << total_h << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    for (size_t p = 0; p < panels.size(); ++p) {
        const Panel& pn = panels[p];
        double y0 = static_cast<double>(p) * panel_height;
        double px0 = ml, px1 = panel_width - mr;
        double py0 = y0 + mt, py1 = y0 + panel_height - mb;
        double xs = (px1 - px0) / (pn.x_max - pn.x_min);
        double ys = (py1 - py0) / (pn.y_max - pn.y_min);
        auto X = [&](double x) { return px0 + (x - pn.x_min) * xs; };
        auto Y = [&](double y) { return py1 - (y - pn.y_min) * ys; };

        s << "<rect x=\"" << fmt(px0) << "\" y=\"" << fmt(py0) << "\" width=\""
          << fmt(px1 - px0) << "\" height=\"" << fmt(py1 - py0)
          << "\" fill=\"none\" stroke=\"#333333\"/>\n";

        double xstep = nice_step(pn.x_max - pn.x_min, 6);
        for (double t = std::ceil(pn.x_min / xstep) * xstep; t <= pn.x_max + 1e-12 * xstep;
             t += xstep) {
            s << "<line x1=\"" << fmt(X(t)) << "\" y1=\"" << fmt(py1) << "\" x2=\"" << fmt(X(t))
              << "\" y2=\"" << fmt(py1 + 5) << "\" stroke=\"#333333\"/>\n";
            s << "<text x=\"" << fmt(X(t)) << "\" y=\"" << fmt(py1 + 18)
              << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
        }
        double ystep = nice_step(pn.y_max - pn.y_min, 5);
        for (double t = std::ceil(pn.y_min / ystep) * ystep; t <= pn.y_max + 1e-12 * ystep;
             t += ystep) {
            s << "<line x1=\"" << fmt(px0 - 5) << "\" y1=\"" << fmt(Y(t)) << "\" x2=\""
              << fmt(px0) << "\" y2=\"" << fmt(Y(t)) << "\" stroke=\"#333333\"/>\n";
            s << "<text x=\"" << fmt(px0 - 8) << "\" y=\"" << fmt(Y(t) + 4)
              << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
        }

        if (!pn.title.empty())
            s << "<text x=\"" << fmt((px0 + px1) / 2) << "\" y=\"" << fmt(py0 - 10)
              << "\" font-size=\"13\" text-anchor=\"middle\">" << pn.title << "</text>\n";
        if (!pn.x_label.empty())
            s << "<text x=\"" << fmt((px0 + px1) / 2) << "\" y=\"" << fmt(py1 + 34)
              << "\" font-size=\"12\" text-anchor=\"middle\">" << pn.x_label << "</text>\n";
        if (!pn.y_label.empty())
            s << "<text x=\"" << fmt(px0 - 46) << "\" y=\"" << fmt((py0 + py1) / 2)
              << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
              << fmt(px0 - 46) << " " << fmt((py0 + py1) / 2) << ")\">" << pn.y_label
              << "</text>\n";

        for (const Polyline& ln : pn.lines) {
            // Clip segments to the window; split into runs of in-window points.
            std::vector<std::pair<double, double>> run;
            auto flush = [&]() {
                if (run.size() >= 2) {
                    s << "<polyline fill=\"none\" stroke=\"" << ln.color << "\" stroke-width=\""
                      << fmt(ln.width) << "\" points=\"";
                    for (auto& [x, y] : run) s << fmt(X(x)) << "," << fmt(Y(y)) << " ";
                    s << "\"/>\n";
                }
                run.clear();
            };
            for (auto& [x, y] : ln.pts) {
                bool in = x >= pn.x_min && x <= pn.x_max && y >= pn.y_min && y <= pn.y_max;
                if (in)
                    run.push_back({x, y});
                else
                    flush();
            }
            flush();
            if (!ln.label.empty() && !ln.pts.empty()) {
                auto& [lx, lyv] = ln.pts.front();
                double tx = std::clamp(X(lx), px0 + 4.0, px1 - 20.0);
                double ty = std::clamp(Y(lyv) - 4.0, py0 + 12.0, py1 - 4.0);
                s << "<text x=\"" << fmt(tx) << "\" y=\"" << fmt(ty) << "\" font-size=\"11\" fill=\""
                  << ln.color << "\">" << ln.label << "</text>\n";
            }
        }
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace hew
