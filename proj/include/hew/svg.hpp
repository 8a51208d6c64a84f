#ifndef HEW_SVG_HPP
#define HEW_SVG_HPP

#include <string>
#include <vector>

namespace hew {

struct Polyline {
    std::vector<std::pair<double, double>> pts;
    std::string color = "#000000";
    double width = 1.2;
    std::string label;
};

// One plot panel with its own data window; axes and ticks are drawn from the
// window, so panels scale independently.
struct Panel {
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    std::string x_label, y_label, title;
    std::vector<Polyline> lines;
};

// Renders the panels stacked vertically into a standalone SVG document.
// Output depends only on the inputs, so regeneration is bit-stable.
std::string render_svg(const std::vector<Panel>& panels, int panel_width = 720,
                       int panel_height = 360);

}  // namespace hew

#endif
