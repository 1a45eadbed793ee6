#ifndef ATLAS_SVG_HPP
#define ATLAS_SVG_HPP

#include <string>
#include <vector>

#include "atlas/geometry.hpp"
#include "atlas/periodic.hpp"

namespace atlas {

// Minimal SVG canvas mapping a data window onto a fixed-size viewport.
class SvgCanvas {
  public:
    SvgCanvas(const Window& window, int width_px = 800, int height_px = 600);

    void add_point(const LiftPoint& p, const std::string& color = "#1f3a5f",
                   double radius_px = 0.7);
    void add_points(const std::vector<LiftPoint>& pts, const std::string& color = "#1f3a5f",
                    double radius_px = 0.7);
    void add_polyline(const std::vector<LiftPoint>& pts, const std::string& color = "#b03030",
                      double width_px = 1.0);
    void add_hline(double y, const std::string& color = "#2a7f3f", double width_px = 1.5);
    void add_marker(const LiftPoint& p, const std::string& color = "#d07000",
                    double radius_px = 4.0);

    std::string render() const;
    void write(const std::string& path) const;

  private:
    double sx(double x) const;
    double sy(double y) const;
    Window window_;
    int w_, h_;
    std::vector<std::string> elements_;
};

}  // namespace atlas

#endif
