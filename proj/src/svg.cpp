#include "atlas/svg.hpp"

#include <fstream>
#include <sstream>

#include "atlas/errors.hpp"

namespace atlas {

SvgCanvas::SvgCanvas(const Window& window, int width_px, int height_px)
    : window_(window), w_(width_px), h_(height_px) {}

double SvgCanvas::sx(double x) const {
    return (x - window_.x0) / (window_.x1 - window_.x0) * w_;
}
double SvgCanvas::sy(double y) const {
    return (window_.y1 - y) / (window_.y1 - window_.y0) * h_;
}

namespace {
std::string fmt(double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << v;
    return os.str();
}
}  // namespace

void SvgCanvas::add_point(const LiftPoint& p, const std::string& color, double radius_px) {
    double x = wrap01(p.x);
    if (x < window_.x0 || x > window_.x1 || p.y < window_.y0 || p.y > window_.y1) return;
    elements_.push_back("<circle cx=\"" + fmt(sx(x)) + "\" cy=\"" + fmt(sy(p.y)) +
                        "\" r=\"" + fmt(radius_px) + "\" fill=\"" + color + "\"/>");
}

void SvgCanvas::add_points(const std::vector<LiftPoint>& pts, const std::string& color,
                           double radius_px) {
    for (const auto& p : pts) add_point(p, color, radius_px);
}

void SvgCanvas::add_polyline(const std::vector<LiftPoint>& pts, const std::string& color,
                             double width_px) {
    if (pts.size() < 2) return;
    // Split at seam crossings so wrapped branches do not smear across the
    // whole viewport.
    std::ostringstream os;
    bool open = false;
    for (size_t i = 0; i < pts.size(); ++i) {
        double x = wrap01(pts[i].x);
        bool jump = i > 0 && std::abs(wrap01(pts[i].x) - wrap01(pts[i - 1].x)) > 0.5;
        if (jump && open) {
            os << "\"/>";
            elements_.push_back(os.str());
            os.str("");
            open = false;
        }
        if (!open) {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
               << fmt(width_px) << "\" points=\"";
            open = true;
        }
        os << fmt(sx(x)) << "," << fmt(sy(pts[i].y)) << " ";
    }
    if (open) {
        os << "\"/>";
        elements_.push_back(os.str());
    }
}

void SvgCanvas::add_hline(double y, const std::string& color, double width_px) {
    elements_.push_back("<line x1=\"0\" y1=\"" + fmt(sy(y)) + "\" x2=\"" + fmt(w_) +
                        "\" y2=\"" + fmt(sy(y)) + "\" stroke=\"" + color +
                        "\" stroke-width=\"" + fmt(width_px) + "\"/>");
}

void SvgCanvas::add_marker(const LiftPoint& p, const std::string& color, double radius_px) {
    elements_.push_back("<circle cx=\"" + fmt(sx(wrap01(p.x))) + "\" cy=\"" + fmt(sy(p.y)) +
                        "\" r=\"" + fmt(radius_px) + "\" fill=\"none\" stroke=\"" + color +
                        "\" stroke-width=\"1.5\"/>");
}

std::string SvgCanvas::render() const {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
       << "\" viewBox=\"0 0 " << w_ << " " << h_ << "\">\n"
       << "<rect width=\"" << w_ << "\" height=\"" << h_ << "\" fill=\"white\"/>\n";
    for (const auto& e : elements_) os << e << "\n";
    os << "</svg>\n";
    return os.str();
}

void SvgCanvas::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("svg: cannot write " + path);
    out << render();
    if (!out) throw IoError("svg: write failed for " + path);
}

}  // namespace atlas
