#include "rootsim/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace rootsim {

namespace {

constexpr std::array<const char*, 6> kPalette{"#1b6ca8", "#d1495b", "#2e933c", "#edae49", "#6a4c93", "#00798c"};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

struct Box {
    double x0{std::numeric_limits<double>::infinity()}, y0{std::numeric_limits<double>::infinity()};
    double x1{-std::numeric_limits<double>::infinity()}, y1{-std::numeric_limits<double>::infinity()};
    void add(double x, double y) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
    }
    bool empty() const { return !(x1 >= x0); }
};

void require_planar(const Vec3& p, const char* what) {
    if (p.z != 0.0) throw SvgError(std::string("emit_svg: ") + what + " is not in the z = 0 plane");
}

// Clips the line {x : <n, x> = c} to the box; false when it misses.
bool clip_plane(const Vec3& n, double c, const Box& b, Vec3& a, Vec3& e) {
    const double nn = n.x * n.x + n.y * n.y;
    const Vec3 p0{n.x * c / nn, n.y * c / nn, 0.0};
    const Vec3 d{-n.y, n.x, 0.0};
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    auto slab = [&](double p, double dd, double mn, double mx) {
        if (dd == 0.0) return p >= mn && p <= mx;
        double t0 = (mn - p) / dd, t1 = (mx - p) / dd;
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
        return true;
    };
    if (!slab(p0.x, d.x, b.x0, b.x1) || !slab(p0.y, d.y, b.y0, b.y1) || !(lo < hi)) return false;
    a = p0 + lo * d;
    e = p0 + hi * d;
    return true;
}

}  // namespace

std::string emit_svg(const SimulationLog& log, const SvgOptions& opt) {
    const auto curves = log.attempt_curves();
    for (const auto& o : log.header.obstacles) require_planar(o.shape == ObstacleShape::Disc ? Vec3{} : o.center, "an obstacle");
    for (const auto& p : log.header.initial_nodes) require_planar(p, "the initial curve");
    for (const auto& c : curves)
        for (const auto& p : c) require_planar(p, "a curve");
    const auto& target = log.header.target;
    if (target.kind == TargetKind::Plane) {
        if (target.normal.z != 0.0) throw SvgError("emit_svg: target normal has a z component");
    } else {
        require_planar(target.point, "the target point");
    }

    Box box;
    for (const auto& o : log.header.obstacles) {
        box.add(o.center.x - o.radius, o.center.y - o.radius);
        box.add(o.center.x + o.radius, o.center.y + o.radius);
    }
    for (const auto& p : log.header.initial_nodes) box.add(p.x, p.y);
    for (const auto& c : curves)
        for (const auto& p : c) box.add(p.x, p.y);
    const bool has_start = !log.header.initial_nodes.empty();
    const Vec3 start = has_start ? log.header.initial_nodes.front() : Vec3{};
    if (target.kind == TargetKind::Point) {
        box.add(target.point.x, target.point.y);
    } else {
        // Make sure the target line shows up next to the start (or the obstacles).
        const Vec3 ref = has_start ? start : box.empty() ? Vec3{} : Vec3{0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1), 0.0};
        const double nn = norm2(target.normal);
        const Vec3 foot = ref - ((dot(target.normal, ref) - target.offset) / nn) * target.normal;
        box.add(foot.x, foot.y);
    }
    if (box.empty()) box = Box{-1.0, -1.0, 1.0, 1.0};
    const double pad = 0.05 * std::max({box.x1 - box.x0, box.y1 - box.y0, 1e-6});
    box.x0 -= pad;
    box.y0 -= pad;
    box.x1 += pad;
    box.y1 += pad;

    const double span = std::max(box.x1 - box.x0, box.y1 - box.y0);
    const double scale = (opt.width - 2.0 * opt.margin) / span;
    const double height = 2.0 * opt.margin + (box.y1 - box.y0) * scale;
    auto X = [&](double x) { return fmt(opt.margin + (x - box.x0) * scale); };
    auto Y = [&](double y) { return fmt(opt.margin + (box.y1 - y) * scale); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(opt.width) << "\" height=\"" << fmt(height)
        << "\" viewBox=\"0 0 " << fmt(opt.width) << " " << fmt(height) << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(opt.width) << "\" height=\"" << fmt(height)
        << "\" fill=\"white\"/>\n";
    if (opt.show_title)
        svg << "<text x=\"" << fmt(opt.margin) << "\" y=\"" << fmt(0.7 * opt.margin)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(log.header.scenario) << "</text>\n";

    svg << "<g id=\"target\">\n";
    if (target.kind == TargetKind::Plane) {
        Vec3 a, e;
        if (clip_plane(target.normal, target.offset, box, a, e))
            svg << "<line x1=\"" << X(a.x) << "\" y1=\"" << Y(a.y) << "\" x2=\"" << X(e.x) << "\" y2=\"" << Y(e.y)
                << "\" stroke=\"#555555\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
    } else {
        svg << "<circle cx=\"" << X(target.point.x) << "\" cy=\"" << Y(target.point.y)
            << "\" r=\"4\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1.5\"/>\n";
    }
    svg << "</g>\n";

    svg << "<g id=\"obstacles\">\n";
    for (const auto& o : log.header.obstacles)
        svg << "<circle cx=\"" << X(o.center.x) << "\" cy=\"" << Y(o.center.y) << "\" r=\"" << fmt(o.radius * scale)
            << "\" fill=\"#bbbbbb\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    svg << "</g>\n";

    svg << "<g id=\"attempts\" fill=\"none\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";
    for (std::size_t a = 0; a < curves.size(); ++a) {
        svg << "<polyline class=\"attempt\" data-attempt=\"" << a << "\" stroke=\"" << kPalette[a % kPalette.size()]
            << "\" stroke-width=\"" << fmt(opt.stroke) << "\"";
        if (a % 2 == 1) svg << " stroke-dasharray=\"8 3\"";
        svg << " points=\"";
        for (std::size_t i = 0; i < curves[a].size(); ++i) {
            if (i) svg << ' ';
            svg << X(curves[a][i].x) << ',' << Y(curves[a][i].y);
        }
        svg << "\"/>\n";
    }
    svg << "</g>\n";

    if (has_start)
        svg << "<circle id=\"start\" cx=\"" << X(start.x) << "\" cy=\"" << Y(start.y)
            << "\" r=\"3.5\" fill=\"black\"/>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace rootsim
