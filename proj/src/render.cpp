#include "mopp/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mopp/errors.hpp"
#include "mopp/objectives.hpp"
#include "mopp/terrain.hpp"

namespace mopp {

RenderLayer layer_from_string(const std::string& name) {
    if (name == "occupancy" || name == "occupancy+heuristic") {
        return RenderLayer::OccupancyHeuristic;
    }
    if (name == "elevation" || name == "elevation-contour") {
        return RenderLayer::Elevation;
    }
    if (name == "risk") return RenderLayer::Risk;
    if (name == "solar") return RenderLayer::Solar;
    throw ConfigError("unknown render layer: " + name);
}

std::string to_string(RenderLayer layer) {
    switch (layer) {
        case RenderLayer::OccupancyHeuristic: return "occupancy+heuristic";
        case RenderLayer::Elevation: return "elevation-contour";
        case RenderLayer::Risk: return "risk";
        case RenderLayer::Solar: return "solar";
    }
    throw ConfigError("unknown render layer");
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

// Per-cell scalar field in [0,1], row-major from the bottom row.
std::vector<double> layer_field(const Workspace& ws, RenderLayer layer) {
    const int w = ws.grid.width();
    const int h = ws.grid.height();
    std::vector<double> field(size_t(w) * h, 0.0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double v = 0.0;
            switch (layer) {
                case RenderLayer::OccupancyHeuristic:
                    v = heuristic({r, c}, ws.goal);
                    break;
                case RenderLayer::Elevation:
                    v = ws.elevation.at({r, c});
                    break;
                case RenderLayer::Risk:
                    v = std::log(risk_at(ws.risk, {r, c}));
                    break;
                case RenderLayer::Solar:
                    v = double(c) * ws.solar.initial.x + double(r) * ws.solar.initial.y;
                    break;
            }
            field[size_t(r) * w + c] = v;
        }
    }
    normalize_min_max(field);
    return field;
}

void validate_paths(const Workspace& ws, const std::vector<PathOverlay>& paths) {
    for (const PathOverlay& overlay : paths) {
        for (const GridCoord& p : overlay.waypoints) {
            if (!ws.grid.in_bounds(p)) {
                throw IngestionError("path waypoint (" + std::to_string(p.row) + "," +
                                     std::to_string(p.col) + ") is outside the grid");
            }
        }
    }
}

struct PathStyle {
    const char* stroke;
    const char* dash;  // nullptr for solid
};

PathStyle style_for(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::Astar: return {"#000000", "1.6,1.0"};
        case Algorithm::Dstar: return {"#000000", nullptr};
        case Algorithm::DstarPo: return {"#ffffff", nullptr};
        case Algorithm::AstarPo: return {"#ffffff", "1.6,1.0"};
    }
    return {"#000000", nullptr};
}

// Marching squares over cell-center samples; emits one "M x y L x y ..."
// path per contour level.
std::string contour_paths(const Workspace& ws, const std::vector<double>& field) {
    const int w = ws.grid.width();
    const int h = ws.grid.height();
    const auto sample = [&](int r, int c) { return field[size_t(r) * w + c]; };
    const auto sx = [&](double x) { return x + 0.5; };
    const auto sy = [&](double y) { return double(h) - y - 0.5; };

    std::string out;
    for (int level = 1; level <= 9; ++level) {
        const double iso = level / 10.0;
        std::string d;
        const auto seg = [&](double x0, double y0, double x1, double y1) {
            d += "M" + fmt(sx(x0)) + " " + fmt(sy(y0)) + "L" + fmt(sx(x1)) + " " +
                 fmt(sy(y1));
        };
        for (int r = 0; r + 1 < h; ++r) {
            for (int c = 0; c + 1 < w; ++c) {
                const double bl = sample(r, c), br = sample(r, c + 1);
                const double tl = sample(r + 1, c), tr = sample(r + 1, c + 1);
                const int mask = (bl >= iso ? 1 : 0) | (br >= iso ? 2 : 0) |
                                 (tr >= iso ? 4 : 0) | (tl >= iso ? 8 : 0);
                if (mask == 0 || mask == 15) continue;

                // Interpolated crossings on the four square edges.
                const double eb = c + (iso - bl) / (br - bl);        // bottom, x
                const double et = c + (iso - tl) / (tr - tl);        // top, x
                const double el = r + (iso - bl) / (tl - bl);        // left, y
                const double er = r + (iso - br) / (tr - br);        // right, y
                const double xb = eb, xt = et;
                const double yl = el, yr = er;

                switch (mask) {
                    case 1: case 14: seg(c, yl, xb, r); break;
                    case 2: case 13: seg(xb, r, c + 1, yr); break;
                    case 3: case 12: seg(c, yl, c + 1, yr); break;
                    case 4: case 11: seg(xt, r + 1, c + 1, yr); break;
                    case 6: case 9: seg(xb, r, xt, r + 1); break;
                    case 7: case 8: seg(c, yl, xt, r + 1); break;
                    case 5:
                    case 10: {
                        const bool center = (bl + br + tl + tr) / 4.0 >= iso;
                        const bool first = (mask == 5) == center;
                        if (first) {
                            seg(c, yl, xt, r + 1);
                            seg(xb, r, c + 1, yr);
                        } else {
                            seg(c, yl, xb, r);
                            seg(xt, r + 1, c + 1, yr);
                        }
                        break;
                    }
                }
            }
        }
        if (!d.empty()) {
            const int shade = 200 - level * 18;
            char color[8];
            std::snprintf(color, sizeof(color), "#%02x%02x%02x", shade, shade, shade);
            out += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + color +
                   "\" stroke-width=\"0.12\"/>\n";
        }
    }
    return out;
}

}  // namespace

std::string render_pgm(const Workspace& ws, RenderLayer layer,
                       const std::vector<PathOverlay>& paths) {
    validate_paths(ws, paths);
    const int w = ws.grid.width();
    const int h = ws.grid.height();
    const std::vector<double> field = layer_field(ws, layer);

    std::vector<uint8_t> pixels(size_t(w) * h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            uint8_t v = uint8_t(32.0 + field[size_t(r) * w + c] * 191.0);
            if (ws.grid.occupied({r, c})) v = 0;
            pixels[size_t(r) * w + c] = v;
        }
    }
    for (const PathOverlay& overlay : paths) {
        for (const GridCoord& p : overlay.waypoints) {
            pixels[size_t(p.row) * w + p.col] = 255;
        }
    }

    std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    for (int r = h - 1; r >= 0; --r) {  // file row 0 = top of the map
        out.append(reinterpret_cast<const char*>(&pixels[size_t(r) * w]), size_t(w));
    }
    return out;
}

std::string render_svg(const Workspace& ws, RenderLayer layer,
                       const std::vector<PathOverlay>& paths) {
    validate_paths(ws, paths);
    const int w = ws.grid.width();
    const int h = ws.grid.height();
    const std::vector<double> field = layer_field(ws, layer);

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " +
           std::to_string(w) + " " + std::to_string(h) + "\" width=\"" +
           std::to_string(w * 8) + "\" height=\"" + std::to_string(h * 8) + "\">\n";
    out += "<rect width=\"" + std::to_string(w) + "\" height=\"" +
           std::to_string(h) + "\" fill=\"#ffffff\"/>\n";

    if (layer == RenderLayer::Elevation) {
        out += contour_paths(ws, field);
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                if (!ws.grid.occupied({r, c})) continue;
                out += "<rect x=\"" + std::to_string(c) + "\" y=\"" +
                       std::to_string(h - r - 1) + "\" width=\"1\" height=\"1\" "
                       "fill=\"#000000\"/>\n";
            }
        }
    } else {
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                int shade = int(40.0 + field[size_t(r) * w + c] * 200.0);
                if (ws.grid.occupied({r, c})) shade = 0;
                char color[8];
                std::snprintf(color, sizeof(color), "#%02x%02x%02x", shade, shade,
                              shade);
                out += "<rect x=\"" + std::to_string(c) + "\" y=\"" +
                       std::to_string(h - r - 1) + "\" width=\"1\" height=\"1\" fill=\"" +
                       color + "\"/>\n";
            }
        }
    }

    for (const PathOverlay& overlay : paths) {
        const PathStyle style = style_for(overlay.algorithm);
        out += "<polyline fill=\"none\" stroke=\"" + std::string(style.stroke) +
               "\" stroke-width=\"0.4\"";
        if (style.dash) out += " stroke-dasharray=\"" + std::string(style.dash) + "\"";
        out += " points=\"";
        for (size_t i = 0; i < overlay.waypoints.size(); ++i) {
            const GridCoord& p = overlay.waypoints[i];
            if (i) out += " ";
            out += fmt(p.col + 0.5) + "," + fmt(h - p.row - 0.5);
        }
        out += "\"/>\n";
    }

    out += "<rect x=\"" + std::to_string(ws.start.col) + "\" y=\"" +
           std::to_string(h - ws.start.row - 1) +
           "\" width=\"1\" height=\"1\" fill=\"#d22\"/>\n";
    out += "<rect x=\"" + std::to_string(ws.goal.col) + "\" y=\"" +
           std::to_string(h - ws.goal.row - 1) +
           "\" width=\"1\" height=\"1\" fill=\"#2a2\"/>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace mopp
