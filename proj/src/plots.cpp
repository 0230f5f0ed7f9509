// Copyright 2026 The covermap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "covermap/plots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <zlib.h>

#include "covermap/errors.hpp"
#include "covermap/textio.hpp"
#include "covermap/zstream.hpp"

namespace covermap {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 440;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 150; // room for the legend
constexpr int kMarginTop = 36;
constexpr int kMarginBottom = 48;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
                                    "#aec7e8", "#ffbb78"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

struct Range {
    double lo = 0;
    double hi = 1;

    double clamp_span() const { return hi > lo ? hi - lo : 1.0; }
};

Range data_range(std::span<const PlotSeries> series, bool x_axis) {
    Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const PlotSeries& s : series) {
        for (const Point& p : s.points) {
            const double v = x_axis ? p.x : p.y;
            r.lo = std::min(r.lo, v);
            r.hi = std::max(r.hi, v);
        }
    }
    if (!(r.lo <= r.hi)) return Range{0, 1};
    if (r.lo == r.hi) {
        r.lo -= 0.5;
        r.hi += 0.5;
    }
    // 5% padding keeps edge points visible.
    const double pad = 0.05 * (r.hi - r.lo);
    return Range{r.lo - pad, r.hi + pad};
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

class SvgCanvas {
public:
    SvgCanvas(const std::string& title, const std::string& x_label, const std::string& y_label,
              Range x, Range y)
        : x_(x), y_(y) {
        body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
                 "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " +
                 std::to_string(kWidth) + " " + std::to_string(kHeight) + "\">\n";
        body_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        body_ += "<text x=\"" + std::to_string(kWidth / 2) + "\" y=\"20\" text-anchor=\"middle\" "
                 "font-family=\"sans-serif\" font-size=\"14\">" + xml_escape(title) + "</text>\n";
        axes(x_label, y_label);
    }

    double px(double x) const {
        return kMarginLeft + (x - x_.lo) / x_.clamp_span() * plot_w();
    }
    double py(double y) const {
        return kHeight - kMarginBottom - (y - y_.lo) / y_.clamp_span() * plot_h();
    }

    void circle(double x, double y, const char* color) {
        body_ += "<circle cx=\"" + fmt_fixed(px(x), 1) + "\" cy=\"" + fmt_fixed(py(y), 1) +
                 "\" r=\"3.5\" fill=\"" + color + "\"/>\n";
    }

    void polyline(const std::vector<Point>& pts, const char* color) {
        if (pts.empty()) return;
        body_ += "<polyline fill=\"none\" stroke=\"";
        body_ += color;
        body_ += "\" stroke-width=\"1.5\" points=\"";
        for (const Point& p : pts) {
            body_ += fmt_fixed(px(p.x), 1) + "," + fmt_fixed(py(p.y), 1) + " ";
        }
        body_ += "\"/>\n";
    }

    void legend_entry(std::size_t idx, const std::string& name, const char* color) {
        const double x = kWidth - kMarginRight + 12;
        const double y = kMarginTop + 14 + 16.0 * static_cast<double>(idx);
        body_ += "<rect x=\"" + fmt_fixed(x, 1) + "\" y=\"" + fmt_fixed(y - 8, 1) +
                 "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
        body_ += "<text x=\"" + fmt_fixed(x + 14, 1) + "\" y=\"" + fmt_fixed(y + 1, 1) +
                 "\" font-family=\"sans-serif\" font-size=\"10\">" + xml_escape(name) +
                 "</text>\n";
    }

    std::string finish() {
        body_ += "</svg>\n";
        return std::move(body_);
    }

private:
    static double plot_w() { return kWidth - kMarginLeft - kMarginRight; }
    static double plot_h() { return kHeight - kMarginTop - kMarginBottom; }

    void axes(const std::string& x_label, const std::string& y_label) {
        const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
        const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
        body_ += "<line x1=\"" + fmt_fixed(x0, 1) + "\" y1=\"" + fmt_fixed(y0, 1) + "\" x2=\"" +
                 fmt_fixed(x1, 1) + "\" y2=\"" + fmt_fixed(y0, 1) + "\" stroke=\"black\"/>\n";
        body_ += "<line x1=\"" + fmt_fixed(x0, 1) + "\" y1=\"" + fmt_fixed(y0, 1) + "\" x2=\"" +
                 fmt_fixed(x0, 1) + "\" y2=\"" + fmt_fixed(y1, 1) + "\" stroke=\"black\"/>\n";
        for (int t = 0; t <= 5; ++t) {
            const double fx = x_.lo + x_.clamp_span() * t / 5.0;
            const double fy = y_.lo + y_.clamp_span() * t / 5.0;
            body_ += "<text x=\"" + fmt_fixed(px(fx), 1) + "\" y=\"" + fmt_fixed(y0 + 16, 1) +
                     "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\">" +
                     fmt_fixed(fx, 2) + "</text>\n";
            body_ += "<text x=\"" + fmt_fixed(x0 - 6, 1) + "\" y=\"" + fmt_fixed(py(fy) + 3, 1) +
                     "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"9\">" +
                     fmt_fixed(fy, 2) + "</text>\n";
        }
        body_ += "<text x=\"" + std::to_string((kMarginLeft + kWidth - kMarginRight) / 2) +
                 "\" y=\"" + std::to_string(kHeight - 12) +
                 "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
                 xml_escape(x_label) + "</text>\n";
        body_ += "<text x=\"16\" y=\"" + std::to_string((kMarginTop + kHeight - kMarginBottom) / 2) +
                 "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" "
                 "transform=\"rotate(-90 16 " +
                 std::to_string((kMarginTop + kHeight - kMarginBottom) / 2) + ")\">" +
                 xml_escape(y_label) + "</text>\n";
    }

    std::string body_;
    Range x_;
    Range y_;
};

void write_plot(const std::filesystem::path& path, const std::string& title,
                const std::string& x_label, const std::string& y_label,
                std::span<const PlotSeries> series, bool lines) {
    SvgCanvas canvas(title, x_label, y_label, data_range(series, true),
                     data_range(series, false));
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        if (lines) {
            canvas.polyline(series[i].points, color);
        } else {
            for (const Point& p : series[i].points) canvas.circle(p.x, p.y, color);
        }
        canvas.legend_entry(i, series[i].name, color);
    }
    write_text_file(path, canvas.finish());
}

// ---- PNG ----

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::vector<std::uint8_t>& payload) {
    put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
    const std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    const uLong crc = crc32(0, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
    put_u32_be(out, static_cast<std::uint32_t>(crc));
}

struct Rgba {
    std::uint8_t r, g, b, a;
};

// red (0 votes) -> yellow (N/2) -> blue (N).
Rgba vote_color(std::uint8_t votes, int n_masks) {
    const double half = n_masks / 2.0;
    const double v = static_cast<double>(votes);
    auto lerp = [](double a, double b, double t) {
        return static_cast<std::uint8_t>(std::lround(a + (b - a) * t));
    };
    if (v <= half) {
        const double t = half > 0 ? v / half : 0.0;
        return Rgba{255, lerp(0, 255, t), 0, 255};
    }
    const double t = (v - half) / (n_masks - half);
    return Rgba{lerp(255, 0, t), lerp(255, 0, t), lerp(0, 255, t), 255};
}

} // namespace

void write_scatter_svg(const std::filesystem::path& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       std::span<const PlotSeries> series) {
    write_plot(path, title, x_label, y_label, series, /*lines=*/false);
}

void write_line_svg(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    std::span<const PlotSeries> series) {
    write_plot(path, title, x_label, y_label, series, /*lines=*/true);
}

void write_consensus_png(const ConsensusRaster& consensus, const std::filesystem::path& path) {
    const int w = consensus.grid.width;
    const int h = consensus.grid.height;
    if (w < 1 || h < 1) throw ValueError("empty consensus raster");

    // Filter type 0 scanlines, RGBA8.
    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<std::size_t>(h) * (1 + static_cast<std::size_t>(w) * 4));
    for (int row = 0; row < h; ++row) {
        raw.push_back(0);
        for (int col = 0; col < w; ++col) {
            const std::uint8_t v = consensus.votes[static_cast<std::size_t>(row) * w + col];
            Rgba c{0, 0, 0, 0};
            if (v != consensus.nodata) c = vote_color(v, consensus.n_masks);
            raw.push_back(c.r);
            raw.push_back(c.g);
            raw.push_back(c.b);
            raw.push_back(c.a);
        }
    }

    std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    std::vector<std::uint8_t> ihdr;
    put_u32_be(ihdr, static_cast<std::uint32_t>(w));
    put_u32_be(ihdr, static_cast<std::uint32_t>(h));
    ihdr.push_back(8); // bit depth
    ihdr.push_back(6); // RGBA
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    put_chunk(png, "IHDR", ihdr);
    put_chunk(png, "IDAT", zlib_deflate(raw));
    put_chunk(png, "IEND", {});

    write_text_file(path, std::string(png.begin(), png.end()));
}

} // namespace covermap
