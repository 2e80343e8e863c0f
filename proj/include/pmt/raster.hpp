#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "pmt/parallel.hpp"
#include "pmt/spiderweb.hpp"

namespace pmt {

// Plane rectangle raster window; row 0 is the top of the image.
struct PlaneWindow {
    double re0 = -2.0, re1 = 2.0, im0 = -2.0, im1 = 2.0;
    int nx = 400, ny = 400;

    SpherePoint pixel_center(int ix, int iy) const {
        double dx = (re1 - re0) / nx, dy = (im1 - im0) / ny;
        return SpherePoint(re0 + (ix + 0.5) * dx, im1 - (iy + 0.5) * dy);
    }
    double pixel_diag_euclid() const {
        double dx = (re1 - re0) / nx, dy = (im1 - im0) / ny;
        return std::sqrt(dx * dx + dy * dy);
    }
    // local chordal pixel diagonal at a pixel center
    double pixel_diag_chordal(const SpherePoint& c) const {
        double scale = c.is_infinity() ? 0.0 : 2.0 / (1.0 + std::norm(c.value()));
        return pixel_diag_euclid() * scale;
    }
    long pixel_count() const { return static_cast<long>(nx) * ny; }
};

// Two square charts covering the sphere: chart 0 is z on [-s,s]^2, chart 1 is
// w on [-s,s]^2 with z = 1/w. s slightly above 1 so the charts overlap.
struct SphereWindow {
    int n = 400;
    double s = 1.2;

    SpherePoint pixel_center(int chart, int ix, int iy) const {
        double d = 2.0 * s / n;
        cplx u(-s + (ix + 0.5) * d, s - (iy + 0.5) * d);
        if (chart == 0) return SpherePoint(u);
        if (std::abs(u) < 1e-300) return SpherePoint::infinity();
        return SpherePoint(1.0 / u);
    }
    double pixel_diag_chordal(int chart, int ix, int iy) const {
        double d = 2.0 * s / n;
        double diag = d * std::sqrt(2.0);
        cplx u(-s + (ix + 0.5) * d, s - (iy + 0.5) * d);
        // chordal metric factor in either chart is 2/(1+|u|^2)
        return diag * 2.0 / (1.0 + std::norm(u));
    }
    long pixel_count() const { return 2L * n * n; }
};

using RasterWindow = std::variant<PlaneWindow, SphereWindow>;

struct PixelLabel {
    enum class Kind : std::uint8_t { BoundaryDepth, Basin, Unresolved };
    Kind kind = Kind::Unresolved;
    std::int32_t value = 0; // depth or basin id
};

struct RasterParams {
    int max_iter = 100;
    double eps_boundary = 0.0; // <= 0: use 1.5 local pixel diagonals
    double tol_converge = 1e-5;
    double tolB = 1e-9;
};

struct AttractorCatalog {
    std::vector<std::vector<SpherePoint>> cycles;
};

struct RasterImage {
    RasterWindow window;
    RasterParams params;
    std::vector<PixelLabel> labels; // sphere mode: chart 0 grid then chart 1 grid

    const PixelLabel& at(long idx) const { return labels[static_cast<size_t>(idx)]; }
};

namespace detail {

inline PixelLabel classify_orbit(const PiecewiseMoebius& F, SpherePoint z, double epsB,
                                 const AttractorCatalog& attractors, const RasterParams& prm) {
    const auto& boundary = F.partition().boundary_components();
    int near_hits = 0;
    std::int32_t near_id = -1;
    for (int n = 0; n <= prm.max_iter; ++n) {
        double db = 4.0;
        for (const auto& b : boundary) db = std::min(db, b.chordal_dist_to(z));
        if (db <= epsB) return {PixelLabel::Kind::BoundaryDepth, n};
        std::int32_t hit = -1;
        for (size_t c = 0; c < attractors.cycles.size() && hit < 0; ++c)
            for (const auto& p : attractors.cycles[c])
                if (chordal_dist(z, p) < prm.tol_converge) {
                    hit = static_cast<std::int32_t>(c);
                    break;
                }
        if (hit >= 0 && hit == near_id) {
            if (++near_hits >= 2) return {PixelLabel::Kind::Basin, hit};
        } else {
            near_id = hit;
            near_hits = hit >= 0 ? 1 : 0;
        }
        LocateResult lr = F.partition().locate(z, prm.tolB);
        if (!lr.is_region()) return {PixelLabel::Kind::BoundaryDepth, n};
        z = F.map(lr.region).apply(z);
    }
    return {PixelLabel::Kind::Unresolved, 0};
}

} // namespace detail

inline RasterImage raster_classify(const PiecewiseMoebius& F, const RasterWindow& window,
                                   const AttractorCatalog& attractors,
                                   const RasterParams& prm = {}) {
    RasterImage img;
    img.window = window;
    img.params = prm;
    if (const auto* pw = std::get_if<PlaneWindow>(&window)) {
        img.labels.resize(static_cast<size_t>(pw->pixel_count()));
        parallel_for(0, pw->ny, [&](int iy) {
            for (int ix = 0; ix < pw->nx; ++ix) {
                SpherePoint z = pw->pixel_center(ix, iy);
                double epsB = prm.eps_boundary > 0.0 ? prm.eps_boundary
                                                     : 1.5 * pw->pixel_diag_chordal(z);
                img.labels[static_cast<size_t>(iy) * pw->nx + ix] =
                    detail::classify_orbit(F, z, epsB, attractors, prm);
            }
        });
    } else {
        const auto& sw = std::get<SphereWindow>(window);
        img.labels.resize(static_cast<size_t>(sw.pixel_count()));
        for (int chart = 0; chart < 2; ++chart) {
            long base = static_cast<long>(chart) * sw.n * sw.n;
            parallel_for(0, sw.n, [&](int iy) {
                for (int ix = 0; ix < sw.n; ++ix) {
                    SpherePoint z = sw.pixel_center(chart, ix, iy);
                    double epsB = prm.eps_boundary > 0.0
                                      ? prm.eps_boundary
                                      : 1.5 * sw.pixel_diag_chordal(chart, ix, iy);
                    img.labels[static_cast<size_t>(base + static_cast<long>(iy) * sw.n + ix)] =
                        detail::classify_orbit(F, z, epsB, attractors, prm);
                }
            });
        }
    }
    return img;
}

struct ConsistencyReport {
    double pixels_near_arcs = 0.0;   // BoundaryDepth(n) pixels near a level<=n arc
    double arc_points_flagged = 0.0; // arc sample points landing in flagged pixels
    long flagged_pixels = 0;
    long arc_points = 0;
};

// Cross-validation of the two computations of the pre-discontinuity set.
inline ConsistencyReport consistency_check(const PiecewiseMoebius& F, const SpiderwebApprox& S,
                                           const RasterImage& R) {
    ConsistencyReport rep;
    const auto* pw = std::get_if<PlaneWindow>(&R.window);
    if (!pw) raise(ErrorKind::BadParameter, "consistency_check: plane window required");

    long near = 0;
    for (int iy = 0; iy < pw->ny; ++iy)
        for (int ix = 0; ix < pw->nx; ++ix) {
            const PixelLabel& lbl = R.at(static_cast<long>(iy) * pw->nx + ix);
            if (lbl.kind != PixelLabel::Kind::BoundaryDepth) continue;
            ++rep.flagged_pixels;
            SpherePoint c = pw->pixel_center(ix, iy);
            double tol = 2.0 * pw->pixel_diag_chordal(c);
            if (S.dist_to_levels(c, lbl.value) <= tol) ++near;
        }
    rep.pixels_near_arcs = rep.flagged_pixels ? static_cast<double>(near) / rep.flagged_pixels
                                              : 1.0;

    long flagged = 0;
    int max_level = std::min(static_cast<int>(S.levels.size()) - 1, R.params.max_iter);
    for (int l = 0; l <= max_level; ++l)
        for (const Arc& a : S.levels[static_cast<size_t>(l)])
            for (const SpherePoint& p : a.sample(30)) {
                if (p.is_infinity()) continue;
                double x = p.value().real(), y = p.value().imag();
                if (x < pw->re0 || x > pw->re1 || y < pw->im0 || y > pw->im1) continue;
                int ix = std::min(pw->nx - 1, static_cast<int>((x - pw->re0) /
                                                               ((pw->re1 - pw->re0) / pw->nx)));
                int iy = std::min(pw->ny - 1, static_cast<int>((pw->im1 - y) /
                                                               ((pw->im1 - pw->im0) / pw->ny)));
                ++rep.arc_points;
                if (R.at(static_cast<long>(iy) * pw->nx + ix).kind ==
                    PixelLabel::Kind::BoundaryDepth)
                    ++flagged;
            }
    rep.arc_points_flagged = rep.arc_points ? static_cast<double>(flagged) / rep.arc_points : 1.0;
    return rep;
}

// --- image emission ---------------------------------------------------------

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

inline Rgb basin_color(int id) {
    // golden-angle hue walk, fixed saturation/value
    double h = std::fmod(0.12 + id * 0.381966, 1.0) * 6.0;
    double s = 0.85, v = 0.95;
    int i = static_cast<int>(h);
    double f = h - i, p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
    double r = 0, g = 0, b = 0;
    switch (i % 6) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        case 5: r = v; g = p; b = q; break;
    }
    return {static_cast<std::uint8_t>(r * 255), static_cast<std::uint8_t>(g * 255),
            static_cast<std::uint8_t>(b * 255)};
}

inline Rgb label_color(const PixelLabel& l) {
    switch (l.kind) {
        case PixelLabel::Kind::BoundaryDepth: return {0, 0, 0};
        case PixelLabel::Kind::Basin: return basin_color(l.value);
        case PixelLabel::Kind::Unresolved: return {235, 235, 235};
    }
    return {255, 0, 255};
}

inline std::vector<std::uint8_t> render_rgb(const RasterImage& img, int& w, int& h) {
    if (const auto* pw = std::get_if<PlaneWindow>(&img.window)) {
        w = pw->nx;
        h = pw->ny;
    } else {
        const auto& sw = std::get<SphereWindow>(img.window);
        w = sw.n;
        h = 2 * sw.n; // charts stacked
    }
    std::vector<std::uint8_t> rgb(static_cast<size_t>(w) * h * 3);
    for (long i = 0; i < static_cast<long>(img.labels.size()); ++i) {
        Rgb c = label_color(img.labels[static_cast<size_t>(i)]);
        rgb[static_cast<size_t>(i) * 3] = c.r;
        rgb[static_cast<size_t>(i) * 3 + 1] = c.g;
        rgb[static_cast<size_t>(i) * 3 + 2] = c.b;
    }
    return rgb;
}

inline void write_ppm(const std::string& path, const std::uint8_t* rgb, int w, int h) {
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(ErrorKind::ConfigError, "cannot open " + path);
    f << "P6\n" << w << " " << h << "\n255\n";
    f.write(reinterpret_cast<const char*>(rgb), static_cast<std::streamsize>(w) * h * 3);
}

namespace detail {
inline void png_chunk(std::ofstream& f, const char* tag, const std::uint8_t* data, size_t n) {
    auto be32 = [&](std::uint32_t v) {
        std::uint8_t b[4] = {static_cast<std::uint8_t>(v >> 24),
                             static_cast<std::uint8_t>(v >> 16),
                             static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
        f.write(reinterpret_cast<char*>(b), 4);
    };
    be32(static_cast<std::uint32_t>(n));
    f.write(tag, 4);
    if (n) f.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n));
    uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(tag), 4);
    if (n) crc = crc32(crc, data, static_cast<uInt>(n));
    be32(static_cast<std::uint32_t>(crc));
}
} // namespace detail

inline void write_png(const std::string& path, const std::uint8_t* rgb, int w, int h) {
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(ErrorKind::ConfigError, "cannot open " + path);
    static const std::uint8_t sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    f.write(reinterpret_cast<const char*>(sig), 8);

    std::uint8_t ihdr[13] = {};
    auto put32 = [](std::uint8_t* p, std::uint32_t v) {
        p[0] = static_cast<std::uint8_t>(v >> 24);
        p[1] = static_cast<std::uint8_t>(v >> 16);
        p[2] = static_cast<std::uint8_t>(v >> 8);
        p[3] = static_cast<std::uint8_t>(v);
    };
    put32(ihdr, static_cast<std::uint32_t>(w));
    put32(ihdr + 4, static_cast<std::uint32_t>(h));
    ihdr[8] = 8;  // bit depth
    ihdr[9] = 2;  // rgb
    detail::png_chunk(f, "IHDR", ihdr, 13);

    std::vector<std::uint8_t> raw(static_cast<size_t>(h) * (static_cast<size_t>(w) * 3 + 1));
    for (int y = 0; y < h; ++y) {
        std::uint8_t* row = raw.data() + static_cast<size_t>(y) * (static_cast<size_t>(w) * 3 + 1);
        row[0] = 0; // no filter
        std::copy(rgb + static_cast<size_t>(y) * w * 3, rgb + static_cast<size_t>(y + 1) * w * 3,
                  row + 1);
    }
    uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> z(zlen);
    if (compress2(z.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        raise(ErrorKind::InternalError, "png: deflate failed");
    detail::png_chunk(f, "IDAT", z.data(), zlen);
    detail::png_chunk(f, "IEND", nullptr, 0);
}

} // namespace pmt
