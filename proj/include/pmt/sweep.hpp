#pragma once

#include <functional>
#include <set>
#include <tuple>
#include <vector>

#include "pmt/analysis.hpp"
#include "pmt/parallel.hpp"

namespace pmt {

struct SweepConfig {
    double re0 = 0.0, re1 = 1.0, im0 = 0.0, im1 = 1.0;
    int nx = 20, ny = 20;
    int census_len = 3;
    PlaneWindow window{-2.0, 2.0, -2.0, 2.0, 96, 96};
    int raster_iters = 80;
    double raster_tol_converge = 1e-4;
    double multiplier_tol = 0.02; // continuity allowance between neighbor cells
    int min_basin_pixels = 5;     // suppression threshold per region/label
};

struct CellSignature {
    bool valid = false;
    std::vector<cplx> attracting_multipliers; // one per cycle, sorted
    int attracting_cycles = 0;
    int ghost_count = 0;
    int basin_label_count = 0; // distinct basin labels summed over regions
};

struct SweepGrid {
    SweepConfig config;
    std::vector<CellSignature> cells;  // ny rows of nx, row 0 at im0
    std::vector<std::uint8_t> change_mask;
    int distinct_signatures = 0;

    cplx cell_param(int ix, int iy) const {
        double dx = (config.re1 - config.re0) / config.nx;
        double dy = (config.im1 - config.im0) / config.ny;
        return {config.re0 + (ix + 0.5) * dx, config.im0 + (iy + 0.5) * dy};
    }
};

namespace detail {

inline CellSignature cell_signature(const PiecewiseMoebius& F, const SweepConfig& cfg) {
    CellSignature sig;
    sig.valid = true;
    AnalysisConfig ac;
    ac.max_word_len = cfg.census_len;
    auto census = find_periodic(F, ac);
    auto cycles = attracting_cycles(F, census);
    sig.attracting_cycles = static_cast<int>(cycles.size());
    for (const auto& cyc : cycles) sig.attracting_multipliers.push_back(cyc.front().multiplier);
    std::sort(sig.attracting_multipliers.begin(), sig.attracting_multipliers.end(),
              [](cplx a, cplx b) {
                  return std::make_pair(a.real(), a.imag()) < std::make_pair(b.real(), b.imag());
              });
    for (const auto& p : census)
        if (p.kind == PeriodicKind::Ghost) ++sig.ghost_count;

    AttractorCatalog cat;
    for (const auto& cyc : cycles) {
        std::vector<SpherePoint> pts;
        for (const auto& p : cyc) pts.push_back(p.point);
        cat.cycles.push_back(std::move(pts));
    }
    RasterParams prm;
    prm.max_iter = cfg.raster_iters;
    prm.tol_converge = cfg.raster_tol_converge;
    RasterImage img = raster_classify(F, cfg.window, cat, prm);

    // count distinct basin labels per region, ignoring sub-threshold flecks
    const auto& pw = cfg.window;
    int K = F.num_regions();
    std::vector<std::vector<long>> counts(static_cast<size_t>(K));
    for (auto& c : counts) c.assign(cat.cycles.size(), 0);
    for (int iy = 0; iy < pw.ny; ++iy)
        for (int ix = 0; ix < pw.nx; ++ix) {
            const PixelLabel& l = img.at(static_cast<long>(iy) * pw.nx + ix);
            if (l.kind != PixelLabel::Kind::Basin) continue;
            LocateResult lr = F.partition().locate(pw.pixel_center(ix, iy));
            if (!lr.is_region()) continue;
            ++counts[static_cast<size_t>(lr.region)][static_cast<size_t>(l.value)];
        }
    for (int k = 0; k < K; ++k)
        for (size_t c = 0; c < cat.cycles.size(); ++c)
            if (counts[static_cast<size_t>(k)][c] >= cfg.min_basin_pixels)
                ++sig.basin_label_count;
    return sig;
}

inline bool signatures_differ(const CellSignature& a, const CellSignature& b, double mult_tol) {
    if (a.valid != b.valid) return true;
    if (a.attracting_cycles != b.attracting_cycles) return true;
    if (a.ghost_count != b.ghost_count) return true;
    if (a.basin_label_count != b.basin_label_count) return true;
    if (a.attracting_multipliers.size() != b.attracting_multipliers.size()) return true;
    for (size_t i = 0; i < a.attracting_multipliers.size(); ++i)
        if (std::abs(a.attracting_multipliers[i] - b.attracting_multipliers[i]) > mult_tol)
            return true;
    return false;
}

} // namespace detail

// Structural signature over a complex parameter rectangle; the change mask
// marks cells whose signature differs from a 4-neighbor.
inline SweepGrid parameter_sweep(const std::function<PiecewiseMoebius(cplx)>& family,
                                 const SweepConfig& cfg) {
    SweepGrid grid;
    grid.config = cfg;
    grid.cells.assign(static_cast<size_t>(cfg.nx) * cfg.ny, {});
    parallel_for(0, cfg.ny, [&](int iy) {
        for (int ix = 0; ix < cfg.nx; ++ix) {
            cplx lam = grid.cell_param(ix, iy);
            CellSignature sig;
            try {
                PiecewiseMoebius F = family(lam);
                sig = detail::cell_signature(F, cfg);
            } catch (const Error&) {
                sig.valid = false;
            }
            grid.cells[static_cast<size_t>(iy) * cfg.nx + ix] = sig;
        }
    });

    grid.change_mask.assign(grid.cells.size(), 0);
    auto at = [&](int ix, int iy) -> const CellSignature& {
        return grid.cells[static_cast<size_t>(iy) * cfg.nx + ix];
    };
    for (int iy = 0; iy < cfg.ny; ++iy)
        for (int ix = 0; ix < cfg.nx; ++ix) {
            const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d) {
                int jx = ix + dx[d], jy = iy + dy[d];
                if (jx < 0 || jy < 0 || jx >= cfg.nx || jy >= cfg.ny) continue;
                if (detail::signatures_differ(at(ix, iy), at(jx, jy), cfg.multiplier_tol))
                    grid.change_mask[static_cast<size_t>(iy) * cfg.nx + ix] = 1;
            }
        }

    std::set<std::tuple<bool, int, int, int>> structural;
    for (const auto& c : grid.cells)
        structural.insert({c.valid, c.attracting_cycles, c.ghost_count, c.basin_label_count});
    grid.distinct_signatures = static_cast<int>(structural.size());
    return grid;
}

} // namespace pmt
