#pragma once

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "pmt/analysis.hpp"
#include "pmt/sweep.hpp"

namespace pmt {

// Reports are emitted as JSON with object keys in sorted order (the default
// object representation), so identical runs serialize byte-identically.

inline nlohmann::json json_point(const SpherePoint& p) {
    if (p.is_infinity()) return "inf";
    return nlohmann::json::array({p.value().real(), p.value().imag()});
}

inline nlohmann::json json_complex(cplx z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

inline nlohmann::json census_json(const std::vector<PeriodicPoint>& census) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : census) {
        arr.push_back({{"point", json_point(p.point)},
                       {"word", word_to_string(p.word)},
                       {"period", p.word.size()},
                       {"multiplier", json_complex(p.multiplier)},
                       {"kind", to_string(p.kind)},
                       {"consistency", p.consistency == ItineraryMatch::Consistent
                                           ? "consistent"
                                           : "closure"}});
    }
    return arr;
}

inline nlohmann::json expanding_json(const ExpandingResult& e) {
    nlohmann::json j;
    switch (e.kind) {
        case ExpandingResult::Kind::Expanding:
            j["verdict"] = "expanding";
            j["N"] = e.N;
            j["min_product"] = e.min_product;
            j["skipped_samples"] = e.skipped;
            break;
        case ExpandingResult::Kind::NotExpanding:
            j["verdict"] = "not-expanding";
            j["witness"] = json_point(e.witness);
            j["witness_product"] = e.witness_product;
            j["witness_N"] = e.N;
            break;
        case ExpandingResult::Kind::EmptyAlpha:
            j["verdict"] = "empty-alpha";
            break;
    }
    return j;
}

inline nlohmann::json hyperbolicity_json(const HyperbolicityResult& h) {
    nlohmann::json j;
    switch (h.verdict) {
        case HyperbolicityResult::Verdict::Hyperbolic: j["verdict"] = "hyperbolic"; break;
        case HyperbolicityResult::Verdict::NotHyperbolic: j["verdict"] = "not-hyperbolic"; break;
        case HyperbolicityResult::Verdict::Inconclusive: j["verdict"] = "inconclusive"; break;
    }
    j["reason"] = h.reason;
    j["unresolved_fraction"] = h.unresolved_fraction;
    j["wandering_suspects"] = h.wandering_suspects;
    j["census"] = census_json(h.census);
    return j;
}

inline nlohmann::json schottky_json(const SchottkyResult& s) {
    nlohmann::json j;
    j["pass"] = s.pass;
    nlohmann::json lv = nlohmann::json::array();
    for (const auto& l : s.levels) {
        nlohmann::json e{{"level", l.level}, {"pass", l.pass}};
        if (l.level == 1) e["branch_case"] = l.branch_case;
        if (!l.pass && !l.witness_word.empty()) e["witness_word"] = word_to_string(l.witness_word);
        lv.push_back(e);
    }
    j["levels"] = lv;
    return j;
}

inline nlohmann::json stability_json(const StabilityReport& rep) {
    nlohmann::json j;
    nlohmann::json comps = nlohmann::json::array();
    for (auto c : rep.component_classes) comps.push_back(to_string(c));
    j["component_classes"] = comps;
    j["loxodromic_components"] = rep.loxodromic_components;
    j["hyperbolicity"] = hyperbolicity_json(rep.hyperbolicity);
    j["alpha_expanding"] = expanding_json(rep.expanding);
    j["alpha_empty"] = rep.alpha.empty_alpha;
    j["alpha_sample_count"] = rep.alpha.points.size();
    j["schottky"] = schottky_json(rep.schottky);
    j["sufficient_conditions_met"] = rep.sufficient_conditions_met;
    j["config"] = {{"max_word_len", rep.config.analysis.max_word_len},
                   {"tol", rep.config.analysis.tol},
                   {"tol_boundary", rep.config.analysis.tolB},
                   {"web_depth", rep.config.web_depth},
                   {"web_min_arc", rep.config.web_min_arc},
                   {"schottky_depth", rep.config.schottky_depth},
                   {"alpha_nmax", rep.config.alpha_Nmax},
                   {"alpha_budget", rep.config.alpha_budget},
                   {"raster_iters", rep.config.hyper.raster_iters},
                   {"random_seeds", rep.config.hyper.random_seeds},
                   {"rng_seed", rep.config.hyper.rng_seed}};
    return j;
}

inline nlohmann::json web_summary_json(const SpiderwebApprox& web) {
    nlohmann::json j;
    j["depth"] = web.depth;
    j["min_arc_chordal"] = web.min_arc_chordal;
    nlohmann::json lv = nlohmann::json::array();
    for (size_t l = 0; l < web.stats.size(); ++l) {
        lv.push_back({{"level", l},
                      {"arcs", web.stats[l].arc_count},
                      {"total_chordal_length", web.stats[l].total_chordal_length},
                      {"truncated_arcs", web.stats[l].truncated_count},
                      {"truncated_length", web.stats[l].truncated_length}});
    }
    j["levels"] = lv;
    return j;
}

inline nlohmann::json sweep_json(const SweepGrid& grid) {
    nlohmann::json j;
    j["nx"] = grid.config.nx;
    j["ny"] = grid.config.ny;
    j["re"] = nlohmann::json::array({grid.config.re0, grid.config.re1});
    j["im"] = nlohmann::json::array({grid.config.im0, grid.config.im1});
    j["distinct_signatures"] = grid.distinct_signatures;
    nlohmann::json cells = nlohmann::json::array();
    for (int iy = 0; iy < grid.config.ny; ++iy)
        for (int ix = 0; ix < grid.config.nx; ++ix) {
            const auto& c = grid.cells[static_cast<size_t>(iy) * grid.config.nx + ix];
            nlohmann::json mult = nlohmann::json::array();
            // multipliers quantized for reproducible golden files
            for (cplx m : c.attracting_multipliers)
                mult.push_back(nlohmann::json::array({std::round(m.real() * 1000.0) / 1000.0,
                                                      std::round(m.imag() * 1000.0) / 1000.0}));
            cells.push_back({{"param", json_complex(grid.cell_param(ix, iy))},
                             {"valid", c.valid},
                             {"attracting_cycles", c.attracting_cycles},
                             {"ghost_count", c.ghost_count},
                             {"basin_labels", c.basin_label_count},
                             {"multipliers", mult},
                             {"changed", grid.change_mask[static_cast<size_t>(iy) *
                                                              grid.config.nx +
                                                          ix] != 0}});
        }
    j["cells"] = cells;
    return j;
}

// line format: level word A,Bre,Bim,D span   (word and indices 1-based;
// span is `full` or `t0,t1` in radians on the circline parameterization)
inline void write_arcs_text(std::ostream& os, const SpiderwebApprox& web) {
    os << std::setprecision(17);
    os << "# level word circline(A,B_re,B_im,D) span(t0,t1)\n";
    for (const auto& level : web.levels)
        for (const Arc& a : level) {
            os << a.level << ' ' << (a.word.empty() ? "-" : word_to_string(a.word)) << ' '
               << a.circline.A() << ',' << a.circline.B().real() << ',' << a.circline.B().imag()
               << ',' << a.circline.D() << ' ';
            if (a.full)
                os << "full";
            else
                os << a.t0 << ',' << a.t1;
            os << '\n';
        }
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(ErrorKind::ConfigError, "cannot open " + path);
    f << content;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(ErrorKind::ConfigError, "cannot open " + path);
    f << j.dump(2) << "\n";
}

} // namespace pmt
