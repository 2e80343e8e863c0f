#pragma once

#include <json.hpp>

#include <fstream>
#include <optional>
#include <set>
#include <string>

#include "pmt/analysis.hpp"
#include "pmt/presets.hpp"
#include "pmt/sweep.hpp"

namespace pmt {

using json = nlohmann::json;

namespace detail {

inline void check_keys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& ctx) {
    if (!obj.is_object()) raise(ErrorKind::ConfigError, ctx + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            raise(ErrorKind::ConfigError, ctx + ": unknown key '" + it.key() + "'");
}

inline cplx parse_complex(const json& v, const std::string& ctx) {
    if (v.is_number()) return cplx(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cplx(v[0].get<double>(), v[1].get<double>());
    raise(ErrorKind::ConfigError, ctx + ": complex literal must be [re, im]");
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json point_json(const SpherePoint& p) {
    if (p.is_infinity()) return "inf";
    return complex_json(p.value());
}

inline SpherePoint parse_point(const json& v, const std::string& ctx) {
    if (v.is_string() && v.get<std::string>() == "inf") return SpherePoint::infinity();
    return SpherePoint(parse_complex(v, ctx));
}

} // namespace detail

struct RenderConfig {
    PlaneWindow window;
    bool sphere_mode = false;
    int sphere_n = 400;
    RasterParams params;
    bool use_census_attractors = true;
    int census_len = 6;
};

struct WebConfig {
    int depth = 8;
    double min_arc_chordal = 1e-5;
    long arc_cap = 1000000;
};

struct SceneConfig {
    std::optional<std::string> preset_name;
    json preset_params = json::object();
    std::optional<json> explicit_regions;
    std::optional<json> explicit_maps;
    RenderConfig render;
    WebConfig web;
    StabilityConfig stability;
    SweepConfig sweep;
    std::string sweep_param = "lambda";
    std::uint64_t seed = 20240901;
    json raw = json::object();
};

namespace detail {

inline PiecewiseMoebius build_preset(const std::string& name, const json& params) {
    auto get = [&](const char* key) -> json {
        if (!params.contains(key))
            raise(ErrorKind::ConfigError, std::string("preset ") + name + ": missing parameter '" +
                                              key + "'");
        return params.at(key);
    };
    if (name == "two_scalings") {
        check_keys(params, {"lambda"}, name);
        return presets::two_scalings(parse_complex(get("lambda"), name));
    }
    if (name == "translation_scaling") {
        check_keys(params, {}, name);
        return presets::translation_scaling();
    }
    if (name == "ghost") {
        check_keys(params, {}, name);
        return presets::ghost();
    }
    if (name == "hiper_no_ss") {
        check_keys(params, {"lambda"}, name);
        return presets::hiper_no_ss(parse_complex(get("lambda"), name));
    }
    if (name == "expand_no_hyper") {
        check_keys(params, {}, name);
        return presets::expand_no_hyper();
    }
    if (name == "irrational_annulus") {
        check_keys(params, {}, name);
        return presets::irrational_annulus();
    }
    if (name == "perturbed_pair") {
        check_keys(params, {"c", "variant"}, name);
        if (params.contains("variant"))
            return presets::perturbed_pair_variant(params.at("variant").get<std::string>());
        return presets::perturbed_pair(parse_complex(get("c"), name));
    }
    if (name == "tent") {
        check_keys(params, {"center", "radius", "lambda"}, name);
        return presets::tent(parse_complex(get("center"), name), get("radius").get<double>(),
                             parse_complex(get("lambda"), name));
    }
    raise(ErrorKind::ConfigError, "unknown preset '" + name + "'");
}

inline Circline parse_circline(const json& v, const std::string& ctx) {
    check_keys(v, {"circle", "line"}, ctx);
    if (v.contains("circle")) {
        const json& c = v.at("circle");
        check_keys(c, {"center", "radius"}, ctx + ".circle");
        return Circline::circle(parse_complex(c.at("center"), ctx), c.at("radius").get<double>());
    }
    if (v.contains("line")) {
        const json& l = v.at("line");
        check_keys(l, {"point", "normal"}, ctx + ".line");
        return Circline::line(parse_complex(l.at("point"), ctx),
                              parse_complex(l.at("normal"), ctx));
    }
    raise(ErrorKind::ConfigError, ctx + ": constraint needs 'circle' or 'line'");
}

inline Side parse_side(const json& v, const std::string& ctx) {
    std::string s = v.get<std::string>();
    if (s == "inside") return Side::Inside;
    if (s == "outside") return Side::Outside;
    raise(ErrorKind::ConfigError, ctx + ": side must be 'inside' or 'outside'");
}

inline SpherePoint find_witness(const Region& r, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 200000; ++t) {
        SpherePoint p = random_sphere_point(rng);
        if (r.contains(p, 1e-9)) return p;
    }
    raise(ErrorKind::ConfigError,
          "region " + std::to_string(r.index + 1) + ": could not find an interior point");
}

inline PiecewiseMoebius build_explicit(const json& regions, const json& maps,
                                       std::uint64_t seed) {
    if (!regions.is_array() || regions.size() < 2)
        raise(ErrorKind::ConfigError, "regions: need an array of at least 2 entries");
    std::vector<Region> regs;
    for (size_t i = 0; i < regions.size(); ++i) {
        std::string ctx = "regions[" + std::to_string(i) + "]";
        check_keys(regions[i], {"constraints", "witness"}, ctx);
        Region r;
        r.index = static_cast<int>(i);
        const json& cons = regions[i].at("constraints");
        if (!cons.is_array() || cons.empty())
            raise(ErrorKind::ConfigError, ctx + ": constraints must be a non-empty array");
        for (size_t j = 0; j < cons.size(); ++j) {
            std::string cctx = ctx + ".constraints[" + std::to_string(j) + "]";
            check_keys(cons[j], {"circle", "line", "side"}, cctx);
            json geom = cons[j];
            geom.erase("side");
            r.constraints.push_back(
                {parse_circline(geom, cctx), parse_side(cons[j].at("side"), cctx)});
        }
        r.witness = regions[i].contains("witness")
                        ? parse_point(regions[i].at("witness"), ctx + ".witness")
                        : find_witness(r, seed + i);
        regs.push_back(std::move(r));
    }
    if (!maps.is_array() || maps.size() != regions.size())
        raise(ErrorKind::ConfigError, "maps: need one coefficient quadruple per region");
    std::vector<MoebiusMap> ms;
    for (size_t i = 0; i < maps.size(); ++i) {
        const json& q = maps[i];
        if (!q.is_array() || q.size() != 4)
            raise(ErrorKind::ConfigError, "maps[" + std::to_string(i) + "]: need [a,b,c,d]");
        std::string ctx = "maps[" + std::to_string(i) + "]";
        ms.emplace_back(parse_complex(q[0], ctx), parse_complex(q[1], ctx),
                        parse_complex(q[2], ctx), parse_complex(q[3], ctx));
    }
    return PiecewiseMoebius(Partition(regs), ms);
}

} // namespace detail

inline SceneConfig parse_scene(const json& root) {
    SceneConfig sc;
    sc.raw = root;
    detail::check_keys(root,
                       {"preset", "regions", "maps", "render", "spiderweb", "analysis", "sweep",
                        "seed"},
                       "scene");
    if (root.contains("seed")) sc.seed = root.at("seed").get<std::uint64_t>();

    if (root.contains("preset")) {
        detail::check_keys(root.at("preset"), {"name", "params"}, "preset");
        if (!root.at("preset").contains("name"))
            raise(ErrorKind::ConfigError, "preset: missing 'name'");
        sc.preset_name = root.at("preset").at("name").get<std::string>();
        if (root.at("preset").contains("params")) sc.preset_params = root.at("preset").at("params");
        if (root.contains("regions") || root.contains("maps"))
            raise(ErrorKind::ConfigError, "scene: give either a preset or explicit regions/maps");
    } else {
        if (!root.contains("regions") || !root.contains("maps"))
            raise(ErrorKind::ConfigError, "scene: need a preset or explicit regions+maps");
        sc.explicit_regions = root.at("regions");
        sc.explicit_maps = root.at("maps");
    }

    if (root.contains("render")) {
        const json& r = root.at("render");
        detail::check_keys(r,
                           {"window", "resolution", "sphere", "sphere_n", "max_iter",
                            "eps_boundary", "tol_converge", "attractors", "census_len"},
                           "render");
        if (r.contains("window")) {
            const json& w = r.at("window");
            if (!w.is_array() || w.size() != 4)
                raise(ErrorKind::ConfigError, "render.window: need [re0, re1, im0, im1]");
            sc.render.window.re0 = w[0].get<double>();
            sc.render.window.re1 = w[1].get<double>();
            sc.render.window.im0 = w[2].get<double>();
            sc.render.window.im1 = w[3].get<double>();
        }
        if (r.contains("resolution")) {
            sc.render.window.nx = r.at("resolution")[0].get<int>();
            sc.render.window.ny = r.at("resolution")[1].get<int>();
        }
        if (r.contains("sphere")) sc.render.sphere_mode = r.at("sphere").get<bool>();
        if (r.contains("sphere_n")) sc.render.sphere_n = r.at("sphere_n").get<int>();
        if (r.contains("max_iter")) sc.render.params.max_iter = r.at("max_iter").get<int>();
        if (r.contains("eps_boundary"))
            sc.render.params.eps_boundary = r.at("eps_boundary").get<double>();
        if (r.contains("tol_converge"))
            sc.render.params.tol_converge = r.at("tol_converge").get<double>();
        if (r.contains("attractors"))
            sc.render.use_census_attractors = r.at("attractors").get<std::string>() != "none";
        if (r.contains("census_len")) sc.render.census_len = r.at("census_len").get<int>();
    }

    if (root.contains("spiderweb")) {
        const json& w = root.at("spiderweb");
        detail::check_keys(w, {"depth", "min_arc_chordal", "arc_cap"}, "spiderweb");
        if (w.contains("depth")) sc.web.depth = w.at("depth").get<int>();
        if (w.contains("min_arc_chordal"))
            sc.web.min_arc_chordal = w.at("min_arc_chordal").get<double>();
        if (w.contains("arc_cap")) sc.web.arc_cap = w.at("arc_cap").get<long>();
    }

    if (root.contains("analysis")) {
        const json& a = root.at("analysis");
        detail::check_keys(a,
                           {"max_word_len", "tol", "tol_boundary", "web_depth", "web_min_arc",
                            "schottky_depth", "alpha_nmax", "alpha_budget", "raster_iters"},
                           "analysis");
        if (a.contains("max_word_len"))
            sc.stability.analysis.max_word_len = a.at("max_word_len").get<int>();
        if (a.contains("tol")) sc.stability.analysis.tol = a.at("tol").get<double>();
        if (a.contains("tol_boundary"))
            sc.stability.analysis.tolB = a.at("tol_boundary").get<double>();
        if (a.contains("web_depth")) sc.stability.web_depth = a.at("web_depth").get<int>();
        if (a.contains("web_min_arc"))
            sc.stability.web_min_arc = a.at("web_min_arc").get<double>();
        if (a.contains("schottky_depth"))
            sc.stability.schottky_depth = a.at("schottky_depth").get<int>();
        if (a.contains("alpha_nmax")) sc.stability.alpha_Nmax = a.at("alpha_nmax").get<int>();
        if (a.contains("alpha_budget"))
            sc.stability.alpha_budget = a.at("alpha_budget").get<int>();
        if (a.contains("raster_iters"))
            sc.stability.hyper.raster_iters = a.at("raster_iters").get<int>();
    }

    if (root.contains("sweep")) {
        const json& s = root.at("sweep");
        detail::check_keys(s,
                           {"param", "re", "im", "nx", "ny", "census_len", "window", "resolution",
                            "raster_iters", "multiplier_tol", "min_basin_pixels"},
                           "sweep");
        if (s.contains("param")) sc.sweep_param = s.at("param").get<std::string>();
        if (s.contains("re")) {
            sc.sweep.re0 = s.at("re")[0].get<double>();
            sc.sweep.re1 = s.at("re")[1].get<double>();
        }
        if (s.contains("im")) {
            sc.sweep.im0 = s.at("im")[0].get<double>();
            sc.sweep.im1 = s.at("im")[1].get<double>();
        }
        if (s.contains("nx")) sc.sweep.nx = s.at("nx").get<int>();
        if (s.contains("ny")) sc.sweep.ny = s.at("ny").get<int>();
        if (s.contains("census_len")) sc.sweep.census_len = s.at("census_len").get<int>();
        if (s.contains("window")) {
            const json& w = s.at("window");
            sc.sweep.window.re0 = w[0].get<double>();
            sc.sweep.window.re1 = w[1].get<double>();
            sc.sweep.window.im0 = w[2].get<double>();
            sc.sweep.window.im1 = w[3].get<double>();
        }
        if (s.contains("resolution")) {
            sc.sweep.window.nx = s.at("resolution")[0].get<int>();
            sc.sweep.window.ny = s.at("resolution")[1].get<int>();
        }
        if (s.contains("raster_iters")) sc.sweep.raster_iters = s.at("raster_iters").get<int>();
        if (s.contains("multiplier_tol"))
            sc.sweep.multiplier_tol = s.at("multiplier_tol").get<double>();
        if (s.contains("min_basin_pixels"))
            sc.sweep.min_basin_pixels = s.at("min_basin_pixels").get<int>();
    }
    return sc;
}

inline SceneConfig load_scene(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(ErrorKind::ConfigError, "cannot open scene file " + path);
    json root;
    try {
        f >> root;
    } catch (const std::exception& e) {
        raise(ErrorKind::ConfigError, std::string("scene parse error: ") + e.what());
    }
    return parse_scene(root);
}

inline PiecewiseMoebius build_pmt(const SceneConfig& sc) {
    if (sc.preset_name) return detail::build_preset(*sc.preset_name, sc.preset_params);
    return detail::build_explicit(*sc.explicit_regions, *sc.explicit_maps, sc.seed);
}

// parameterized family for sweeps; substitutes the named complex parameter
inline std::function<PiecewiseMoebius(cplx)> build_family(const SceneConfig& sc) {
    if (!sc.preset_name)
        raise(ErrorKind::ConfigError, "sweep: needs a preset-based scene with a free parameter");
    std::string name = *sc.preset_name;
    json params = sc.preset_params;
    std::string key = sc.sweep_param;
    return [name, params, key](cplx lam) {
        json p = params;
        p[key] = detail::complex_json(lam);
        return detail::build_preset(name, p);
    };
}

// explicit scene JSON for a PMT (used by `presets --export` and round trips)
inline json scene_from_pmt(const PiecewiseMoebius& F) {
    json regions = json::array();
    for (const auto& r : F.partition().regions()) {
        json cons = json::array();
        for (const auto& c : r.constraints) {
            json g;
            if (c.circline.is_circle()) {
                g["circle"] = {{"center", detail::complex_json(c.circline.center())},
                               {"radius", c.circline.radius()}};
            } else {
                g["line"] = {{"point", detail::complex_json(c.circline.line_foot())},
                             {"normal", detail::complex_json(c.circline.B())}};
            }
            // fold the circline orientation into the side so that the
            // exported constraint means the same point set
            Side side = c.required;
            if (c.circline.orientation() < 0)
                side = side == Side::Inside ? Side::Outside : Side::Inside;
            g["side"] = side == Side::Inside ? "inside" : "outside";
            cons.push_back(g);
        }
        regions.push_back({{"constraints", cons}, {"witness", detail::point_json(r.witness)}});
    }
    json maps = json::array();
    for (const auto& m : F.maps())
        maps.push_back(json::array({detail::complex_json(m.a()), detail::complex_json(m.b()),
                                    detail::complex_json(m.c()), detail::complex_json(m.d())}));
    return json{{"regions", regions}, {"maps", maps}};
}

} // namespace pmt
