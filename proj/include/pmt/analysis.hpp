#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pmt/raster.hpp"
#include "pmt/spiderweb.hpp"

namespace pmt {

enum class PeriodicKind { Attracting, Repelling, Elliptic, Parabolic, Identity, Ghost };

inline const char* to_string(PeriodicKind k) {
    switch (k) {
        case PeriodicKind::Attracting: return "attracting";
        case PeriodicKind::Repelling: return "repelling";
        case PeriodicKind::Elliptic: return "elliptic";
        case PeriodicKind::Parabolic: return "parabolic";
        case PeriodicKind::Identity: return "identity";
        case PeriodicKind::Ghost: return "ghost";
    }
    return "?";
}

struct PeriodicPoint {
    SpherePoint point;
    Word word; // primitive itinerary starting at this point
    cplx multiplier;
    PeriodicKind kind = PeriodicKind::Attracting;
    ItineraryMatch consistency = ItineraryMatch::Consistent;
    bool ghost_verified = false;
};

struct AnalysisConfig {
    int max_word_len = 6;
    double tol = 1e-9;           // point dedup / residual tolerance
    double tolB = 1e-9;          // boundary snap
    double neutral_band = 1e-7;  // ||m|-1| <= band -> neutral taxonomy
    int max_root_order = 64;     // identity detection m^q = 1
    long word_cap = 1000000;
    double ghost_web_tol = 1e-6; // proximity to the pre-discontinuity approximation
};

namespace detail {

inline bool word_is_primitive(const Word& w) {
    size_t n = w.size();
    for (size_t d = 1; d < n; ++d) {
        if (n % d) continue;
        bool rep = true;
        for (size_t i = d; i < n && rep; ++i) rep = w[i] == w[i % d];
        if (rep) return false;
    }
    return true;
}

// sorted enumeration of all primitive words of length 1..max_len
inline std::vector<Word> primitive_words(int K, int max_len, long cap) {
    std::vector<Word> out;
    long total = 0;
    for (int n = 1; n <= max_len; ++n) {
        long count = 1;
        for (int i = 0; i < n; ++i) {
            count *= K;
            if (count > cap) raise(ErrorKind::DepthOverflow, "word enumeration cap exceeded");
        }
        total += count;
        if (total > cap) raise(ErrorKind::DepthOverflow, "word enumeration cap exceeded");
        Word w(static_cast<size_t>(n), 0);
        for (long idx = 0; idx < count; ++idx) {
            long v = idx;
            for (int i = n - 1; i >= 0; --i) {
                w[static_cast<size_t>(i)] = static_cast<int>(v % K);
                v /= K;
            }
            if (word_is_primitive(w)) out.push_back(w);
        }
    }
    return out;
}

inline bool is_root_of_unity(cplx m, int max_order, double tol) {
    cplx p = m;
    for (int q = 1; q <= max_order; ++q) {
        if (std::abs(p - cplx(1.0, 0.0)) <= tol * q) return true;
        p *= m;
    }
    return false;
}

// seed 8 points beside pp inside region `k` and require their orbits to come
// back to pp
inline bool verify_ghost_orbit(const PiecewiseMoebius& F, const SpherePoint& pp, int k,
                               double tolB) {
    int seeded = 0, confirmed = 0;
    for (int j = 0; j < 8; ++j) {
        double th = 2.0 * kPi * j / 8.0;
        SpherePoint s = pp.is_infinity() ? SpherePoint(cplx(1e3, 0) * std::polar(1.0, th))
                                         : SpherePoint(pp.value() + std::polar(1e-3, th));
        auto lr = F.partition().locate(s, tolB);
        if (!lr.is_region() || lr.region != k) continue;
        ++seeded;
        OrbitRecord o = F.orbit(s, 4000, tolB, 1e-7);
        if (o.termination == OrbitRecord::Termination::Converged &&
            chordal_dist(o.limit, pp) < 1e-4)
            ++confirmed;
        else
            return false;
    }
    return seeded > 0 && confirmed == seeded;
}

} // namespace detail

// Fixed points of word compositions whose itineraries are realizable, with the
// taxonomy filled in. `web` sharpens ghost detection; without it proximity is
// measured to B itself.
inline std::vector<PeriodicPoint> find_periodic(const PiecewiseMoebius& F,
                                                const AnalysisConfig& cfg = {},
                                                const SpiderwebApprox* web = nullptr) {
    std::vector<PeriodicPoint> cands;
    for (const Word& w : detail::primitive_words(F.num_regions(), cfg.max_word_len,
                                                 cfg.word_cap)) {
        MoebiusMap m = F.word_map(w);
        if (classify(m) == MapClass::Identity) continue;
        for (const FixedPoint& fp : fixed_points(m)) {
            ItineraryMatch it = F.itinerary_consistent(fp.point, w, cfg.tolB);
            if (it == ItineraryMatch::Inconsistent) continue;
            PeriodicPoint pp;
            pp.point = fp.point;
            pp.word = w;
            pp.multiplier = fp.multiplier;
            pp.consistency = it;

            double am = std::abs(fp.multiplier);
            if (classify(m) == MapClass::Parabolic) {
                pp.kind = PeriodicKind::Parabolic;
            } else if (std::abs(am - 1.0) <= cfg.neutral_band) {
                pp.kind = detail::is_root_of_unity(fp.multiplier, cfg.max_root_order, 1e-7)
                              ? PeriodicKind::Identity
                              : PeriodicKind::Elliptic;
            } else if (am > 1.0) {
                pp.kind = PeriodicKind::Repelling;
            } else {
                pp.kind = PeriodicKind::Attracting;
                if (it == ItineraryMatch::ConsistentOnClosure) {
                    double dweb = web ? web->dist_to_levels(fp.point, web->depth)
                                      : F.partition().boundary_dist(fp.point);
                    if (dweb <= cfg.ghost_web_tol &&
                        detail::verify_ghost_orbit(F, fp.point, w.front(), cfg.tolB)) {
                        pp.kind = PeriodicKind::Ghost;
                        pp.ghost_verified = true;
                    }
                }
            }
            cands.push_back(std::move(pp));
        }
    }

    // dedup coincident points; prefer strictly consistent readings, then
    // verified ghosts, then short words
    auto rank = [](const PeriodicPoint& p) {
        return std::tuple<int, int, size_t, Word>(
            p.consistency == ItineraryMatch::Consistent ? 0 : 1, p.ghost_verified ? 0 : 1,
            p.word.size(), p.word);
    };
    std::vector<PeriodicPoint> out;
    for (const PeriodicPoint& c : cands) {
        bool merged = false;
        for (PeriodicPoint& o : out) {
            if (chordal_dist(c.point, o.point) <= cfg.tol) {
                if (rank(c) < rank(o)) o = c;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const PeriodicPoint& x, const PeriodicPoint& y) {
        if (x.word.size() != y.word.size()) return x.word.size() < y.word.size();
        if (x.word != y.word) return x.word < y.word;
        double xr = x.point.is_infinity() ? 1e60 : x.point.value().real();
        double yr = y.point.is_infinity() ? 1e60 : y.point.value().real();
        if (xr != yr) return xr < yr;
        double xi = x.point.is_infinity() ? 0 : x.point.value().imag();
        double yi = y.point.is_infinity() ? 0 : y.point.value().imag();
        return xi < yi;
    });
    return out;
}

// group attracting points into cycles (orbit identification up to cfg.tol)
inline std::vector<std::vector<PeriodicPoint>> attracting_cycles(
    const PiecewiseMoebius& F, const std::vector<PeriodicPoint>& census, double tol = 1e-9) {
    std::vector<std::vector<PeriodicPoint>> cycles;
    std::vector<bool> used(census.size(), false);
    for (size_t i = 0; i < census.size(); ++i) {
        if (used[i] || census[i].kind != PeriodicKind::Attracting) continue;
        std::vector<PeriodicPoint> cyc{census[i]};
        used[i] = true;
        SpherePoint z = census[i].point;
        for (size_t step = 0; step + 1 < census[i].word.size(); ++step) {
            z = F.map(census[i].word[step]).apply(z);
            for (size_t j = 0; j < census.size(); ++j)
                if (!used[j] && census[j].kind == PeriodicKind::Attracting &&
                    chordal_dist(census[j].point, z) <= tol) {
                    used[j] = true;
                    cyc.push_back(census[j]);
                }
        }
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

inline AttractorCatalog attractor_catalog(const PiecewiseMoebius& F,
                                          const std::vector<PeriodicPoint>& census) {
    AttractorCatalog cat;
    for (const auto& cyc : attracting_cycles(F, census)) {
        std::vector<SpherePoint> pts;
        for (const auto& p : cyc) pts.push_back(p.point);
        cat.cycles.push_back(std::move(pts));
    }
    return cat;
}

// --- omega limits ------------------------------------------------------------

struct OmegaApprox {
    bool hit_boundary = false;
    std::vector<SpherePoint> clusters;
};

inline OmegaApprox omega_limit_approx(const PiecewiseMoebius& F, const SpherePoint& p, int N,
                                      double tail_fraction = 0.25, double tolB = 1e-9,
                                      double cluster_radius = 1e-6) {
    OmegaApprox out;
    OrbitRecord o = F.orbit(p, N, tolB, 1e-12); // effectively no early stop
    if (o.termination == OrbitRecord::Termination::HitBoundary ||
        o.termination == OrbitRecord::Termination::NumericalLoss) {
        out.hit_boundary = true;
        return out;
    }
    size_t len = o.points.size();
    size_t start = len - std::max<size_t>(1, static_cast<size_t>(tail_fraction * len));
    for (size_t i = start; i < len; ++i) {
        bool merged = false;
        for (const SpherePoint& c : out.clusters)
            if (chordal_dist(c, o.points[i]) <= cluster_radius) { merged = true; break; }
        if (!merged) out.clusters.push_back(o.points[i]);
    }
    return out;
}

// --- alpha sampling and expansion --------------------------------------------

struct AlphaSamples {
    bool empty_alpha = false;
    std::vector<SpherePoint> points;
};

// Repelling/parabolic periodic points plus the endpoints of the deepest
// clipped arcs; full circles contribute no endpoints.
inline AlphaSamples alpha_sample(const PiecewiseMoebius& F, const SpiderwebApprox& web,
                                 const std::vector<PeriodicPoint>& census, int budget = 512) {
    (void)F;
    AlphaSamples out;
    for (const auto& p : census)
        if (p.kind == PeriodicKind::Repelling || p.kind == PeriodicKind::Parabolic)
            out.points.push_back(p.point);
    bool any_arcs = false;
    for (size_t l = 1; l < web.levels.size(); ++l) any_arcs |= !web.levels[l].empty();
    for (int l = static_cast<int>(web.levels.size()) - 1;
         l >= 1 && static_cast<int>(out.points.size()) < budget; --l) {
        const auto& lvl = web.levels[static_cast<size_t>(l)];
        if (lvl.empty()) continue;
        for (const Arc& a : lvl) {
            for (const SpherePoint& e : a.endpoints()) {
                if (static_cast<int>(out.points.size()) >= budget) break;
                out.points.push_back(e);
            }
        }
        break; // deepest populated level only
    }
    // no repelling/parabolic points and no endpoint evidence: report the
    // marker rather than letting the expansion check pass vacuously
    if (out.points.empty()) out.empty_alpha = true;
    (void)any_arcs;
    return out;
}

struct ExpandingResult {
    enum class Kind { Expanding, NotExpanding, EmptyAlpha };
    Kind kind = Kind::EmptyAlpha;
    int N = 0;
    double min_product = 0.0; // over surviving samples at N
    long skipped = 0;         // samples whose orbit hit B within N steps
    SpherePoint witness;      // NotExpanding
    double witness_product = 0.0;
};

inline ExpandingResult alpha_expanding_check(const PiecewiseMoebius& F,
                                             const std::vector<SpherePoint>& samples, int Nmax,
                                             double tolB = 1e-9) {
    ExpandingResult res;
    if (samples.empty()) return res;

    // cumulative spherical-derivative products along each sample orbit
    std::vector<std::vector<double>> products(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        SpherePoint z = samples[i];
        double prod = 1.0;
        for (int n = 0; n < Nmax; ++n) {
            LocateResult lr = F.partition().locate(z, tolB);
            if (!lr.is_region()) break;
            prod *= spherical_deriv(F.map(lr.region), z);
            z = F.map(lr.region).apply(z);
            products[i].push_back(prod);
        }
    }
    for (int N = 1; N <= Nmax; ++N) {
        double minp = 0.0;
        long skipped = 0, alive = 0;
        bool all_expand = true;
        SpherePoint worst;
        for (size_t i = 0; i < samples.size(); ++i) {
            if (static_cast<int>(products[i].size()) < N) { ++skipped; continue; }
            double p = products[i][static_cast<size_t>(N - 1)];
            if (alive == 0 || p < minp) { minp = p; worst = samples[i]; }
            ++alive;
            if (p <= 1.0 + 1e-9) all_expand = false;
        }
        if (alive > 0 && all_expand) {
            res.kind = ExpandingResult::Kind::Expanding;
            res.N = N;
            res.min_product = minp;
            res.skipped = skipped;
            return res;
        }
        if (alive > 0) {
            res.witness = worst;
            res.witness_product = minp;
            res.N = N;
        }
    }
    res.kind = ExpandingResult::Kind::NotExpanding;
    return res;
}

// --- hyperbolicity ------------------------------------------------------------

struct HyperbolicityResult {
    enum class Verdict { Hyperbolic, NotHyperbolic, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    std::string reason;
    std::vector<PeriodicPoint> census;
    double unresolved_fraction = 0.0;
    long wandering_suspects = 0;
};

struct HyperbolicityConfig {
    AnalysisConfig analysis;
    int orbit_steps = 3000;
    int random_seeds = 200;
    std::uint64_t rng_seed = 977;
    double omega_match_tol = 1e-6;
    PlaneWindow window{-2.0, 2.0, -2.0, 2.0, 160, 160};
    int raster_iters = 300;
};

inline HyperbolicityResult hyperbolicity_check(const PiecewiseMoebius& F,
                                               const HyperbolicityConfig& cfg = {},
                                               const SpiderwebApprox* web = nullptr,
                                               const std::vector<PeriodicPoint>* census0 =
                                                   nullptr) {
    HyperbolicityResult res;
    res.census = census0 ? *census0 : find_periodic(F, cfg.analysis, web);

    const PeriodicPoint* neutral = nullptr;
    const PeriodicPoint* ghost = nullptr;
    bool has_attracting = false;
    for (const auto& p : res.census) {
        if (p.kind == PeriodicKind::Elliptic || p.kind == PeriodicKind::Parabolic ||
            p.kind == PeriodicKind::Identity)
            if (!neutral) neutral = &p;
        if (p.kind == PeriodicKind::Ghost && !ghost) ghost = &p;
        if (p.kind == PeriodicKind::Attracting) has_attracting = true;
    }
    auto point_str = [](const SpherePoint& p) {
        if (p.is_infinity()) return std::string("inf");
        return std::to_string(p.value().real()) + (p.value().imag() < 0 ? "-" : "+") +
               std::to_string(std::abs(p.value().imag())) + "i";
    };
    if (neutral) {
        res.verdict = HyperbolicityResult::Verdict::NotHyperbolic;
        res.reason = std::string("neutral periodic point (") + to_string(neutral->kind) +
                     ") at " + point_str(neutral->point);
        return res;
    }
    if (ghost) {
        res.verdict = HyperbolicityResult::Verdict::NotHyperbolic;
        res.reason = "ghost-periodic point at " + point_str(ghost->point);
        return res;
    }
    if (!has_attracting) {
        res.verdict = HyperbolicityResult::Verdict::NotHyperbolic;
        res.reason = "no attracting periodic points";
        return res;
    }

    AttractorCatalog cat = attractor_catalog(F, res.census);
    auto near_attractor = [&](const SpherePoint& p) {
        for (const auto& cyc : cat.cycles)
            for (const auto& q : cyc)
                if (chordal_dist(p, q) <= cfg.omega_match_tol) return true;
        return false;
    };

    std::mt19937_64 rng(cfg.rng_seed);
    for (int s = 0; s < cfg.random_seeds; ++s) {
        SpherePoint seed = random_sphere_point(rng);
        if (!F.partition().locate(seed, cfg.analysis.tolB).is_region()) continue;
        OmegaApprox om = omega_limit_approx(F, seed, cfg.orbit_steps, 0.25, cfg.analysis.tolB);
        if (om.hit_boundary) continue;
        for (const auto& c : om.clusters)
            if (!near_attractor(c)) ++res.wandering_suspects;
    }

    RasterParams prm;
    prm.max_iter = cfg.raster_iters;
    RasterImage img = raster_classify(F, cfg.window, cat, prm);
    long unresolved = 0, nonboundary = 0;
    for (const auto& l : img.labels) {
        if (l.kind == PixelLabel::Kind::BoundaryDepth) continue;
        ++nonboundary;
        if (l.kind == PixelLabel::Kind::Unresolved) ++unresolved;
    }
    res.unresolved_fraction = nonboundary ? static_cast<double>(unresolved) / nonboundary : 0.0;

    if (res.wandering_suspects > 0 || res.unresolved_fraction >= 0.01) {
        res.verdict = HyperbolicityResult::Verdict::Inconclusive;
        res.reason = "wandering behavior suspected";
        return res;
    }
    res.verdict = HyperbolicityResult::Verdict::Hyperbolic;
    return res;
}

// --- Schottky-type hypothesis check -------------------------------------------

struct SchottkyLevelResult {
    int level = 0;
    bool pass = true;
    // level 1 only: which containment case each branch realizes
    std::vector<std::string> branch_case; // "all-inside" / "one-component" / "empty" / "cut"
    Word witness_word;                    // first clipped arc at this level
};

struct SchottkyResult {
    bool pass = true;
    std::vector<SchottkyLevelResult> levels;
};

inline SchottkyResult schottky_hypothesis_check(const PiecewiseMoebius& F,
                                                const SpiderwebApprox& web, int depth) {
    SchottkyResult out;
    if (static_cast<int>(web.levels.size()) - 1 < depth)
        raise(ErrorKind::BadParameter, "schottky check: web shallower than requested depth");

    SchottkyLevelResult l1;
    l1.level = 1;
    const auto& comps = F.partition().boundary_components();
    for (int k = 0; k < F.num_regions(); ++k) {
        int inside = 0, outside = 0, cut = 0;
        for (size_t j = 0; j < comps.size(); ++j) {
            Arc parent;
            parent.circline = comps[j];
            parent.full = true;
            parent.level = 0;
            parent.source_component = static_cast<int>(j);
            auto kept = detail::pull_back_arc(F, parent, k, 1e-12);
            if (kept.empty()) { ++outside; continue; }
            bool has_partial = false;
            for (const Arc& a : kept) has_partial |= !a.full;
            if (has_partial) ++cut;
            else ++inside;
        }
        std::string c;
        if (cut > 0) c = "cut";
        else if (inside == static_cast<int>(comps.size())) c = "all-inside";
        else if (inside == 1) c = "one-component";
        else if (inside == 0) c = "empty";
        else c = "cut"; // several-but-not-all components inside
        l1.branch_case.push_back(c);
        if (c == "cut") l1.pass = false;
    }
    out.pass = l1.pass;
    out.levels.push_back(l1);

    for (int n = 2; n <= depth; ++n) {
        SchottkyLevelResult lr;
        lr.level = n;
        for (const Arc& a : web.levels[static_cast<size_t>(n)]) {
            if (!a.full) {
                lr.pass = false;
                lr.witness_word = a.word;
                break;
            }
        }
        out.pass = out.pass && lr.pass;
        out.levels.push_back(lr);
    }
    return out;
}

// --- aggregated stability report ----------------------------------------------

struct StabilityConfig {
    AnalysisConfig analysis;
    HyperbolicityConfig hyper;
    int web_depth = 6;
    double web_min_arc = 1e-5;
    long web_arc_cap = 1000000;
    int schottky_depth = 5;
    int alpha_budget = 512;
    int alpha_Nmax = 8;
};

struct StabilityReport {
    std::vector<MapClass> component_classes;
    bool loxodromic_components = false;
    HyperbolicityResult hyperbolicity;
    ExpandingResult expanding;
    SchottkyResult schottky;
    AlphaSamples alpha;
    bool sufficient_conditions_met = false;
    StabilityConfig config;
};

inline StabilityReport stability_report(const PiecewiseMoebius& F,
                                        const StabilityConfig& cfg = {}) {
    StabilityReport rep;
    rep.config = cfg;
    rep.loxodromic_components = true;
    for (const auto& m : F.maps()) {
        MapClass c = classify(m);
        rep.component_classes.push_back(c);
        if (c != MapClass::Loxodromic) rep.loxodromic_components = false;
    }
    SpiderwebApprox web = backward_arcs(F, cfg.web_depth, cfg.web_min_arc, cfg.web_arc_cap);
    auto census = find_periodic(F, cfg.analysis, &web);
    HyperbolicityConfig hc = cfg.hyper;
    hc.analysis = cfg.analysis;
    rep.hyperbolicity = hyperbolicity_check(F, hc, &web, &census);
    rep.alpha = alpha_sample(F, web, census, cfg.alpha_budget);
    if (rep.alpha.empty_alpha) {
        rep.expanding.kind = ExpandingResult::Kind::EmptyAlpha;
    } else {
        rep.expanding = alpha_expanding_check(F, rep.alpha.points, cfg.alpha_Nmax,
                                              cfg.analysis.tolB);
    }
    rep.schottky = schottky_hypothesis_check(F, web, std::min(cfg.schottky_depth, cfg.web_depth));
    rep.sufficient_conditions_met =
        rep.loxodromic_components &&
        rep.hyperbolicity.verdict == HyperbolicityResult::Verdict::Hyperbolic &&
        rep.expanding.kind == ExpandingResult::Kind::Expanding && rep.schottky.pass;
    return rep;
}

} // namespace pmt
