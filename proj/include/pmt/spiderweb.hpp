#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pmt/pmt_map.hpp"

namespace pmt {

inline double wrap_angle(double t) {
    // into (-pi, pi]
    double w = std::remainder(t, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

// One leveled piece of F^{-n}(B): a circline with an angular span, the
// itinerary word that carries it onto a boundary component, and a midpoint
// witness inside region word[0].
struct Arc {
    Circline circline;
    bool full = true;
    double t0 = 0.0, t1 = 0.0; // CCW span from t0 to t1 when !full
    SpherePoint midpoint;
    Word word;
    int level = 0;
    int source_component = 0;

    double span_length() const {
        if (full) return 2.0 * kPi;
        double d = std::fmod(t1 - t0, 2.0 * kPi);
        if (d < 0) d += 2.0 * kPi;
        return d == 0.0 ? 2.0 * kPi : d;
    }

    bool span_contains(double t, double ang_eps = 1e-9) const {
        if (full) return true;
        double d = std::fmod(t - t0, 2.0 * kPi);
        if (d < 0) d += 2.0 * kPi;
        return d <= span_length() + ang_eps || d >= 2.0 * kPi - ang_eps;
    }

    SpherePoint point_on(double frac) const { // frac in [0,1] along the span
        return circline.point_at(wrap_angle(t0 + frac * span_length()));
    }

    std::vector<SpherePoint> sample(int n) const {
        std::vector<SpherePoint> out;
        out.reserve(n);
        for (int i = 0; i < n; ++i) out.push_back(point_on((i + 0.5) / n));
        return out;
    }

    std::vector<SpherePoint> endpoints() const {
        if (full) return {};
        return {circline.point_at(wrap_angle(t0)), circline.point_at(wrap_angle(t1))};
    }

    double chordal_length() const {
        double len = 0.0;
        SpherePoint prev = circline.point_at(wrap_angle(t0));
        const int n = 24;
        for (int i = 1; i <= n; ++i) {
            SpherePoint cur = point_on(static_cast<double>(i) / n);
            len += chordal_dist(prev, cur);
            prev = cur;
        }
        return len;
    }

    // chordal distance from a point to this arc
    double chordal_dist_to(const SpherePoint& p) const {
        double d = circline.chordal_dist_to(p);
        if (full) return d;
        if (span_contains(circline.param_of(p))) return d;
        double best = 4.0;
        for (const auto& e : endpoints()) best = std::min(best, chordal_dist(p, e));
        return best;
    }
};

struct LevelStats {
    long arc_count = 0;
    double total_chordal_length = 0.0;
    long truncated_count = 0;
    double truncated_length = 0.0;
};

struct SpiderwebApprox {
    std::vector<std::vector<Arc>> levels;
    std::vector<LevelStats> stats;
    int depth = 0;
    double min_arc_chordal = 0.0;

    long total_arcs() const {
        long n = 0;
        for (const auto& l : levels) n += static_cast<long>(l.size());
        return n;
    }

    double dist_to_levels(const SpherePoint& p, int max_level) const {
        double best = 4.0;
        for (int l = 0; l <= max_level && l < static_cast<int>(levels.size()); ++l)
            for (const Arc& a : levels[static_cast<size_t>(l)])
                best = std::min(best, a.chordal_dist_to(p));
        return best;
    }
};

namespace detail {

// Pull one arc back through branch k: clip f_k^{-1}(arc) to region k and to
// the image of the parent span. Returns the kept sub-arcs.
inline std::vector<Arc> pull_back_arc(const PiecewiseMoebius& F, const Arc& parent, int k,
                                      double tolB) {
    std::vector<Arc> kept;
    const MoebiusMap inv = F.map(k).inverse();
    Circline cl = circline_image(inv, parent.circline);
    const Region& reg = F.partition().region(k);

    std::vector<double> cuts;
    for (const auto& cons : reg.constraints) {
        auto r = circline_intersect(cl, cons.circline, 1e-11);
        if (r.kind == CirclineIntersection::Kind::Coincident) return kept; // lies inside B
        if (r.kind == CirclineIntersection::Kind::Tangent) cuts.push_back(cl.param_of(r.p1));
        if (r.kind == CirclineIntersection::Kind::Two) {
            cuts.push_back(cl.param_of(r.p1));
            cuts.push_back(cl.param_of(r.p2));
        }
    }
    if (!parent.full) {
        cuts.push_back(cl.param_of(inv.apply(parent.circline.point_at(parent.t0))));
        cuts.push_back(cl.param_of(inv.apply(parent.circline.point_at(parent.t1))));
    }

    Word w;
    w.reserve(parent.word.size() + 1);
    w.push_back(k);
    w.insert(w.end(), parent.word.begin(), parent.word.end());

    auto emit = [&](bool full, double u0, double u1) {
        Arc a;
        a.circline = cl;
        a.full = full;
        a.t0 = wrap_angle(u0);
        a.t1 = wrap_angle(u1);
        double mid = full ? 0.0 : u0 + 0.5 * std::fmod(u1 - u0 + 4.0 * kPi, 2.0 * kPi);
        a.midpoint = cl.point_at(wrap_angle(mid));
        a.word = w;
        a.level = parent.level + 1;
        a.source_component = parent.source_component;
        // strict region membership of the witness
        if (!reg.contains(a.midpoint, tolB)) return;
        // the witness must map into the parent span
        if (!parent.full) {
            SpherePoint fwd = F.map(k).apply(a.midpoint);
            if (!parent.span_contains(parent.circline.param_of(fwd), 1e-7)) return;
        }
        kept.push_back(std::move(a));
    };

    if (cuts.empty()) {
        emit(true, 0.0, 0.0);
        return kept;
    }
    for (double& c : cuts) c = wrap_angle(c);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-12; }),
               cuts.end());
    if (cuts.size() >= 2 && (cuts.back() - cuts.front()) > 2.0 * kPi - 1e-12) cuts.pop_back();
    if (cuts.size() == 1) {
        // a single tangency: the rest of the circline is one candidate
        emit(false, cuts[0], cuts[0] + 2.0 * kPi);
        return kept;
    }
    for (size_t i = 0; i < cuts.size(); ++i) {
        double u0 = cuts[i];
        double u1 = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + 2.0 * kPi;
        if (std::abs(u1 - u0) < 1e-12) continue;
        emit(false, u0, u1);
    }
    return kept;
}

inline bool arc_order(const Arc& x, const Arc& y) {
    if (x.word != y.word) return x.word < y.word;
    auto key = [](const Arc& a) {
        return std::array<double, 5>{a.circline.A(), a.circline.B().real(),
                                     a.circline.B().imag(), a.circline.D(), a.t0};
    };
    return key(x) < key(y);
}

} // namespace detail

// Exact backward iteration of the discontinuity set:
// F^{-1}(S) = union over k of (f_k^{-1}(S) intersect R_k), arc by arc.
inline SpiderwebApprox backward_arcs(const PiecewiseMoebius& F, int depth,
                                     double min_arc_chordal = 1e-5, long arc_cap = 1000000,
                                     double tolB = 1e-12) {
    SpiderwebApprox web;
    web.depth = depth;
    web.min_arc_chordal = min_arc_chordal;

    std::vector<Arc> level0;
    const auto& comps = F.partition().boundary_components();
    for (size_t j = 0; j < comps.size(); ++j) {
        Arc a;
        a.circline = comps[j];
        a.full = true;
        a.midpoint = comps[j].point_at(0.0);
        a.level = 0;
        a.source_component = static_cast<int>(j);
        level0.push_back(a);
    }
    web.levels.push_back(level0);
    web.stats.push_back({static_cast<long>(level0.size()), 0.0, 0, 0.0});
    for (const Arc& a : web.levels[0]) web.stats[0].total_chordal_length += a.chordal_length();

    long total = static_cast<long>(level0.size());
    for (int n = 1; n <= depth; ++n) {
        std::vector<Arc> next;
        LevelStats st;
        for (const Arc& a : web.levels.back()) {
            for (int k = 0; k < F.num_regions(); ++k) {
                for (Arc& cand : detail::pull_back_arc(F, a, k, tolB)) {
                    double len = cand.chordal_length();
                    if (len < min_arc_chordal) {
                        ++st.truncated_count;
                        st.truncated_length += len;
                        continue;
                    }
                    st.total_chordal_length += len;
                    next.push_back(std::move(cand));
                }
            }
        }
        std::sort(next.begin(), next.end(), detail::arc_order);
        st.arc_count = static_cast<long>(next.size());
        total += st.arc_count;
        if (total > arc_cap)
            raise(ErrorKind::DepthOverflow, "backward_arcs: arc cap exceeded at level " +
                                                std::to_string(n));
        web.levels.push_back(std::move(next));
        web.stats.push_back(st);
    }
    return web;
}

} // namespace pmt
