#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "pmt/moebius.hpp"
#include "pmt/partition.hpp"

namespace pmt {

// Itinerary word: region indices applied first-to-last (0-based internally;
// printed formats are 1-based).
using Word = std::vector<int>;

inline std::string word_to_string(const Word& w) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(w[i] + 1);
    }
    return s;
}

struct OrbitRecord {
    enum class Termination { MaxIterations, HitBoundary, Converged, NumericalLoss };
    std::vector<SpherePoint> points;  // points[0] = seed
    std::vector<int> itinerary;       // region of points[i], one per applied step
    Termination termination = Termination::MaxIterations;
    int boundary_step = -1;           // for HitBoundary
    SpherePoint limit;                // for Converged
};

enum class ItineraryMatch { Consistent, ConsistentOnClosure, Inconsistent };

// The piecewise Moebius transformation: K regions, one map per region,
// undefined on the region boundaries.
class PiecewiseMoebius {
public:
    PiecewiseMoebius(Partition partition, std::vector<MoebiusMap> maps)
        : partition_(std::move(partition)), maps_(std::move(maps)) {
        if (static_cast<int>(maps_.size()) != partition_.size())
            raise(ErrorKind::BadParameter, "PMT: need one map per region");
        check_minimality();
    }

    const Partition& partition() const { return partition_; }
    const std::vector<MoebiusMap>& maps() const { return maps_; }
    const MoebiusMap& map(int k) const { return maps_.at(static_cast<size_t>(k)); }
    int num_regions() const { return partition_.size(); }

    // Undefined (nullopt) exactly on the boundary snap zone.
    std::optional<SpherePoint> apply(const SpherePoint& p, double tolB = 1e-9) const {
        LocateResult lr = partition_.locate(p, tolB);
        if (!lr.is_region()) return std::nullopt;
        return maps_[static_cast<size_t>(lr.region)].apply(p);
    }

    OrbitRecord orbit(const SpherePoint& seed, int max_steps, double tolB = 1e-9,
                      double tol_conv = 1e-6) const {
        OrbitRecord rec;
        rec.points.push_back(seed);
        int small_steps = 0;
        for (int n = 0; n < max_steps; ++n) {
            const SpherePoint& z = rec.points.back();
            LocateResult lr = partition_.locate(z, tolB);
            if (lr.kind == LocateResult::Kind::NoRegion) {
                rec.termination = OrbitRecord::Termination::NumericalLoss;
                return rec;
            }
            if (lr.is_boundary()) {
                rec.termination = OrbitRecord::Termination::HitBoundary;
                rec.boundary_step = n;
                return rec;
            }
            SpherePoint w = maps_[static_cast<size_t>(lr.region)].apply(z);
            rec.itinerary.push_back(lr.region);
            rec.points.push_back(w);
            if (chordal_dist(w, z) < tol_conv) {
                if (++small_steps >= 10) {
                    rec.termination = OrbitRecord::Termination::Converged;
                    rec.limit = cesaro_tail(rec.points, 10);
                    return rec;
                }
            } else {
                small_steps = 0;
            }
        }
        rec.termination = OrbitRecord::Termination::MaxIterations;
        return rec;
    }

    // Composition along a word, empty word -> identity.
    MoebiusMap word_map(const Word& w) const {
        MoebiusMap m;
        for (int k : w) m = compose(map(k), m);
        return m;
    }

    // Does the orbit of p realized by the maps of `w` visit the prescribed
    // regions (strictly / up to closures)?
    ItineraryMatch itinerary_consistent(const SpherePoint& p, const Word& w,
                                        double tolB = 1e-9) const {
        SpherePoint z = p;
        bool closure = false;
        for (int k : w) {
            LocateResult lr = partition_.locate(z, tolB);
            if (lr.is_region()) {
                if (lr.region != k) return ItineraryMatch::Inconsistent;
            } else {
                if (!partition_.region(k).contains_closure(z, tolB))
                    return ItineraryMatch::Inconsistent;
                closure = true;
            }
            z = map(k).apply(z);
        }
        return closure ? ItineraryMatch::ConsistentOnClosure : ItineraryMatch::Consistent;
    }

private:
    static SpherePoint cesaro_tail(const std::vector<SpherePoint>& pts, int n) {
        // mean of the last n points; if any is infinite the tail sits at
        // infinity anyway (steps were chordally small)
        int cnt = 0;
        cplx acc(0, 0);
        for (size_t i = pts.size() >= static_cast<size_t>(n) ? pts.size() - n : 0;
             i < pts.size(); ++i) {
            if (pts[i].is_infinity()) return SpherePoint::infinity();
            acc += pts[i].value();
            ++cnt;
        }
        return SpherePoint(acc / static_cast<double>(cnt));
    }

    // Minimality of the partition relative to F: regions whose boundaries
    // share a circline must carry different maps.
    void check_minimality() const {
        int K = partition_.size();
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j) {
                bool adjacent = false;
                for (const auto& ci : partition_.region(i).constraints)
                    for (const auto& cj : partition_.region(j).constraints)
                        if (ci.circline.coeffs_close(cj.circline, 1e-12)) adjacent = true;
                if (adjacent && maps_[static_cast<size_t>(i)].dist_to(
                                    maps_[static_cast<size_t>(j)]) <= 1e-9)
                    raise(ErrorKind::BadParameter,
                          "PMT: adjacent regions " + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + " carry the same map");
            }
    }

    Partition partition_;
    std::vector<MoebiusMap> maps_;
};

} // namespace pmt
