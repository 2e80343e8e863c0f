#pragma once

#include <random>
#include <string>
#include <vector>

#include "pmt/circline.hpp"
#include "pmt/complex_sphere.hpp"
#include "pmt/errors.hpp"

namespace pmt {

struct Constraint {
    Circline circline;
    Side required; // Inside or Outside
};

// Open region cut out by circline half-spheres. The witness certifies
// non-emptiness; membership tests are strict.
struct Region {
    std::vector<Constraint> constraints;
    SpherePoint witness;
    int index = 0;

    bool contains(const SpherePoint& p, double tolB = 1e-9) const {
        for (const auto& c : constraints)
            if (c.circline.side(p, tolB) != c.required) return false;
        return true;
    }

    // inside the closure: every constraint holds up to On
    bool contains_closure(const SpherePoint& p, double tolB = 1e-9) const {
        for (const auto& c : constraints) {
            Side s = c.circline.side(p, tolB);
            if (s != c.required && s != Side::On) return false;
        }
        return true;
    }
};

struct LocateResult {
    enum class Kind { Region, Boundary, NoRegion };
    Kind kind = Kind::NoRegion;
    int region = -1;

    bool is_region() const { return kind == Kind::Region; }
    bool is_boundary() const { return kind == Kind::Boundary; }
};

struct ValidationIssue {
    enum class Kind { Overlap, Gap, BadWitness };
    Kind kind;
    SpherePoint point;
    std::string detail;
};

struct ValidationReport {
    long samples = 0;
    long overlap_count = 0;
    long gap_count = 0;
    long witness_failures = 0;
    std::vector<ValidationIssue> issues; // capped

    bool ok() const { return overlap_count == 0 && gap_count == 0 && witness_failures == 0; }
};

// K >= 2 circline-bounded regions whose closures tile the sphere.
class Partition {
public:
    Partition(std::vector<Region> regions) : regions_(std::move(regions)) {
        if (regions_.size() < 2) raise(ErrorKind::BadParameter, "Partition: K must be >= 2");
        for (size_t i = 0; i < regions_.size(); ++i) {
            regions_[i].index = static_cast<int>(i);
            for (const auto& c : regions_[i].constraints) {
                bool seen = false;
                for (const auto& b : boundary_)
                    if (b.coeffs_close(c.circline, 1e-12)) { seen = true; break; }
                if (!seen) boundary_.push_back(c.circline.with_orientation(1));
            }
        }
        for (const auto& r : regions_)
            if (!r.contains(r.witness))
                raise(ErrorKind::BadParameter,
                      "Partition: witness of region " + std::to_string(r.index) +
                          " is not interior");
    }

    int size() const { return static_cast<int>(regions_.size()); }
    const std::vector<Region>& regions() const { return regions_; }
    const Region& region(int k) const { return regions_.at(static_cast<size_t>(k)); }
    // Deduplicated boundary circlines; with non-crossing constraints (all the
    // presets) each one is a connected component of B.
    const std::vector<Circline>& boundary_components() const { return boundary_; }

    double boundary_dist(const SpherePoint& p) const {
        double d = 4.0;
        for (const auto& b : boundary_) d = std::min(d, b.chordal_dist_to(p));
        return d;
    }

    LocateResult locate(const SpherePoint& p, double tolB = 1e-9) const {
        for (const auto& b : boundary_)
            if (std::abs(b.norm_value(p)) <= tolB) return {LocateResult::Kind::Boundary, -1};
        for (const auto& r : regions_)
            if (r.contains(p, tolB)) return {LocateResult::Kind::Region, r.index};
        return {LocateResult::Kind::NoRegion, -1};
    }

    ValidationReport validate(long samples, std::uint64_t seed = 20240901,
                              double tolB = 1e-9) const {
        ValidationReport rep;
        rep.samples = samples;
        std::mt19937_64 rng(seed);
        auto note = [&rep](ValidationIssue::Kind k, const SpherePoint& p, std::string d) {
            if (k == ValidationIssue::Kind::Overlap) ++rep.overlap_count;
            if (k == ValidationIssue::Kind::Gap) ++rep.gap_count;
            if (k == ValidationIssue::Kind::BadWitness) ++rep.witness_failures;
            if (rep.issues.size() < 32) rep.issues.push_back({k, p, std::move(d)});
        };
        for (long i = 0; i < samples; ++i) {
            SpherePoint p = random_sphere_point(rng);
            bool near_b = false;
            for (const auto& b : boundary_)
                if (std::abs(b.norm_value(p)) <= tolB) { near_b = true; break; }
            if (near_b) continue;
            int claims = 0;
            for (const auto& r : regions_)
                if (r.contains(p, tolB)) ++claims;
            if (claims > 1) note(ValidationIssue::Kind::Overlap, p, "claimed by multiple regions");
            if (claims == 0) note(ValidationIssue::Kind::Gap, p, "claimed by no region");
        }
        for (const auto& r : regions_) {
            LocateResult lr = locate(r.witness, tolB);
            if (!lr.is_region() || lr.region != r.index)
                note(ValidationIssue::Kind::BadWitness, r.witness,
                     "witness misplaced for region " + std::to_string(r.index));
        }
        return rep;
    }

private:
    std::vector<Region> regions_;
    std::vector<Circline> boundary_;
};

} // namespace pmt
