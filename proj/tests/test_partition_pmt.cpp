#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pmt/presets.hpp"

using namespace pmt;

TEST_CASE("locate on the two-scalings partition") {
    PiecewiseMoebius F = presets::two_scalings(0.5);
    const Partition& P = F.partition();

    auto r0 = P.locate(SpherePoint(0.0, 0.0));
    CHECK(r0.is_region());
    CHECK(r0.region == 0);

    CHECK(P.locate(SpherePoint(1.0, 0.0)).is_boundary());

    auto r1 = P.locate(SpherePoint::infinity());
    CHECK(r1.is_region());
    CHECK(r1.region == 1);
}

TEST_CASE("partition validation") {
    PiecewiseMoebius F = presets::two_scalings(0.5);
    auto rep = F.partition().validate(100000);
    CHECK(rep.ok());

    // two overlapping disks: overlap violations (and a gap outside both)
    Region a{{{Circline::circle(0.0, 1.0), Side::Inside}}, SpherePoint(0.0, 0.0), 0};
    Region b{{{Circline::circle(1.0, 1.0), Side::Inside}}, SpherePoint(1.0, 0.0), 1};
    Partition bad({a, b});
    auto rep2 = bad.validate(20000);
    CHECK(rep2.overlap_count > 0);
    CHECK(!rep2.ok());

    // disk + exterior of a larger disk: the annulus between is uncovered
    Region in{{{Circline::circle(0.0, 1.0), Side::Inside}}, SpherePoint(0.0, 0.0), 0};
    Region out{{{Circline::circle(0.0, 2.0), Side::Outside}}, SpherePoint::infinity(), 1};
    Partition gappy({in, out});
    auto rep3 = gappy.validate(20000);
    CHECK(rep3.gap_count > 0);
    CHECK(rep3.overlap_count == 0);
}

TEST_CASE("boundary components") {
    CHECK(presets::two_scalings(0.5).partition().boundary_components().size() == 1);
    CHECK(presets::tent(cplx(-0.5, 0), 1.0, 3.5).partition().boundary_components().size() == 1);

    // synthetic annulus partition: two concentric circlines, three regions
    Circline c1 = Circline::circle(0.0, 1.0), c2 = Circline::circle(0.0, 2.0);
    Region r0{{{c1, Side::Inside}}, SpherePoint(0.0, 0.0), 0};
    Region r1{{{c1, Side::Outside}, {c2, Side::Inside}}, SpherePoint(1.5, 0.0), 1};
    Region r2{{{c2, Side::Outside}}, SpherePoint::infinity(), 2};
    Partition ann({r0, r1, r2});
    CHECK(ann.boundary_components().size() == 2);
    CHECK(ann.validate(20000).ok());
}

TEST_CASE("membership is moebius natural") {
    PiecewiseMoebius F = presets::hiper_no_ss(0.5);
    const Partition& P = F.partition();
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    MoebiusMap g(cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(0.3, -0.1), cplx(1.4, 0.2));

    std::vector<Region> transported;
    for (const auto& r : P.regions()) {
        Region tr;
        tr.index = r.index;
        tr.witness = g.apply(r.witness);
        for (const auto& c : r.constraints) {
            Circline ic = circline_image(g, c.circline);
            // orientation transport keeps Inside = image of Inside
            Side req = c.required;
            if (c.circline.orientation() != 1) req = req; // circline orientation already folded
            tr.constraints.push_back({ic, req});
        }
        transported.push_back(tr);
    }
    Partition Q(transported);

    double tolB = 1e-9;
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        SpherePoint p = random_sphere_point(rng);
        bool clear = true;
        for (const auto& bdy : P.boundary_components())
            if (std::abs(bdy.norm_value(p)) < 10 * tolB) clear = false;
        SpherePoint q = g.apply(p);
        for (const auto& bdy : Q.boundary_components())
            if (std::abs(bdy.norm_value(q)) < 10 * tolB) clear = false;
        if (!clear) continue;
        auto lp = P.locate(p, tolB);
        auto lq = Q.locate(q, tolB);
        CHECK(lp.kind == lq.kind);
        if (lp.is_region()) CHECK(lp.region == lq.region);
        ++checked;
    }
    CHECK(checked > 1500);
}

TEST_CASE("pmt apply") {
    PiecewiseMoebius F = presets::two_scalings(0.5);
    auto v = F.apply(SpherePoint(0.4, 0.0));
    REQUIRE(v.has_value());
    CHECK(chordal_dist(*v, SpherePoint(0.2, 0.0)) < 1e-15);

    CHECK(!F.apply(SpherePoint(1.0, 0.0)).has_value()); // undefined on B

    auto w = F.apply(SpherePoint::infinity());
    REQUIRE(w.has_value());
    CHECK(w->is_infinity());
}

TEST_CASE("orbits") {
    PiecewiseMoebius F = presets::two_scalings(0.5);
    OrbitRecord o = F.orbit(SpherePoint(0.4, 0.0), 500, 1e-9, 1e-9);
    CHECK(o.termination == OrbitRecord::Termination::Converged);
    CHECK(chordal_dist(o.limit, SpherePoint(0.0, 0.0)) < 1e-7);

    // the ghost orbit converges to a point on B itself; the convergence
    // window must fire before the boundary snap does
    PiecewiseMoebius G = presets::ghost();
    OrbitRecord og = G.orbit(SpherePoint(0.5, 0.0), 500, 1e-9, 1e-5);
    CHECK(og.termination == OrbitRecord::Termination::Converged);
    CHECK(chordal_dist(og.limit, SpherePoint(0.0, 0.0)) < 1e-4);
    for (int k : og.itinerary) CHECK(k == 0); // stays in the first region

    OrbitRecord ob = F.orbit(SpherePoint(1.0, 0.0), 100);
    CHECK(ob.termination == OrbitRecord::Termination::HitBoundary);
    CHECK(ob.boundary_step == 0);
}

TEST_CASE("word maps") {
    PiecewiseMoebius F = presets::two_scalings(0.5);
    CHECK(classify(F.word_map({})) == MapClass::Identity);
    CHECK(F.word_map({0}).dist_to(MoebiusMap(0.5, 0, 0, 1)) < 1e-12);
    CHECK(classify(F.word_map({0, 1})) == MapClass::Identity); // (z/2)*2

    std::mt19937_64 rng(53);
    for (int t = 0; t < 50; ++t) {
        Word w1, w2;
        for (int i = 0; i < static_cast<int>(rng() % 4) + 1; ++i) w1.push_back(rng() % 2);
        for (int i = 0; i < static_cast<int>(rng() % 4) + 1; ++i) w2.push_back(rng() % 2);
        Word cat = w1;
        cat.insert(cat.end(), w2.begin(), w2.end());
        MoebiusMap lhs = F.word_map(cat);
        MoebiusMap rhs = compose(F.word_map(w2), F.word_map(w1));
        CHECK(lhs.dist_to(rhs) < 1e-9);
    }
}

TEST_CASE("itinerary consistency") {
    PiecewiseMoebius F = presets::two_scalings(0.5);
    CHECK(F.itinerary_consistent(SpherePoint(0.0, 0.0), {0}) == ItineraryMatch::Consistent);
    CHECK(F.itinerary_consistent(SpherePoint(0.0, 0.0), {1}) == ItineraryMatch::Inconsistent);

    PiecewiseMoebius G = presets::ghost();
    CHECK(G.itinerary_consistent(SpherePoint(0.0, 0.0), {0}) ==
          ItineraryMatch::ConsistentOnClosure);
}

TEST_CASE("preset gallery sanity") {
    auto check = [](const PiecewiseMoebius& F) {
        CHECK(F.partition().validate(20000).ok());
    };
    check(presets::two_scalings(0.5));
    check(presets::translation_scaling());
    check(presets::ghost());
    check(presets::hiper_no_ss(0.5));
    check(presets::expand_no_hyper());
    check(presets::irrational_annulus());
    check(presets::perturbed_pair_variant("base"));
    check(presets::perturbed_pair_variant("p102"));
    check(presets::perturbed_pair_variant("p99"));
    check(presets::perturbed_pair_variant("asym08"));
    check(presets::perturbed_pair_variant("asym11"));
    check(presets::tent(cplx(-0.5, 0), 1.0, 3.5));

    // exact geometry pins
    PiecewiseMoebius T = presets::tent(cplx(-0.5, 0), 1.0, 3.5);
    CHECK(T.partition().locate(SpherePoint(-0.5, 0.0)).region == 0);
    CHECK(T.partition().locate(SpherePoint(0.5, 0.0)).is_boundary());

    PiecewiseMoebius E = presets::expand_no_hyper();
    CHECK(E.partition().locate(SpherePoint(0.0, 0.0)).region == 0);
    CHECK(E.partition().locate(SpherePoint(0.5, 0.0)).is_boundary());

    CHECK_THROWS_AS(presets::two_scalings(0.0), Error);
    CHECK_THROWS_AS(presets::two_scalings(1.0), Error);
    CHECK_THROWS_AS(presets::tent(cplx(0, 0), 1.0, 3.5), Error); // misses 1/2
    CHECK_THROWS_AS(presets::perturbed_pair_variant("nope"), Error);

    // minimality: same map on both sides of the circle is rejected
    CHECK_THROWS_AS(PiecewiseMoebius(presets::disk_pair(0.0, 1.0),
                                     {MoebiusMap(2, 0, 0, 1), MoebiusMap(2, 0, 0, 1)}),
                    Error);
}
