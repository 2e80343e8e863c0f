#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pmt/circline.hpp"

using namespace pmt;

namespace {

MoebiusMap random_moebius(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (;;) {
        cplx a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng)), d(u(rng), u(rng));
        if (std::abs(a * d - b * c) > 0.1) return MoebiusMap(a, b, c, d);
    }
}

Circline random_circline(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    if (rng() % 4 == 0) return Circline::line(cplx(u(rng), u(rng)), std::polar(1.0, u(rng)));
    return Circline::circle(cplx(u(rng), u(rng)), 0.2 + std::abs(u(rng)));
}

} // namespace

TEST_CASE("circline construction and sides") {
    Circline unit = Circline::circle(0.0, 1.0);
    CHECK(unit.A() == Catch::Approx(1.0));
    CHECK(std::abs(unit.B()) < 1e-15);
    CHECK(unit.D() == Catch::Approx(-1.0));

    CHECK(unit.side(SpherePoint(0.0, 0.0)) == Side::Inside);
    CHECK(unit.side(SpherePoint(1.0, 0.0)) == Side::On);
    CHECK(unit.side(SpherePoint::infinity()) == Side::Outside);

    Circline l = Circline::line(0.0, 1.0); // imaginary axis, Inside = left half plane
    CHECK(l.side(SpherePoint(-1.0, 0.0)) == Side::Inside);
    CHECK(l.side(SpherePoint(1.0, 0.0)) == Side::Outside);
    CHECK(l.side(SpherePoint(0.0, 5.0)) == Side::On);
    CHECK(l.side(SpherePoint::infinity()) == Side::On); // lines pass through infinity

    CHECK_THROWS_AS(Circline(1.0, cplx(0, 0), 1.0), Error); // empty locus
}

TEST_CASE("circline images under moebius maps") {
    Circline unit = Circline::circle(0.0, 1.0);

    Circline two = circline_image(MoebiusMap(2, 0, 0, 1), unit);
    CHECK(two.coeffs_close(Circline::circle(0.0, 2.0), 1e-12));
    CHECK(two.side(SpherePoint(0.0, 0.0)) == Side::Inside); // orientation transported

    Circline inv = circline_image(MoebiusMap(0, 1, 1, 0), unit);
    CHECK(inv.coeffs_close(unit, 1e-12));
    // 1/z swaps the disk with the exterior
    CHECK(inv.side(SpherePoint(0.0, 0.0)) == Side::Outside);

    Circline half = circline_image(MoebiusMap(1, 0, 0, 2), Circline::circle(1.0, 1.0));
    CHECK(half.coeffs_close(Circline::circle(0.5, 0.5), 1e-12));

    // circle through the pole becomes a line
    Circline through = Circline::circle(1.0, 1.0);
    Circline img = circline_image(MoebiusMap(0, 1, 1, 0), through);
    CHECK(!img.is_circle());

    std::mt19937_64 rng(31);
    for (int t = 0; t < 60; ++t) {
        Circline c = random_circline(rng);
        MoebiusMap m = random_moebius(rng);
        Circline ic = circline_image(m, c);
        for (int i = 0; i < 20; ++i) {
            double th = -kPi + 2.0 * kPi * (i + 0.5) / 20.0;
            SpherePoint p = c.point_at(th);
            CHECK(std::abs(ic.norm_value(m.apply(p))) < 1e-9);
        }
        // functoriality
        MoebiusMap m2 = random_moebius(rng);
        Circline lhs = circline_image(compose(m2, m), c);
        Circline rhs = circline_image(m2, ic);
        CHECK(lhs.coeffs_close(rhs, 1e-9));
        CHECK(lhs.orientation() == rhs.orientation());
    }
}

TEST_CASE("circline intersections") {
    Circline unit = Circline::circle(0.0, 1.0);

    auto far = circline_intersect(unit, Circline::circle(3.0, 1.0));
    CHECK(far.kind == CirclineIntersection::Kind::Disjoint);

    auto tang = circline_intersect(unit, Circline::circle(2.0, 1.0));
    REQUIRE(tang.kind == CirclineIntersection::Kind::Tangent);
    CHECK(chordal_dist(tang.p1, SpherePoint(1.0, 0.0)) < 1e-9);

    // |z|=1 and |z-1|=1 meet at (1 +/- i sqrt3)/2
    auto two = circline_intersect(unit, Circline::circle(1.0, 1.0));
    REQUIRE(two.kind == CirclineIntersection::Kind::Two);
    double s3 = std::sqrt(3.0) / 2.0;
    double d11 = chordal_dist(two.p1, SpherePoint(0.5, s3)) + chordal_dist(two.p2, SpherePoint(0.5, -s3));
    double d12 = chordal_dist(two.p1, SpherePoint(0.5, -s3)) + chordal_dist(two.p2, SpherePoint(0.5, s3));
    CHECK(std::min(d11, d12) < 1e-9);

    auto coin = circline_intersect(unit, Circline(2.0, cplx(0, 0), -2.0));
    CHECK(coin.kind == CirclineIntersection::Kind::Coincident);

    // parallel lines are tangent at infinity; crossing lines carry infinity too
    auto par = circline_intersect(Circline::line(0.0, 1.0), Circline::line(1.0, 1.0));
    REQUIRE(par.kind == CirclineIntersection::Kind::Tangent);
    CHECK(par.p1.is_infinity());
    auto axes = circline_intersect(Circline::line(0.0, 1.0), Circline::line(0.0, cplx(0, 1)));
    REQUIRE(axes.kind == CirclineIntersection::Kind::Two);
    CHECK(chordal_dist(axes.p1, SpherePoint(0.0, 0.0)) < 1e-12);
    CHECK(axes.p2.is_infinity());

    // line-circle crossing
    auto lc = circline_intersect(Circline::line(0.0, 1.0), unit);
    REQUIRE(lc.kind == CirclineIntersection::Kind::Two);
    CHECK(std::abs(unit.norm_value(lc.p1)) < 1e-12);
    CHECK(std::abs(Circline::line(0.0, 1.0).norm_value(lc.p1)) < 1e-12);

    // residuals on random transversal pairs
    std::mt19937_64 rng(37);
    for (int t = 0; t < 80; ++t) {
        Circline c1 = random_circline(rng), c2 = random_circline(rng);
        auto r = circline_intersect(c1, c2);
        if (r.kind == CirclineIntersection::Kind::Two) {
            for (const SpherePoint& p : {r.p1, r.p2}) {
                CHECK(std::abs(c1.norm_value(p)) < 1e-7);
                CHECK(std::abs(c2.norm_value(p)) < 1e-7);
            }
        }
    }
}

TEST_CASE("chordal distance to a circline") {
    // oracle: dense minimum over sampled points
    std::mt19937_64 rng(41);
    for (int t = 0; t < 25; ++t) {
        Circline c = random_circline(rng);
        SpherePoint p = random_sphere_point(rng);
        double brute = 4.0, best_th = 0.0;
        for (int i = 0; i < 20000; ++i) {
            double th = -kPi + 2.0 * kPi * (i + 0.5) / 20000.0;
            double d = chordal_dist(p, c.point_at(th));
            if (d < brute) { brute = d; best_th = th; }
        }
        // refine around the coarse argmin
        double step = 2.0 * kPi / 20000.0;
        for (int i = -2000; i <= 2000; ++i)
            brute = std::min(brute, chordal_dist(p, c.point_at(best_th + i * step / 1000.0)));
        CHECK(c.chordal_dist_to(p) == Catch::Approx(brute).margin(1e-7));
    }
}

TEST_CASE("circline parameterization round trip") {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 40; ++t) {
        Circline c = random_circline(rng);
        double th = -kPi + 2.0 * kPi * ((rng() % 1000) + 0.5) / 1000.0;
        SpherePoint p = c.point_at(th);
        SpherePoint q = c.point_at(c.param_of(p));
        CHECK(chordal_dist(p, q) < 1e-9);
    }
    // a line reaches infinity at t = pi
    Circline l = Circline::line(1.0, 1.0);
    CHECK(l.point_at(kPi).is_infinity());
    CHECK(l.param_of(SpherePoint::infinity()) == Catch::Approx(kPi));
}
