#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pmt/complex_sphere.hpp"
#include "pmt/moebius.hpp"

using namespace pmt;

namespace {

MoebiusMap random_moebius(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (;;) {
        cplx a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng)), d(u(rng), u(rng));
        if (std::abs(a * d - b * c) > 0.1) return MoebiusMap(a, b, c, d);
    }
}

// independent oracle: chordal difference quotient
double spherical_deriv_fd(const MoebiusMap& m, const cplx& z) {
    double h = 1e-7;
    double best = 0.0;
    int n = 0;
    for (double th : {0.0, 1.1, 2.3, 4.0}) {
        cplx dz = std::polar(h, th);
        double num = chordal_dist(m.apply(SpherePoint(z + dz)), m.apply(SpherePoint(z)));
        double den = chordal_dist(SpherePoint(z + dz), SpherePoint(z));
        best += num / den;
        ++n;
    }
    return best / n;
}

} // namespace

TEST_CASE("chordal metric basics") {
    CHECK(chordal_dist(SpherePoint(0.0, 0.0), SpherePoint::infinity()) == Catch::Approx(2.0));
    CHECK(chordal_dist(SpherePoint(1.0, 0.0), SpherePoint(1.0, 0.0)) == 0.0);
    // plugging p=1, q=-1 into the formula gives exactly 2
    CHECK(chordal_dist(SpherePoint(1.0, 0.0), SpherePoint(-1.0, 0.0)) == Catch::Approx(2.0));

    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        SpherePoint p = random_sphere_point(rng), q = random_sphere_point(rng),
                    r = random_sphere_point(rng);
        double pq = chordal_dist(p, q), qr = chordal_dist(q, r), pr = chordal_dist(p, r);
        CHECK(pq >= 0.0);
        CHECK(pq <= 2.0 + 1e-12);
        CHECK(pq == Catch::Approx(chordal_dist(q, p)));
        CHECK(pr <= pq + qr + 1e-12);
    }

    // no overflow breakdown far out
    CHECK(chordal_dist(SpherePoint(1e200, 0.0), SpherePoint::infinity()) < 1e-9);
    CHECK(std::isfinite(chordal_dist(SpherePoint(1e200, 0.0), SpherePoint(-1e200, 0.0))));
}

TEST_CASE("moebius normalization") {
    MoebiusMap t(1, 2, 0, 1); // z+2, det already 1
    CHECK(std::abs(t.a() - 1.0) < 1e-15);
    CHECK(std::abs(t.b() - 2.0) < 1e-15);

    MoebiusMap s(2, 0, 0, 1); // 2z -> (sqrt2, 0, 0, 1/sqrt2)
    CHECK(std::abs(s.a() - std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(s.d() - 1.0 / std::sqrt(2.0)) < 1e-15);

    MoebiusMap p(1, 0, 1, 1); // det 1, unchanged
    CHECK(std::abs(p.c() - 1.0) < 1e-15);

    CHECK_THROWS_AS(MoebiusMap(1, 2, 2, 4), Error); // det 0

    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        MoebiusMap m = random_moebius(rng);
        CHECK(std::abs(m.a() * m.d() - m.b() * m.c() - 1.0) < 1e-12);
        CHECK(m.trace().real() >= -1e-11);
    }
}

TEST_CASE("moebius apply") {
    MoebiusMap t(1, 2, 0, 1);
    CHECK(t.apply(SpherePoint::infinity()).is_infinity());

    // f2 of the bifurcating pair at lambda = 1/2 fixes i
    MoebiusMap f2(cplx(0, 3), -1, 1, cplx(0, 3));
    SpherePoint im = f2.apply(SpherePoint(0.0, 1.0));
    CHECK(chordal_dist(im, SpherePoint(0.0, 1.0)) < 1e-12);

    MoebiusMap inv(0, 1, 1, 0); // 1/z
    CHECK(inv.apply(SpherePoint(0.0, 0.0)).is_infinity());
    CHECK(chordal_dist(inv.apply(SpherePoint::infinity()), SpherePoint(0.0, 0.0)) == 0.0);
}

TEST_CASE("compose and inverse") {
    MoebiusMap t(1, 2, 0, 1);
    CHECK(compose(t, MoebiusMap::identity()).dist_to(t) < 1e-14);

    MoebiusMap two(2, 0, 0, 1), shift(1, 1, 0, 1);
    CHECK(compose(two, shift).dist_to(MoebiusMap(2, 2, 0, 1)) < 1e-14);

    CHECK(classify(compose(t, t.inverse())) == MapClass::Identity);
    CHECK(t.inverse().dist_to(MoebiusMap(1, -2, 0, 1)) < 1e-14);

    MoebiusMap f2(cplx(0, 3), -1, 1, cplx(0, 3));
    CHECK(chordal_dist(f2.inverse().apply(SpherePoint(0.0, 1.0)), SpherePoint(0.0, 1.0)) <
          1e-12);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        MoebiusMap m1 = random_moebius(rng), m2 = random_moebius(rng);
        SpherePoint z = random_sphere_point(rng);
        CHECK(chordal_dist(compose(m1, m2).apply(z), m1.apply(m2.apply(z))) < 1e-9);
        CHECK(chordal_dist(m1.inverse().apply(m1.apply(z)), z) < 1e-9);
    }
}

TEST_CASE("classification") {
    CHECK(classify(MoebiusMap(1, 2, 0, 1)) == MapClass::Parabolic);
    CHECK(classify(MoebiusMap(std::polar(1.0, 2.0 * kPi / 3.0), 0, 0, 1)) == MapClass::Elliptic);
    CHECK(classify(MoebiusMap(0.5, 0.5, 0, 1)) == MapClass::Loxodromic);
    CHECK(classify(MoebiusMap(1, 0, 0, 1)) == MapClass::Identity);
    CHECK(classify(MoebiusMap(-1, 0, 0, -1)) == MapClass::Identity);

    // invariant under conjugation
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        MoebiusMap m = random_moebius(rng);
        MapClass cls = classify(m);
        if (std::abs(m.trace_sq() - 4.0) < 1e-3) continue; // keep well separated
        MoebiusMap g = random_moebius(rng);
        CHECK(classify(compose(g, compose(m, g.inverse()))) == cls);
    }
}

TEST_CASE("fixed points and multipliers") {
    // f1(z) = z/2 + 1/2: attracting 1, repelling infinity
    auto fp = fixed_points(MoebiusMap(0.5, 0.5, 0, 1));
    REQUIRE(fp.size() == 2);
    CHECK(chordal_dist(fp[0].point, SpherePoint(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(fp[0].multiplier - 0.5) < 1e-12);
    CHECK(fp[1].point.is_infinity());
    CHECK(std::abs(std::abs(fp[1].multiplier) - 2.0) < 1e-12);

    // f2 of the same pair: i attracting, -i repelling
    auto fq = fixed_points(MoebiusMap(cplx(0, 3), -1, 1, cplx(0, 3)));
    REQUIRE(fq.size() == 2);
    CHECK(chordal_dist(fq[0].point, SpherePoint(0.0, 1.0)) < 1e-9);
    CHECK(std::abs(fq[0].multiplier) < 1.0);
    CHECK(chordal_dist(fq[1].point, SpherePoint(0.0, -1.0)) < 1e-9);
    CHECK(std::abs(fq[1].multiplier) > 1.0);

    // tent branch lambda - lambda z: fixed points lambda/(lambda+1) and infinity
    cplx lam(3.5, 0);
    auto ft = fixed_points(MoebiusMap(-lam, lam, 0, 1));
    REQUIRE(ft.size() == 2);
    bool found = false;
    for (const auto& f : ft)
        if (!f.point.is_infinity() &&
            chordal_dist(f.point, SpherePoint(lam / (lam + 1.0))) < 1e-12)
            found = true;
    CHECK(found);

    CHECK_THROWS_AS(fixed_points(MoebiusMap(1, 0, 0, 1)), Error);

    // residual + multiplier/class consistency on random maps
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        MoebiusMap m = random_moebius(rng);
        MapClass cls = classify(m);
        if (cls == MapClass::Identity) continue;
        auto pts = fixed_points(m);
        for (const auto& f : pts) CHECK(chordal_dist(m.apply(f.point), f.point) < 1e-9);
        if (cls == MapClass::Parabolic) {
            CHECK(pts.size() == 1);
        } else {
            REQUIRE(pts.size() == 2);
            double m0 = std::abs(pts[0].multiplier), m1 = std::abs(pts[1].multiplier);
            CHECK(std::abs(m0 * m1 - 1.0) < 1e-9);
            if (cls == MapClass::Loxodromic) CHECK(m0 < 1.0 - 1e-12);
            if (cls == MapClass::Elliptic) CHECK(std::abs(m0 - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("spherical derivative") {
    CHECK(spherical_deriv(MoebiusMap::identity(), SpherePoint(0.3, 0.7)) == Catch::Approx(1.0));
    CHECK(spherical_deriv(MoebiusMap::identity(), SpherePoint::infinity()) == Catch::Approx(1.0));
    CHECK(spherical_deriv(MoebiusMap(2, 0, 0, 1), SpherePoint(0.0, 0.0)) == Catch::Approx(2.0));

    // the expanding branch at its fixed point: spherical correction is 1
    cplx lam = (10.0 / 9.0) * std::polar(1.0, 2.0 * kPi / 3.0);
    MoebiusMap f2(-lam, lam, 0, 1);
    SpherePoint z0(lam / (lam + 1.0));
    CHECK(spherical_deriv(f2, z0) == Catch::Approx(10.0 / 9.0).epsilon(1e-12));

    // finite-difference oracle
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 60; ++i) {
        MoebiusMap m = random_moebius(rng);
        cplx z(u(rng), u(rng));
        if (std::abs(m.c() * z + m.d()) < 0.2) continue; // stay away from the pole
        double fd = spherical_deriv_fd(m, z);
        CHECK(spherical_deriv(m, SpherePoint(z)) == Catch::Approx(fd).epsilon(1e-4));
    }

    // cocycle rule along random words
    std::mt19937_64 rng2(23);
    for (int i = 0; i < 100; ++i) {
        int len = 1 + static_cast<int>(rng2() % 6);
        std::vector<MoebiusMap> word;
        for (int j = 0; j < len; ++j) word.push_back(random_moebius(rng2));
        SpherePoint z = random_sphere_point(rng2);
        MoebiusMap total = MoebiusMap::identity();
        double prod = 1.0;
        SpherePoint cur = z;
        for (const auto& m : word) {
            prod *= spherical_deriv(m, cur);
            cur = m.apply(cur);
            total = compose(m, total);
        }
        double direct = spherical_deriv(total, z);
        if (direct < 1e-12 || prod < 1e-12) continue;
        CHECK(direct == Catch::Approx(prod).epsilon(1e-8));
    }
}
