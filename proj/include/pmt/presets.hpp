#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pmt/pmt_map.hpp"

namespace pmt {
namespace presets {

// two complementary regions cut by one circle
inline Partition disk_pair(cplx center, double radius) {
    Circline c = Circline::circle(center, radius);
    Region inside{{{c, Side::Inside}}, SpherePoint(center), 0};
    Region outside{{{c, Side::Outside}}, SpherePoint::infinity(), 1};
    return Partition({inside, outside});
}

// Example: lambda z on the unit disk, z/lambda outside; hyperbolic for
// 0 < |lambda| < 1 with empty alpha-limit set.
inline PiecewiseMoebius two_scalings(cplx lambda) {
    double m = std::abs(lambda);
    if (!(m > 0.0) || !(m < 1.0))
        raise(ErrorKind::BadParameter, "two_scalings: need 0 < |lambda| < 1");
    return PiecewiseMoebius(disk_pair(0.0, 1.0),
                            {MoebiusMap(lambda, 0, 0, 1), MoebiusMap(1, 0, 0, lambda)});
}

// z+2 on the unit disk, 2z outside; a non-loxodromic component with
// hyperbolic global behavior.
inline PiecewiseMoebius translation_scaling() {
    return PiecewiseMoebius(disk_pair(0.0, 1.0),
                            {MoebiusMap(1, 2, 0, 1), MoebiusMap(2, 0, 0, 1)});
}

// z/2 on {|z-1|<1}, 2z outside; 0 is a ghost-periodic point on the shared
// boundary.
inline PiecewiseMoebius ghost() {
    return PiecewiseMoebius(disk_pair(1.0, 1.0),
                            {MoebiusMap(1, 0, 0, 2), MoebiusMap(2, 0, 0, 1)});
}

// f1 = lambda z + lambda on {|1-z|<1}, f2 = (6 i lambda z - 1)/(z + 6 i lambda)
// outside; hyperbolic near lambda = 1/2 yet bifurcating in the parameter.
inline PiecewiseMoebius hiper_no_ss(cplx lambda) {
    double m = std::abs(lambda);
    if (!(m > 0.0) || !(m < 1.0))
        raise(ErrorKind::BadParameter, "hiper_no_ss: need 0 < |lambda| < 1");
    cplx i6l = cplx(0, 6) * lambda;
    return PiecewiseMoebius(disk_pair(1.0, 1.0),
                            {MoebiusMap(lambda, lambda, 0, 1), MoebiusMap(i6l, -1, 1, i6l)});
}

// e^{2 pi i/3} z on {|z|<1/2}, (10/9) e^{2 pi i/3} (1-z) outside; a rotation
// domain plus a repelling fixed point carrying the whole alpha-limit set.
inline PiecewiseMoebius expand_no_hyper() {
    cplx rot = std::polar(1.0, 2.0 * kPi / 3.0);
    cplx lam = (10.0 / 9.0) * rot;
    return PiecewiseMoebius(disk_pair(0.0, 0.5),
                            {MoebiusMap(rot, 0, 0, 1), MoebiusMap(-lam, lam, 0, 1)});
}

// 2z on the unit disk, (2/3) z outside; radius dynamics conjugate to an
// irrational rotation, both fixed points repelling.
inline PiecewiseMoebius irrational_annulus() {
    return PiecewiseMoebius(disk_pair(0.0, 1.0),
                            {MoebiusMap(2, 0, 0, 1), MoebiusMap(2.0 / 3.0, 0, 0, 1)});
}

// f1 = ((1+i) z + c)/(-c z + (1-i)), f2 = ((1+i) z - c)/(c z + (1-i)) on
// {|z| < 2/5} / its complement. c = i gives the parabolic base pair; the
// published perturbations keep both maps loxodromic.
inline PiecewiseMoebius perturbed_pair(cplx c) {
    cplx u(1, 1), v(1, -1);
    return PiecewiseMoebius(disk_pair(0.0, 0.4),
                            {MoebiusMap(u, c, -c, v), MoebiusMap(u, -c, c, v)});
}

// the asymmetric published variants override f2 outright
inline PiecewiseMoebius perturbed_pair_explicit(cplx f2a, cplx f2b, cplx f2c, cplx f2d) {
    cplx u(1, 1), v(1, -1), i(0, 1);
    return PiecewiseMoebius(disk_pair(0.0, 0.4),
                            {MoebiusMap(u, i, -i, v), MoebiusMap(f2a, f2b, f2c, f2d)});
}

// Published coefficient sets for the perturbed pair family.
inline PiecewiseMoebius perturbed_pair_variant(const std::string& name) {
    cplx i(0, 1);
    if (name == "base") return perturbed_pair(i);
    if (name == "p102") return perturbed_pair(cplx(0, 1.02));
    if (name == "p99") return perturbed_pair(cplx(0.99, 0.01));
    if (name == "asym08")
        return perturbed_pair_explicit(cplx(0.8, 1), -i, i, cplx(1, -1));
    if (name == "asym11")
        return perturbed_pair_explicit(cplx(1.1, 1), cplx(0.1, -1), cplx(-0.1, 1),
                                       cplx(0.9, -1));
    raise(ErrorKind::BadParameter, "perturbed_pair_variant: unknown variant " + name);
}

// Complex tent map: f1 = lambda z inside the circle B, f2 = lambda - lambda z
// outside; B must pass through 1/2.
inline PiecewiseMoebius tent(cplx center, double radius, cplx lambda) {
    if (std::abs(lambda) == 0.0) raise(ErrorKind::BadParameter, "tent: lambda = 0");
    if (std::abs(std::abs(cplx(0.5, 0) - center) - radius) > 1e-12)
        raise(ErrorKind::BadParameter, "tent: circle must pass through 1/2");
    return PiecewiseMoebius(disk_pair(center, radius),
                            {MoebiusMap(lambda, 0, 0, 1), MoebiusMap(-lambda, lambda, 0, 1)});
}

inline std::vector<std::string> names() {
    return {"two_scalings", "translation_scaling", "ghost",          "hiper_no_ss",
            "expand_no_hyper", "irrational_annulus", "perturbed_pair", "tent"};
}

} // namespace presets
} // namespace pmt
