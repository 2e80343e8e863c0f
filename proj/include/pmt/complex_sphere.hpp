#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "pmt/errors.hpp"

namespace pmt {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// A point of the Riemann sphere: a finite complex number or the point at
// infinity. Finite values never carry NaN components.
class SpherePoint {
public:
    SpherePoint() : z_(0.0, 0.0), inf_(false) {}
    SpherePoint(double re, double im) : SpherePoint(cplx(re, im)) {}
    SpherePoint(const cplx& z) : z_(z), inf_(false) {
        if (std::isnan(z.real()) || std::isnan(z.imag()))
            raise(ErrorKind::InternalError, "SpherePoint: NaN component");
        if (std::isinf(z.real()) || std::isinf(z.imag())) {
            inf_ = true;
            z_ = cplx(0.0, 0.0);
        }
    }

    static SpherePoint infinity() {
        SpherePoint p;
        p.inf_ = true;
        return p;
    }

    bool is_infinity() const { return inf_; }
    // Finite value; undefined at infinity (asserts in debug spirit).
    const cplx& value() const {
        if (inf_) raise(ErrorKind::InternalError, "SpherePoint: value() at infinity");
        return z_;
    }

private:
    cplx z_;
    bool inf_;
};

namespace detail {
inline double hyp1(double x) { return std::hypot(1.0, x); }
} // namespace detail

// Chordal metric, range [0,2]; inversion-invariant evaluation keeps huge
// moduli out of the arithmetic.
inline double chordal_dist(const SpherePoint& p, const SpherePoint& q) {
    if (p.is_infinity() && q.is_infinity()) return 0.0;
    if (p.is_infinity()) return 2.0 / detail::hyp1(std::abs(q.value()));
    if (q.is_infinity()) return 2.0 / detail::hyp1(std::abs(p.value()));
    cplx a = p.value(), b = q.value();
    if (std::abs(a) > 1.0 && std::abs(b) > 1.0) {
        // d(p,q) = d(1/p, 1/q); 1/z is a chordal isometry
        a = 1.0 / a;
        b = 1.0 / b;
    }
    double num = std::abs(a - b);
    return 2.0 * (num / detail::hyp1(std::abs(a))) / detail::hyp1(std::abs(b));
}

inline double chordal_dist(const cplx& p, const cplx& q) {
    return chordal_dist(SpherePoint(p), SpherePoint(q));
}

// Uniform sample on the sphere via a 3D gaussian, pushed through the
// stereographic chart (north pole -> infinity).
template <typename Rng>
SpherePoint random_sphere_point(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    double x = n(rng), y = n(rng), w = n(rng);
    double r = std::sqrt(x * x + y * y + w * w);
    if (r < 1e-300) return SpherePoint(0.0, 0.0);
    x /= r;
    y /= r;
    w /= r;
    double denom = 1.0 - w;
    if (denom < 1e-12) return SpherePoint::infinity();
    return SpherePoint(cplx(x / denom, y / denom));
}

} // namespace pmt
