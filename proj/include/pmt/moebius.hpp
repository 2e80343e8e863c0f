#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "pmt/complex_sphere.hpp"
#include "pmt/errors.hpp"

namespace pmt {

enum class MapClass { Identity, Parabolic, Elliptic, Loxodromic };

inline const char* to_string(MapClass c) {
    switch (c) {
        case MapClass::Identity: return "identity";
        case MapClass::Parabolic: return "parabolic";
        case MapClass::Elliptic: return "elliptic";
        case MapClass::Loxodromic: return "loxodromic";
    }
    return "?";
}

// z -> (az+b)/(cz+d), stored with ad-bc = 1. The square-root branch is fixed
// so that Re(a+d) >= 0 (ties broken toward Im(a+d) >= 0, then first nonzero
// coefficient positive), which makes coefficient comparisons reproducible.
class MoebiusMap {
public:
    MoebiusMap() : a_(1), b_(0), c_(0), d_(1) {}

    MoebiusMap(cplx a, cplx b, cplx c, cplx d) : a_(a), b_(b), c_(c), d_(d) {
        cplx det = a_ * d_ - b_ * c_;
        if (std::abs(det) <= 1e-14)
            raise(ErrorKind::DegenerateMap, "MoebiusMap: determinant ~ 0");
        cplx s = std::sqrt(det);
        a_ /= s; b_ /= s; c_ /= s; d_ /= s;
        fix_sign();
    }

    static MoebiusMap identity() { return MoebiusMap(); }

    cplx a() const { return a_; }
    cplx b() const { return b_; }
    cplx c() const { return c_; }
    cplx d() const { return d_; }

    SpherePoint operator()(const SpherePoint& p) const { return apply(p); }

    SpherePoint apply(const SpherePoint& p) const {
        if (p.is_infinity()) {
            if (std::abs(c_) == 0.0) return SpherePoint::infinity();
            return SpherePoint(a_ / c_);
        }
        const cplx& z = p.value();
        cplx den = c_ * z + d_;
        if (den == cplx(0.0, 0.0)) return SpherePoint::infinity();
        cplx w = (a_ * z + b_) / den;
        if (std::isinf(w.real()) || std::isinf(w.imag()) || std::isnan(w.real()) ||
            std::isnan(w.imag()))
            return SpherePoint::infinity();
        return SpherePoint(w);
    }

    MoebiusMap inverse() const {
        MoebiusMap m;
        m.a_ = d_; m.b_ = -b_; m.c_ = -c_; m.d_ = a_;
        m.fix_sign();
        return m;
    }

    cplx trace() const { return a_ + d_; }
    cplx trace_sq() const { cplx t = a_ + d_; return t * t; }

    // max coefficient distance to the nearest of +Id / -Id
    double dist_to_identity() const {
        auto m = [&](double s) {
            return std::max(std::max(std::abs(a_ - s), std::abs(d_ - s)),
                            std::max(std::abs(b_), std::abs(c_)));
        };
        return std::min(m(1.0), m(-1.0));
    }

    // coefficient distance up to the projective sign
    double dist_to(const MoebiusMap& o) const {
        auto m = [&](double s) {
            return std::max(std::max(std::abs(a_ - s * o.a_), std::abs(b_ - s * o.b_)),
                            std::max(std::abs(c_ - s * o.c_), std::abs(d_ - s * o.d_)));
        };
        return std::min(m(1.0), m(-1.0));
    }

private:
    void fix_sign() {
        cplx t = a_ + d_;
        int flip = 0;
        if (t.real() < -1e-12) flip = 1;
        else if (std::abs(t.real()) <= 1e-12) {
            if (t.imag() < -1e-12) flip = 1;
            else if (std::abs(t.imag()) <= 1e-12) {
                const std::array<double, 8> v = {a_.real(), a_.imag(), b_.real(), b_.imag(),
                                                 c_.real(), c_.imag(), d_.real(), d_.imag()};
                for (double x : v) {
                    if (std::abs(x) > 1e-12) { flip = x < 0.0; break; }
                }
            }
        }
        if (flip) { a_ = -a_; b_ = -b_; c_ = -c_; d_ = -d_; }
    }

    cplx a_, b_, c_, d_;
};

// Acts as m1 after m2 (matrix product).
inline MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2) {
    return MoebiusMap(m1.a() * m2.a() + m1.b() * m2.c(), m1.a() * m2.b() + m1.b() * m2.d(),
                      m1.c() * m2.a() + m1.d() * m2.c(), m1.c() * m2.b() + m1.d() * m2.d());
}

inline MapClass classify(const MoebiusMap& m, double tol = 1e-9) {
    if (m.dist_to_identity() < 1e-10) return MapClass::Identity;
    cplx s = m.trace_sq();
    if (std::abs(s - 4.0) <= tol) return MapClass::Parabolic;
    if (std::abs(s.imag()) <= tol && s.real() >= -tol && s.real() < 4.0)
        return MapClass::Elliptic;
    return MapClass::Loxodromic;
}

struct FixedPoint {
    SpherePoint point;
    cplx multiplier;
};

// Fixed points with their multipliers. Loxodromic/elliptic maps yield two
// entries sorted by |multiplier| (attracting first); parabolic maps yield one
// with multiplier 1.
inline std::vector<FixedPoint> fixed_points(const MoebiusMap& m) {
    if (classify(m) == MapClass::Identity)
        raise(ErrorKind::IdentityMap, "fixed_points: map is the identity");
    std::vector<FixedPoint> out;
    const cplx a = m.a(), b = m.b(), c = m.c(), d = m.d();
    bool parabolic = classify(m) == MapClass::Parabolic;
    if (std::abs(c) <= 1e-13) {
        if (parabolic) {
            out.push_back({SpherePoint::infinity(), cplx(1.0, 0.0)});
            return out;
        }
        // infinity, multiplier in the 1/z chart
        out.push_back({SpherePoint::infinity(), 1.0 / (a * a)});
        out.push_back({SpherePoint(b / (d - a)), 1.0 / (d * d)});
    } else {
        if (parabolic) {
            out.push_back({SpherePoint((a - d) / (2.0 * c)), cplx(1.0, 0.0)});
            return out;
        }
        cplx sq = std::sqrt(m.trace_sq() - 4.0);
        for (cplx z : {(a - d + sq) / (2.0 * c), (a - d - sq) / (2.0 * c)}) {
            cplx den = c * z + d;
            out.push_back({SpherePoint(z), 1.0 / (den * den)});
        }
    }
    auto key = [](const FixedPoint& f) {
        double re = f.point.is_infinity() ? 1e60 : f.point.value().real();
        double im = f.point.is_infinity() ? 1e60 : f.point.value().imag();
        return std::array<double, 3>{std::abs(f.multiplier), re, im};
    };
    std::sort(out.begin(), out.end(),
              [&](const FixedPoint& x, const FixedPoint& y) { return key(x) < key(y); });
    return out;
}

// Normalized spherical derivative |M'(p)|_s. For a det-1 matrix this is
// (1+|z|^2)/(|cz+d|^2 + |az+b|^2); evaluation moves to the 1/z chart when
// |z| > 1 so the quotient stays in range.
inline double spherical_deriv(const MoebiusMap& m, const SpherePoint& p) {
    cplx a = m.a(), b = m.b(), c = m.c(), d = m.d();
    auto eval = [](cplx a_, cplx b_, cplx c_, cplx d_, cplx z) {
        double az = std::norm(a_ * z + b_);
        double cz = std::norm(c_ * z + d_);
        return (1.0 + std::norm(z)) / (az + cz);
    };
    if (p.is_infinity()) return 1.0 / (std::norm(a) + std::norm(c));
    cplx z = p.value();
    if (std::abs(z) <= 1.0) return eval(a, b, c, d, z);
    // conjugate the source chart by 1/z (an isometry): coefficients swap
    return eval(b, a, d, c, 1.0 / z);
}

} // namespace pmt
