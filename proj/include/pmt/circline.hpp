#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>

#include "pmt/complex_sphere.hpp"
#include "pmt/errors.hpp"
#include "pmt/moebius.hpp"

namespace pmt {

enum class Side { Inside, On, Outside };

inline const char* to_string(Side s) {
    switch (s) {
        case Side::Inside: return "inside";
        case Side::On: return "on";
        case Side::Outside: return "outside";
    }
    return "?";
}

// Generalized circle as a Hermitian form A z z~ + conj(B) z + B z~ + D = 0
// (A = 0 gives a line, i.e. a circle through infinity). Coefficients are kept
// normalized to |B|^2 - A*D = 1 with A >= 0, so the quantity
// phi(z)/(1+|z|^2) is a first-order chordal distance to the set. The
// orientation sign selects which complementary disk counts as Inside.
class Circline {
public:
    Circline(double A, cplx B, double D, int orient = 1) {
        double s2 = std::norm(B) - A * D;
        if (s2 <= 1e-14) raise(ErrorKind::BadParameter, "Circline: degenerate form");
        double s = std::sqrt(s2);
        A_ = A / s;
        B_ = B / s;
        D_ = D / s;
        orient_ = orient >= 0 ? 1 : -1;
        canonicalize();
    }

    // |z - center| = radius, Inside = the disk
    static Circline circle(cplx center, double radius) {
        if (!(radius > 0.0)) raise(ErrorKind::BadParameter, "Circline: radius <= 0");
        return Circline(1.0, -center, std::norm(center) - radius * radius, 1);
    }

    // line through `p` with unit normal `normal`; Inside = the half plane the
    // normal points away from
    static Circline line(cplx p, cplx normal) {
        double n = std::abs(normal);
        if (n <= 1e-300) raise(ErrorKind::BadParameter, "Circline: zero normal");
        cplx B = normal / n;
        return Circline(0.0, B, -2.0 * (std::conj(B) * p).real(), 1);
    }

    double A() const { return A_; }
    cplx B() const { return B_; }
    double D() const { return D_; }
    int orientation() const { return orient_; }
    Circline with_orientation(int o) const {
        Circline c = *this;
        c.orient_ = o >= 0 ? 1 : -1;
        return c;
    }

    bool is_circle() const { return A_ > 1e-12; }
    cplx center() const { return -B_ / A_; }
    double radius() const { return 1.0 / A_; } // normalized: r = 1/A
    // line data (valid when !is_circle()); |B| = 1 after normalization
    cplx line_foot() const { return -0.5 * D_ * B_; }
    cplx line_dir() const { return cplx(0.0, 1.0) * B_; }

    // signed normalized form value; ~ chordal distance near the set
    double norm_value(const SpherePoint& p) const {
        if (p.is_infinity()) return A_;
        const cplx& z = p.value();
        double az = std::abs(z);
        if (az > 1.0) {
            // evaluate in the 1/z chart: phi(z)/(1+|z|^2) = phi~(1/z)/(1+|1/z|^2)
            // with (A,B,D) -> (D, conj(B), A)
            cplx u = 1.0 / z;
            return (D_ * std::norm(u) + 2.0 * (B_ * u).real() + A_) / (1.0 + std::norm(u));
        }
        return (A_ * std::norm(z) + 2.0 * (std::conj(B_) * z).real() + D_) / (1.0 + std::norm(z));
    }

    Side side(const SpherePoint& p, double tol = 1e-9) const {
        double v = orient_ * norm_value(p);
        if (std::abs(v) <= tol) return Side::On;
        return v < 0.0 ? Side::Inside : Side::Outside;
    }

    // exact chordal distance from p to the zero set
    double chordal_dist_to(const SpherePoint& p) const {
        double h = 0.5 * (A_ + D_);
        double vn = std::sqrt(1.0 + h * h);
        double cp = std::clamp((norm_value(p) - h) / vn, -1.0, 1.0);
        double cc = std::clamp(-h / vn, -1.0, 1.0);
        double dth = 0.5 * (std::acos(cp) - std::acos(cc));
        return 2.0 * std::abs(std::sin(dth));
    }

    // Point at parameter t in (-pi, pi]. Circles: center + r e^{it}.
    // Lines: foot + tan(t/2) dir, with t = pi at infinity, so spans stay
    // bounded on the sphere.
    SpherePoint point_at(double t) const {
        if (is_circle()) return SpherePoint(center() + radius() * std::polar(1.0, t));
        if (std::abs(std::abs(t) - kPi) < 1e-14) return SpherePoint::infinity();
        return SpherePoint(line_foot() + std::tan(0.5 * t) * line_dir());
    }

    // Parameter of (the projection of) p; total on the sphere.
    double param_of(const SpherePoint& p) const {
        if (is_circle()) {
            if (p.is_infinity()) {
                cplx c = center();
                return std::abs(c) > 0.0 ? std::arg(c) : 0.0;
            }
            cplx d = p.value() - center();
            if (std::abs(d) <= 1e-300) return 0.0;
            return std::arg(d);
        }
        if (p.is_infinity()) return kPi;
        double s = (std::conj(line_dir()) * (p.value() - line_foot())).real();
        return 2.0 * std::atan(s);
    }

    bool coeffs_close(const Circline& o, double tol) const {
        return std::abs(A_ - o.A_) <= tol && std::abs(B_ - o.B_) <= tol &&
               std::abs(D_ - o.D_) <= tol;
    }

private:
    void canonicalize() {
        int flip = 0;
        if (A_ < -1e-15) flip = 1;
        else if (A_ <= 1e-15) {
            A_ = 0.0;
            if (B_.real() < -1e-15) flip = 1;
            else if (std::abs(B_.real()) <= 1e-15 && B_.imag() < 0.0) flip = 1;
        }
        if (flip) {
            A_ = -A_;
            B_ = -B_;
            D_ = -D_;
            orient_ = -orient_;
        }
    }

    double A_;
    cplx B_;
    double D_;
    int orient_;
};

// Hermitian congruence by the inverse matrix; the image of a circline under a
// Moebius map is again a circline. Orientation is transported through an
// interior witness point.
inline Circline circline_image(const MoebiusMap& m, const Circline& cl) {
    const cplx a = m.a(), b = m.b(), c = m.c(), d = m.d();
    const double A = cl.A(), D = cl.D();
    const cplx B = cl.B();
    double A2 = A * std::norm(d) - 2.0 * (B * c * std::conj(d)).real() + D * std::norm(c);
    double D2 = A * std::norm(b) - 2.0 * (B * a * std::conj(b)).real() + D * std::norm(a);
    cplx B2 = -A * b * std::conj(d) + B * a * std::conj(d) + std::conj(B) * b * std::conj(c) -
              D * a * std::conj(c);
    Circline out(A2, B2, D2, 1);

    // probe points with a known side; the image keeps that side
    std::vector<SpherePoint> cand;
    if (cl.is_circle()) {
        cplx cc = cl.center();
        double r = cl.radius();
        for (double s : {0.0, 0.5, -0.5, 0.8, 2.0, -2.0, 4.0})
            cand.push_back(SpherePoint(cc + s * r));
        for (double s : {0.5, -0.5, 2.0, -2.0})
            cand.push_back(SpherePoint(cc + cplx(0, s) * r));
        cand.push_back(SpherePoint::infinity());
    } else {
        cplx f = cl.line_foot(), B0 = cl.B();
        for (double s : {1.0, -1.0, 0.5, -0.5, 2.0, -2.0, 4.0, -4.0})
            cand.push_back(SpherePoint(f - s * B0));
    }
    for (const SpherePoint& p : cand) {
        Side side = cl.side(p, 1e-10);
        if (side == Side::On) continue;
        double v = out.norm_value(m.apply(p));
        if (std::abs(v) > 1e-9) {
            bool image_inside_has_negative_v = (side == Side::Inside) == (v < 0.0);
            return out.with_orientation(image_inside_has_negative_v ? 1 : -1);
        }
    }
    raise(ErrorKind::InternalError, "circline_image: no usable orientation witness");
}

struct CirclineIntersection {
    enum class Kind { Disjoint, Tangent, Two, Coincident };
    Kind kind = Kind::Disjoint;
    SpherePoint p1, p2; // Tangent: p1; Two: p1, p2
};

inline CirclineIntersection circline_intersect(const Circline& c1, const Circline& c2,
                                               double tol = 1e-9) {
    CirclineIntersection res;
    if (c1.coeffs_close(c2, tol)) {
        res.kind = CirclineIntersection::Kind::Coincident;
        return res;
    }
    const Circline* par = nullptr; // the one we parameterize (a circle if any)
    const Circline* oth = nullptr;
    if (c1.is_circle()) { par = &c1; oth = &c2; }
    else if (c2.is_circle()) { par = &c2; oth = &c1; }

    if (par) {
        cplx c = par->center();
        double r = par->radius();
        double alpha = oth->A() * (std::norm(c) + r * r) +
                       2.0 * (std::conj(oth->B()) * c).real() + oth->D();
        cplx gamma = r * (oth->A() * std::conj(c) + std::conj(oth->B()));
        double g = std::abs(gamma);
        if (g <= 1e-14) {
            res.kind = CirclineIntersection::Kind::Disjoint; // concentric, not coincident
            return res;
        }
        double rho = -alpha / (2.0 * g);
        double ph = std::arg(gamma);
        if (std::abs(rho) > 1.0 + tol) {
            res.kind = CirclineIntersection::Kind::Disjoint;
        } else if (std::abs(std::abs(rho) - 1.0) <= tol) {
            res.kind = CirclineIntersection::Kind::Tangent;
            double x = rho > 0.0 ? 0.0 : kPi;
            res.p1 = par->point_at(std::remainder(x - ph, 2.0 * kPi));
        } else {
            res.kind = CirclineIntersection::Kind::Two;
            double x = std::acos(std::clamp(rho, -1.0, 1.0));
            res.p1 = par->point_at(std::remainder(x - ph, 2.0 * kPi));
            res.p2 = par->point_at(std::remainder(-x - ph, 2.0 * kPi));
        }
        return res;
    }

    // two lines meet at infinity, plus a finite point unless parallel
    cplx b1 = c1.B(), b2 = c2.B();
    double det = (std::conj(b1) * b2).imag(); // sin of the angle, |B|=1
    if (std::abs(det) <= tol) {
        res.kind = CirclineIntersection::Kind::Tangent;
        res.p1 = SpherePoint::infinity();
        return res;
    }
    double r1 = -0.5 * c1.D(), r2 = -0.5 * c2.D();
    double x = (r1 * b2.imag() - r2 * b1.imag()) / det;
    double y = (b1.real() * r2 - b2.real() * r1) / det;
    res.kind = CirclineIntersection::Kind::Two;
    res.p1 = SpherePoint(cplx(x, y));
    res.p2 = SpherePoint::infinity();
    return res;
}

} // namespace pmt
