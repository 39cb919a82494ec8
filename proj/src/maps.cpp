#include "armlab/maps.hpp"

#include <cmath>
#include <stdexcept>

namespace armlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Cplx sqrt_z2m1(Cplx z) {
    // Product of principal roots keeps the branch cut on [-1,1] and the
    // image in the closed upper half-plane for z in closed H.
    return std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
}

Cplx halfstrip_f0(Cplx z) {
    if (z.imag() == 0.0 && std::abs(z.real()) < 1.0)
        throw std::domain_error("halfstrip_f0: point in the branch cut (-1,1)");
    Cplx s = sqrt_z2m1(z);
    Cplx w = z + s;  // z + sqrt(z^2-1): H onto H minus the closed unit half-disc
    return s + std::log(w);
}

Cplx halfstrip_f0_deriv(Cplx z) {
    return std::sqrt(z + 1.0) / std::sqrt(z - 1.0);
}

Cplx halfstrip_f(double y, Cplx z) { return halfstrip_f0(z - y) + y; }

Cplx halfstrip_f_deriv(double y, Cplx z) { return halfstrip_f0_deriv(z - y); }

double halfstrip_f0_real(double u) {
    if (u < 1.0) throw std::domain_error("halfstrip_f0_real: u < 1");
    double s = std::sqrt(u * u - 1.0);
    return s + std::log(u + s);
}

double phi_threshold() {
    static const double t = halfstrip_f0_real(3.0);
    return t;
}

double halfstrip_g0_real(double x) {
    if (x < 0.0) throw std::domain_error("halfstrip_g0_real: x < 0");
    if (x == 0.0) return 1.0;
    // f0 is increasing on [1,inf); f0(1+d) ~ 2 sqrt(2d) near the corner and
    // f0(u) ~ u + log(2u) at infinity
    double u = x > 2.0 ? x - std::log(2.0 * x) + 1.0 : 1.0 + x * x / 8.0;
    if (u < 1.0 + 1e-15) u = 1.0 + 1e-15;
    for (int it = 0; it < 80; ++it) {
        double s = std::sqrt(u * u - 1.0);
        double fu = s + std::log(u + s);
        double du = (fu - x) / std::sqrt((u + 1.0) / (u - 1.0));
        double un = u - du;
        if (un < 1.0) un = 0.5 * (u + 1.0);
        u = un;
        if (std::abs(fu - x) <= 1e-13 * (1.0 + std::abs(x))) break;
    }
    return u;
}

Cplx halfstrip_g(double y, Cplx w) {
    Cplx v = w - Cplx(y, 0.0);
    const double btol = 1e-12 * std::max(1.0, std::abs(v));

    // Real points on [y, inf) invert through the monotone real restriction.
    if (std::abs(v.imag()) <= btol && v.real() >= -btol)
        return Cplx(halfstrip_g0_real(std::max(v.real(), 0.0)) + y, 0.0);

    // Vertical segment [y, y+i*pi]: images are the cut [-1,1] where
    // f(u + i0) = i (sqrt(1-u^2) + acos(u)); invert the monotone real map.
    if (std::abs(v.real()) <= btol && v.imag() >= 0.0 && v.imag() <= kPi + btol) {
        double s = std::clamp(v.imag(), 0.0, kPi);
        double lo = -1.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            double val = std::sqrt(std::max(0.0, 1.0 - mid * mid)) + std::acos(mid);
            (val > s ? lo : hi) = mid;  // decreasing in u
            if (hi - lo < 1e-16) break;
        }
        return Cplx(0.5 * (lo + hi) + y, 0.0);
    }

    // Top ray {Im = pi, Re <= y}: images are u <= -1 with
    // f(u) = i*pi - (|s| - log|u + s|), s = -sqrt(u^2-1); bisect on u.
    if (std::abs(v.imag() - kPi) <= btol && v.real() <= btol) {
        double target = std::min(v.real(), 0.0);
        auto fr = [](double u) {
            double s = std::sqrt(u * u - 1.0);
            return -s + std::log(-u + s);  // log|u - sqrt(u^2-1)| for u <= -1
        };
        double hi = -1.0;
        double lo = std::min(-2.0, target - std::log(2.0 * std::max(1.0, -target)) - 2.0);
        while (fr(lo) > target) lo *= 2.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (fr(mid) > target ? hi : lo) = mid;  // fr decreasing toward -inf
            if (hi - lo < 1e-14 * std::max(1.0, -lo)) break;
        }
        return Cplx(0.5 * (lo + hi) + y, 0.0);
    }

    // Interior points: Newton in q = z + sqrt(z^2-1), where
    //   f(z) = F(q) = q/2 - 1/(2q) + log q
    // maps {|q| >= 1, Im q >= 0} with no interior branch cut.
    const double tol = 1e-12 * std::max(1.0, std::abs(w));
    auto F = [](Cplx q) { return 0.5 * q - 0.5 / q + std::log(q); };
    auto Fp = [](Cplx q) { return 0.5 + 0.5 / (q * q) + 1.0 / q; };
    auto project = [](Cplx q) {
        if (q.imag() < 0.0) q = Cplx(q.real(), 0.0);
        double r = std::abs(q);
        if (r < 1.0) q /= std::max(r, 1e-300);
        return q;
    };

    Cplx q;
    if (std::abs(v) > 6.0) {
        Cplx z0 = v - std::log(2.0 * v);
        if (z0.imag() < 0.0) z0 = Cplx(z0.real(), 0.0);
        q = project(z0 + sqrt_z2m1(z0));
    } else {
        // seed on/near the unit circle: F(e^{i t}) = i (sin t + t)
        double b = std::clamp(v.imag(), 0.0, kPi);
        double lo = 0.0, hi = kPi;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            (std::sin(mid) + mid < b ? lo : hi) = mid;
        }
        double th = 0.5 * (lo + hi);
        double r = 1.0 + std::max(0.05, 0.4 * std::abs(v.real()));
        q = Cplx(r * std::cos(th), r * std::sin(th));
    }

    double res = std::abs(F(q) - v);
    for (int it = 0; it < 200 && res > tol; ++it) {
        Cplx step = (F(q) - v) / Fp(q);
        double damp = 1.0;
        bool accepted = false;
        for (int h = 0; h < 30; ++h) {
            Cplx qn = project(q - damp * step);
            double rn = std::abs(F(qn) - v);
            if (rn < res) {
                q = qn;
                res = rn;
                accepted = true;
                break;
            }
            damp *= 0.5;
        }
        if (!accepted) break;
    }
    if (res > 1e3 * tol) throw std::runtime_error("halfstrip_g: Newton did not converge");
    return 0.5 * (q + 1.0 / q) + y;
}

double phi(double x) {
    if (x <= phi_threshold()) return 0.0;
    return halfstrip_f0_real(halfstrip_g0_real(x) - 2.0);
}

double phi_iter(int k, double x) {
    double v = x;
    for (int i = 0; i < k && v > 0.0; ++i) v = phi(v);
    return v;
}

double hm_infinity(double y, Cplx a, Cplx b) {
    auto on_boundary = [y](Cplx z) {
        const double tol = 1e-9 * (1.0 + std::abs(z));
        if (std::abs(z.imag()) <= tol && z.real() >= y - tol) return true;                     // [y, inf)
        if (std::abs(z.real() - y) <= tol && z.imag() >= -tol && z.imag() <= kPi + tol) return true;  // [y, y+i*pi]
        if (std::abs(z.imag() - kPi) <= tol && z.real() <= y + tol) return true;               // top ray
        return false;
    };
    if (!on_boundary(a) || !on_boundary(b))
        throw std::domain_error("hm_infinity: endpoint not on the half-strip boundary");
    double ga = halfstrip_g(y, a).real();
    double gb = halfstrip_g(y, b).real();
    return std::abs(gb - ga);
}

Cplx semidisc_g(const SemiDisc& d, Cplx z) {
    if (std::abs(z - Cplx(d.x0, 0.0)) < d.r * (1.0 - 1e-12))
        throw std::domain_error("semidisc_g: point inside the semidisc");
    return z + d.r * d.r / (z - d.x0);
}

Cplx semidisc_g_deriv(const SemiDisc& d, Cplx z) {
    Cplx h = z - Cplx(d.x0, 0.0);
    return 1.0 - d.r * d.r / (h * h);
}

}  // namespace armlab
