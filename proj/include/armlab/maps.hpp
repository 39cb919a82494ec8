#pragma once

#include <complex>

namespace armlab {

using Cplx = std::complex<double>;

// ----------------------------------------------------------------------------
// Explicit conformal maps on the upper half-plane H.
//
// Half strips: L_{y;r}^- = { z in H : Im z <= r, Re z <= y }, default r = pi.
// f_halfstrip(y, .) maps H conformally onto H \ L_y^- with
//   f(y+1) = y, f(y-1) = y + i*pi, f(z) = z + log(2(z-y)) + O(1/(z-y)).
// g_halfstrip is its inverse (Newton iteration).
// ----------------------------------------------------------------------------

// sqrt(z^2-1), branch cut [-1,1], continuous on closed H, ~ z at infinity.
Cplx sqrt_z2m1(Cplx z);

// f_{L_0^-}(z) = sqrt(z^2-1) + log(z + sqrt(z^2-1)), log branch onto {0<Im<pi}
Cplx halfstrip_f0(Cplx z);
Cplx halfstrip_f0_deriv(Cplx z);  // sqrt((z+1)/(z-1))

Cplx halfstrip_f(double y, Cplx z);
Cplx halfstrip_f_deriv(double y, Cplx z);

// Inverse of halfstrip_f; Newton with damping, residual <= 1e-12 * max(1,|w|).
// Throws std::runtime_error on non-convergence (points at the corner
// singularities y and y+i*pi).
Cplx halfstrip_g(double y, Cplx w);

// Real restrictions on [1, inf) <-> [0, inf); monotone increasing.
double halfstrip_f0_real(double u);   // u >= 1
double halfstrip_g0_real(double x);   // x >= 0

// phi(x) = f0(g0(x) - 2) for x >= f0(3), else 0.
double phi(double x);
double phi_iter(int k, double x);
double phi_threshold();  // f0(3)

// Half-strip boundary: [y,inf) on R, the segment [y, y+i*pi], the ray
// {Im = pi, Re <= y}.  hm_infinity(y, a, b) = |g(b) - g(a)| for boundary
// points a, b; this is the harmonic measure from infinity normalized by
// pi*h.  Throws std::domain_error if an endpoint is off the boundary.
double hm_infinity(double y, Cplx a, Cplx b);

// Semidisc hull B^+(x0, r): g(z) = z + r^2/(z - x0), hcap = r^2.
struct SemiDisc {
    double x0 = 0.0;
    double r = 1.0;
};
Cplx semidisc_g(const SemiDisc& d, Cplx z);
Cplx semidisc_g_deriv(const SemiDisc& d, Cplx z);

}  // namespace armlab
