#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace armlab {

using Cplx = std::complex<double>;

// ----------------------------------------------------------------------------
// Oriented crosscuts and well-oriented crossing counts.
//
// A crosscut is an oriented simple polyline with both endpoints on the
// domain boundary; its parameter is normalized arclength in [0,1].  For two
// crosscuts (xi_-1, xi_+1) and a curve eta, the progress function R_j(t) is
// the largest parameter on xi_j visited by eta up to time t, and crossing
// n+1 happens at the first time eta hits xi_{(-1)^{n+1}} strictly beyond
// R at the previous crossing time.  Counts are invariant under orientation
// preserving reparametrization of all three curves.
// ----------------------------------------------------------------------------

struct Crosscut {
    std::vector<Cplx> pts;  // ordered; parameter = normalized arclength

    double length() const;
};

// Upper semicircle of B(x, eps), oriented from x-eps to x+eps.
Crosscut crosscut_semicircle(double x, double eps, int segments = 128);

// Boundary of the half-strip L_y^- seen from the right: the segment
// [y, y+i*pi] followed by the ray {Im = pi, Re <= y}, oriented from y
// toward infinity, truncated at Re = x_trunc (< y).
Crosscut crosscut_halfstrip(double y, double x_trunc, double height = 3.14159265358979323846);

struct CrossingCounts {
    int count = 0;
    std::vector<double> times;      // curve parameter (segment index + fraction)
    bool degenerate_seen = false;   // overlapping-segment intersections
    bool near_truncation = false;   // curve approached a crosscut's free end
};

// Count well-oriented (xi_m, xi_p) crossings of the polyline curve, up to
// max_n (0 = unlimited).
CrossingCounts well_oriented_count(const std::vector<Cplx>& curve, const Crosscut& xi_m,
                                   const Crosscut& xi_p, int max_n = 0);

// Comparison principle check: count(hat pair) >= count(plain pair) for a
// configuration built to satisfy the nesting hypotheses.
struct ComparisonVerdict {
    int count_plain = 0;
    int count_hat = 0;
    bool ok = false;
};
ComparisonVerdict comparison_check(const std::vector<Cplx>& curve, const Crosscut& xi_m,
                                   const Crosscut& xi_p, const Crosscut& xihat_m,
                                   const Crosscut& xihat_p);

// ----------------------------------------------------------------------------
// Fixtures.
// ----------------------------------------------------------------------------

struct ComparisonFixture {
    std::vector<Cplx> curve;
    Crosscut xi_m, xi_p;        // inner (deep) pair
    Crosscut xihat_m, xihat_p;  // outer (shallow) pair; nesting by construction
    int expected_plain = -1;    // -1 = unknown
    int expected_hat = -1;
};

// Two nested semicircle pairs and a dipping curve with 2 deep alternating
// dips and 3 further shallow dips: counts (2, 5).
ComparisonFixture figure_fixture_2_5();

// Randomized valid fixture (nested semicircle pairs, non-self-crossing
// dipping curve); deep dips alternate so expected counts are known.
ComparisonFixture random_fixture(std::uint64_t seed);

// Resample a polyline by splitting each segment into k equal pieces
// (orientation-preserving reparametrization).
std::vector<Cplx> resample_polyline(const std::vector<Cplx>& pts, int k);

}  // namespace armlab
