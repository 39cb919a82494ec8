#include "armlab/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "armlab/rng.hpp"

namespace armlab {

namespace {
constexpr double kPi = 3.14159265358979323846;

struct Hit {
    double t_curve;   // segment index + fraction along the curve
    double param;     // normalized parameter on the crosscut
    int which;        // -1 or +1
};

// Segment intersection p0->p1 vs q0->q1; appends (s,u) pairs in [0,1].
// Collinear overlaps are reported through the degenerate flag with the
// overlap endpoints as events.
void seg_intersect(Cplx p0, Cplx p1, Cplx q0, Cplx q1, std::vector<std::pair<double, double>>& out,
                   bool& degenerate) {
    const Cplx r = p1 - p0, s = q1 - q0;
    auto cross = [](Cplx a, Cplx b) { return a.real() * b.imag() - a.imag() * b.real(); };
    const double rxs = cross(r, s);
    const Cplx qp = q0 - p0;
    const double scale = std::max({1.0, std::abs(r), std::abs(s)});
    if (std::abs(rxs) <= 1e-14 * scale * scale) {
        if (std::abs(cross(qp, r)) > 1e-12 * scale * scale) return;  // parallel, disjoint
        // collinear: project q endpoints on r
        double rr = std::norm(r);
        if (rr <= 0.0) return;
        double t0 = (qp.real() * r.real() + qp.imag() * r.imag()) / rr;
        double t1 = t0 + (s.real() * r.real() + s.imag() * r.imag()) / rr;
        double lo = std::min(t0, t1), hi = std::max(t0, t1);
        if (hi < 0.0 || lo > 1.0) return;
        degenerate = true;
        double a = std::clamp(lo, 0.0, 1.0), b = std::clamp(hi, 0.0, 1.0);
        double ua = ((p0 + a * r - q0).real() * s.real() + (p0 + a * r - q0).imag() * s.imag()) /
                    std::max(std::norm(s), 1e-300);
        double ub = ((p0 + b * r - q0).real() * s.real() + (p0 + b * r - q0).imag() * s.imag()) /
                    std::max(std::norm(s), 1e-300);
        out.emplace_back(a, std::clamp(ua, 0.0, 1.0));
        out.emplace_back(b, std::clamp(ub, 0.0, 1.0));
        return;
    }
    double t = cross(qp, s) / rxs;
    double u = cross(qp, r) / rxs;
    if (t < -1e-12 || t > 1.0 + 1e-12 || u < -1e-12 || u > 1.0 + 1e-12) return;
    out.emplace_back(std::clamp(t, 0.0, 1.0), std::clamp(u, 0.0, 1.0));
}
}  // namespace

double Crosscut::length() const {
    double l = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) l += std::abs(pts[i] - pts[i - 1]);
    return l;
}

Crosscut crosscut_semicircle(double x, double eps, int segments) {
    Crosscut c;
    c.pts.reserve(segments + 1);
    for (int i = 0; i <= segments; ++i) {
        double a = kPi * (1.0 - static_cast<double>(i) / segments);  // from x-eps to x+eps
        c.pts.emplace_back(x + eps * std::cos(a), eps * std::sin(a));
    }
    return c;
}

Crosscut crosscut_halfstrip(double y, double x_trunc, double height) {
    Crosscut c;
    c.pts.emplace_back(y, 0.0);
    c.pts.emplace_back(y, height);
    c.pts.emplace_back(x_trunc, height);
    return c;
}

CrossingCounts well_oriented_count(const std::vector<Cplx>& curve, const Crosscut& xi_m,
                                   const Crosscut& xi_p, int max_n) {
    CrossingCounts out;
    if (curve.size() < 2) return out;

    // crosscut cumulative lengths for parameter normalization
    auto params = [](const Crosscut& c) {
        std::vector<double> cum(c.pts.size(), 0.0);
        for (std::size_t i = 1; i < c.pts.size(); ++i)
            cum[i] = cum[i - 1] + std::abs(c.pts[i] - c.pts[i - 1]);
        double total = cum.back() > 0.0 ? cum.back() : 1.0;
        for (auto& v : cum) v /= total;
        return cum;
    };
    const std::vector<double> cum_m = params(xi_m), cum_p = params(xi_p);

    std::vector<Hit> hits;
    std::vector<std::pair<double, double>> tmp;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const Cplx p0 = curve[i - 1], p1 = curve[i];
        for (int which : {-1, +1}) {
            const Crosscut& cc = which < 0 ? xi_m : xi_p;
            const std::vector<double>& cum = which < 0 ? cum_m : cum_p;
            for (std::size_t j = 1; j < cc.pts.size(); ++j) {
                tmp.clear();
                bool degen = false;
                seg_intersect(p0, p1, cc.pts[j - 1], cc.pts[j], tmp, degen);
                if (degen) out.degenerate_seen = true;
                for (auto& [t, u] : tmp) {
                    double param = cum[j - 1] + u * (cum[j] - cum[j - 1]);
                    hits.push_back({static_cast<double>(i - 1) + t, param, which});
                    if (param > 1.0 - 1e-9) out.near_truncation = true;
                }
            }
        }
    }
    // identical curve times are ordered by crosscut parameter ascending
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.t_curve != b.t_curve) return a.t_curve < b.t_curve;
        return a.param < b.param;
    });

    double r_m = 0.0, r_p = 0.0;       // running progress R_j(t)
    int target = -1;                   // first crossing targets xi_{-1}
    double frozen = 0.0;               // R_target at the previous crossing time
    for (const auto& h : hits) {
        double& r = h.which < 0 ? r_m : r_p;
        if (h.which == target && h.param > frozen && h.param < 1.0) {
            ++out.count;
            out.times.push_back(h.t_curve);
            if (r < h.param) r = h.param;
            target = -target;
            frozen = target < 0 ? r_m : r_p;
            if (max_n > 0 && out.count >= max_n) return out;
            continue;
        }
        if (r < h.param) r = h.param;
    }
    return out;
}

ComparisonVerdict comparison_check(const std::vector<Cplx>& curve, const Crosscut& xi_m,
                                   const Crosscut& xi_p, const Crosscut& xihat_m,
                                   const Crosscut& xihat_p) {
    ComparisonVerdict v;
    v.count_plain = well_oriented_count(curve, xi_m, xi_p).count;
    v.count_hat = well_oriented_count(curve, xihat_m, xihat_p).count;
    v.ok = v.count_hat >= v.count_plain;
    return v;
}

namespace {
// Dipping curve over two disc centers: vertical dips at increasing
// abscissae, connected at strictly increasing heights, so the polyline is
// simple by construction.
struct DipPlan {
    double center;
    double offset;   // dip abscissa = center + offset
    double depth;    // lowest height reached
};

std::vector<Cplx> build_dips(const std::vector<DipPlan>& dips, double h0, double dh,
                             double start_x) {
    std::vector<Cplx> pts;
    double level = h0;
    pts.emplace_back(start_x, 0.0);
    pts.emplace_back(start_x, level);
    for (const auto& d : dips) {
        double x = d.center + d.offset;
        pts.emplace_back(x, level);
        pts.emplace_back(x, d.depth);
        level += dh;
        pts.emplace_back(x, level);
    }
    pts.emplace_back(pts.back().real(), level + dh);
    return pts;
}
}  // namespace

ComparisonFixture figure_fixture_2_5() {
    ComparisonFixture f;
    const double a = -6.0, b = 6.0;
    const double r_in = 1.0, r_out = 2.0;
    f.xi_m = crosscut_semicircle(a, r_in);
    f.xi_p = crosscut_semicircle(b, r_in);
    f.xihat_m = crosscut_semicircle(a, r_out);
    f.xihat_p = crosscut_semicircle(b, r_out);
    // deep, deep, then three shallow dips (annulus only): plain 2, hat 5
    std::vector<DipPlan> dips = {
        {a, -0.20, 0.3}, {b, -0.20, 0.3}, {a, 0.00, 1.4}, {b, 0.00, 1.4}, {a, 0.20, 1.4},
    };
    f.curve = build_dips(dips, 3.0, 0.4, 0.0);
    f.expected_plain = 2;
    f.expected_hat = 5;
    return f;
}

ComparisonFixture random_fixture(std::uint64_t seed) {
    Xoshiro256pp rng(mix_seed(seed, 0x9e37));
    auto unif = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.uniform01(); };

    ComparisonFixture f;
    const double r_in_a = unif(0.5, 1.2), r_out_a = r_in_a + unif(0.5, 1.5);
    const double r_in_b = unif(0.5, 1.2), r_out_b = r_in_b + unif(0.5, 1.5);
    const double a = -unif(4.0, 9.0) - r_out_a;
    const double b = unif(4.0, 9.0) + r_out_b;
    f.xi_m = crosscut_semicircle(a, r_in_a);
    f.xi_p = crosscut_semicircle(b, r_in_b);
    f.xihat_m = crosscut_semicircle(a, r_out_a);
    f.xihat_p = crosscut_semicircle(b, r_out_b);

    const int n_dips = 2 + static_cast<int>(rng.next() % 7);
    std::vector<DipPlan> dips;
    std::vector<bool> deep_flags;
    double off_a = -0.4 * r_in_a, off_b = -0.4 * r_in_b;
    for (int i = 0; i < n_dips; ++i) {
        bool into_a = (i % 2 == 0);
        double center = into_a ? a : b;
        double& off = into_a ? off_a : off_b;
        double r_in = into_a ? r_in_a : r_in_b;
        double r_out = into_a ? r_out_a : r_out_b;
        bool deep = rng.uniform01() < 0.75;
        double depth = deep ? unif(0.05, 0.5) * r_in
                            : (r_in + unif(0.2, 0.8) * (r_out - r_in));
        dips.push_back({center, off, depth});
        off += 0.12 * r_in;  // later dips land at fresh parameters
        deep_flags.push_back(deep);
    }
    f.curve = build_dips(dips, std::max(r_out_a, r_out_b) + 1.0, 0.3, 0.5 * (a + b));
    // expected counts: dips alternate sides starting at side a (= first
    // target); every dip reaches its hat circle, deep ones the inner circle
    int plain = 0;
    bool want_a = true;
    for (int i = 0; i < n_dips; ++i) {
        bool into_a = (i % 2 == 0);
        if (deep_flags[i] && into_a == want_a) {
            ++plain;
            want_a = !want_a;
        }
    }
    f.expected_plain = plain;
    f.expected_hat = n_dips;
    return f;
}

std::vector<Cplx> resample_polyline(const std::vector<Cplx>& pts, int k) {
    if (pts.size() < 2 || k <= 1) return pts;
    std::vector<Cplx> out;
    out.reserve((pts.size() - 1) * k + 1);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        for (int j = 0; j < k; ++j) {
            double f = static_cast<double>(j) / k;
            out.push_back(pts[i - 1] + f * (pts[i] - pts[i - 1]));
        }
    }
    out.push_back(pts.back());
    return out;
}

}  // namespace armlab
