#include "armlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "armlab/driver.hpp"
#include "armlab/estimator.hpp"
#include "armlab/events.hpp"
#include "armlab/exponents.hpp"
#include "armlab/geometry.hpp"
#include "armlab/io.hpp"
#include "armlab/loewner.hpp"
#include "armlab/maps.hpp"

namespace armlab {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

Cplx parse_complex(const std::string& s) {
    // forms: "a", "bi", "a+bi", "a-bi"
    const char* p = s.c_str();
    char* end = nullptr;
    double first = std::strtod(p, &end);
    if (end == p) throw std::invalid_argument("bad complex number: " + s);
    if (*end == '\0') return Cplx(first, 0.0);
    if (*end == 'i' && end[1] == '\0') return Cplx(0.0, first);
    if (*end != '+' && *end != '-') throw std::invalid_argument("bad complex number: " + s);
    const char* q = end;
    char* end2 = nullptr;
    double second = std::strtod(q, &end2);
    if (end2 == q || *end2 != 'i' || end2[1] != '\0')
        throw std::invalid_argument("bad complex number: " + s);
    return Cplx(first, second);
}

std::string fmt_complex(Cplx z) {
    std::ostringstream os;
    auto r = [](double v) {
        // trim signed zeros for readable boundary values
        if (std::abs(v) < 5e-13) v = 0.0;
        std::ostringstream t;
        t.precision(12);
        t << v;
        return t.str();
    };
    os << r(z.real());
    os << (z.imag() < 0 ? "-" : "+") << r(std::abs(z.imag())) << 'i';
    return os.str();
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    if (s.find(',') != std::string::npos) {
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
        return out;
    }
    // start:count[:factor], default factor 0.5
    double start = 0.0, factor = 0.5;
    int count = 0;
    std::stringstream ss(s);
    std::string item;
    std::vector<std::string> parts;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 2 || parts.size() > 3)
        throw std::invalid_argument("grid format: start:count[:factor] or comma list");
    start = std::stod(parts[0]);
    count = std::stoi(parts[1]);
    if (parts.size() == 3) factor = std::stod(parts[2]);
    double v = start;
    for (int i = 0; i < count; ++i) {
        out.push_back(v);
        v *= factor;
    }
    return out;
}

struct EstimateArgs {
    std::string family = "H";
    int j = 1;
    double kappa = 6.0;
    double x = 1.0;
    double y = 0.0;
    std::string grid = "0.125:5";
    std::string grid_var = "eps";
    double x_over_eps = 0.0;
    long paths = 1000;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    std::string mode = "threshold";
    bool importance = false;
    bool coupled = false;
    int threads = 0;
    double dt_max = 1e-3;
    double c_step = 0.01;
    double delta_hit = 1e-6;
    double horizon_mult = 50.0;
};

EventVariant resolve_variant(const std::string& family, int j, bool trace) {
    const bool odd = (j % 2) != 0;
    if (family == "Hpi" || trace) return odd ? EventVariant::Hpi_odd : EventVariant::Hpi_even;
    if (family == "H") return odd ? EventVariant::H_odd : EventVariant::H_even;
    if (family == "Hhat") return odd ? EventVariant::Hhat_odd : EventVariant::Hhat_even;
    throw CLI::ValidationError("--event must be H, Hhat or Hpi");
}

json config_json(const EstimateArgs& a) {
    json c;
    c["event"] = a.family;
    c["n"] = a.j;
    c["kappa"] = a.kappa;
    c["x"] = a.x;
    c["y"] = a.y;
    c["grid"] = a.grid;
    c["grid_var"] = a.grid_var;
    c["x_over_eps"] = a.x_over_eps;
    c["paths"] = a.paths;
    c["seed"] = a.seed;
    c["mode"] = a.mode;
    c["importance"] = a.importance;
    c["coupled"] = a.coupled;
    c["dt_max"] = a.dt_max;
    c["c_step"] = a.c_step;
    c["delta_hit"] = a.delta_hit;
    c["horizon_mult"] = a.horizon_mult;
    return c;
}

EstimateArgs args_from_config(const json& c) {
    EstimateArgs a;
    a.family = c.value("event", a.family);
    a.j = c.value("n", a.j);
    a.kappa = c.value("kappa", a.kappa);
    a.x = c.value("x", a.x);
    a.y = c.value("y", a.y);
    a.grid = c.value("grid", a.grid);
    a.grid_var = c.value("grid_var", a.grid_var);
    a.x_over_eps = c.value("x_over_eps", a.x_over_eps);
    a.paths = c.value("paths", a.paths);
    a.seed = c.value("seed", a.seed);
    a.mode = c.value("mode", a.mode);
    a.importance = c.value("importance", a.importance);
    a.coupled = c.value("coupled", a.coupled);
    a.dt_max = c.value("dt_max", a.dt_max);
    a.c_step = c.value("c_step", a.c_step);
    a.delta_hit = c.value("delta_hit", a.delta_hit);
    a.horizon_mult = c.value("horizon_mult", a.horizon_mult);
    return a;
}

int run_estimate(const EstimateArgs& a) {
    const bool trace = a.mode == "trace";
    if (a.family == "Hpi" && !(a.kappa <= 4.0)) {
        std::cerr << "estimate: Hpi events require kappa <= 4 (use --mode trace with --event H "
                     "for geometric detection above 4)\n";
        return 2;
    }
    if (!trace && a.family != "Hpi" && !(a.kappa > 4.0)) {
        std::cerr << "estimate: threshold events require kappa > 4; use --event Hpi or --mode "
                     "trace for kappa <= 4\n";
        return 2;
    }

    EstimateConfig cfg;
    cfg.event.variant = resolve_variant(a.family, a.j, trace || a.family == "Hpi");
    cfg.event.n = (a.j % 2) != 0 ? (a.j + 1) / 2 : a.j / 2;
    cfg.event.kappa = a.kappa;
    cfg.event.x = a.x;
    cfg.event.y = a.y;
    cfg.grid = parse_grid(a.grid);
    cfg.grid_var = a.grid_var == "ratio" ? GridVariable::ratio : GridVariable::epsilon;
    cfg.x_over_eps = a.x_over_eps;
    cfg.paths = a.paths;
    cfg.seed = a.seed;
    cfg.dt.dt_max = a.dt_max;
    cfg.dt.c_step = a.c_step;
    cfg.dt.delta_hit = a.delta_hit;
    cfg.consts.horizon_mult = a.horizon_mult;
    cfg.importance = a.importance;
    cfg.coupled = a.coupled;
    cfg.threads = a.threads;

    ExperimentResult res = estimate_probability(cfg);

    json conf = config_json(a);
    const std::string run_id = run_id_from(conf.dump());
    fs::create_directories(a.out_dir);

    json summary;
    summary["run_id"] = run_id;
    summary["tool"] = "armlab";
    summary["version"] = kVersion;
    summary["config"] = conf;
    summary["predicted_exponent"] = res.predicted;
    json fitj;
    fitj["slope"] = res.fit.slope;
    fitj["intercept"] = res.fit.intercept;
    fitj["stderr_slope"] = res.fit.se_slope;
    fitj["r_squared"] = res.fit.r_squared;
    fitj["excluded_points"] = res.fit.excluded;
    fitj["valid"] = res.fit.valid;
    summary["fit"] = fitj;
    summary["z_slope"] = res.fit.valid && res.fit.se_slope > 0.0
                             ? (res.fit.slope - res.predicted) / res.fit.se_slope
                             : 0.0;
    json pts = json::array();
    for (const auto& p : res.points) {
        json pj;
        pj["grid_value"] = p.grid_value;
        pj["trials"] = p.trials;
        pj["hits"] = p.hits;
        pj["p_hat"] = p.p_hat;
        pj["stderr"] = p.se;
        pj["horizon_failures"] = p.horizon_failures;
        pts.push_back(pj);
    }
    summary["points"] = pts;

    std::ostringstream title;
    title << a.family << a.j << " kappa=" << a.kappa;
    const std::string csv = results_csv(res.points);
    const std::string svg = svg_loglog_plot(res.points, res.fit, res.predicted, title.str());
    const std::string summary_s = summary.dump(2) + "\n";

    json manifest;
    manifest["run_id"] = run_id;
    manifest["timestamp"] = static_cast<long long>(::time(nullptr));
    manifest["tool"] = "armlab";
    manifest["version"] = kVersion;
    manifest["command"] = "estimate";
    manifest["config"] = conf;
    manifest["outputs"] = json::array({"results.csv", "summary.json", "plot.svg"});

    write_file(a.out_dir + "/results.csv", csv);
    write_file(a.out_dir + "/summary.json", summary_s);
    write_file(a.out_dir + "/plot.svg", svg);
    write_file(a.out_dir + "/manifest.json", manifest.dump(2) + "\n");

    std::cout << "run " << run_id << ": slope " << res.fit.slope << " +/- " << res.fit.se_slope
              << " (predicted " << res.predicted << ")\n";
    return 0;
}

int cmd_maps_eval(const std::string& map, double y, const std::string& zs, double x0, double r) {
    Cplx z = parse_complex(zs);
    Cplx out;
    if (map == "halfstrip-f")
        out = halfstrip_f(y, z);
    else if (map == "halfstrip-g")
        out = halfstrip_g(y, z);
    else if (map == "semidisc")
        out = semidisc_g({x0, r}, z);
    else if (map == "phi") {
        std::cout << fmt_g17(phi(z.real())) << "\n";
        return 0;
    } else
        throw CLI::ValidationError("--map must be halfstrip-f, halfstrip-g, semidisc or phi");
    std::cout << fmt_complex(out) << "\n";
    return 0;
}

int cmd_maps_selftest() {
    int failures = 0;
    auto check = [&failures](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };
    check("f(1) = 0", std::abs(halfstrip_f0(Cplx(1.0, 0.0))) < 1e-12);
    check("f(-1) = i*pi",
          std::abs(halfstrip_f0(Cplx(-1.0, 0.0)) - Cplx(0.0, 3.14159265358979324)) < 1e-12);
    bool rt = true;
    for (int i = 1; i <= 20 && rt; ++i) {
        for (int k = 1; k <= 10 && rt; ++k) {
            Cplx zz(-5.0 + 0.5 * i, 0.3 * k);
            Cplx back = halfstrip_g(0.0, halfstrip_f0(zz));
            if (std::abs(back - zz) > 1e-8 * (1.0 + std::abs(zz))) rt = false;
        }
    }
    check("round trip g(f(z)) = z", rt);
    bool dv = true;
    for (int i = 0; i < 10 && dv; ++i) {
        Cplx zz(1.5 + 0.7 * i, 0.8);
        double h = 1e-6;
        Cplx fd = (halfstrip_f0(zz + h) - halfstrip_f0(zz - h)) / (2.0 * h);
        if (std::abs(fd - halfstrip_f0_deriv(zz)) > 1e-6 * std::abs(fd)) dv = false;
    }
    check("derivative vs finite difference", dv);
    bool mono = true;
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
        double x = phi_threshold() + 0.1 * i;
        double v = phi(x);
        if (v <= prev || v >= x) mono = false;
        prev = v;
    }
    check("phi increasing, phi(x) < x", mono);
    check("hm(stripe side) = 2",
          std::abs(hm_infinity(0.0, Cplx(0.0, 0.0), Cplx(0.0, 3.14159265358979324)) - 2.0) <
              1e-9);
    check("semidisc 2i -> 1.5i",
          std::abs(semidisc_g({0.0, 1.0}, Cplx(0.0, 2.0)) - Cplx(0.0, 1.5)) < 1e-12);
    return failures == 0 ? 0 : 1;
}

int cmd_verify(const std::string& suite, const json& params, const std::string& out_path) {
    json report;
    report["suite"] = suite;
    int rc = 0;
    if (suite == "recursions") {
        double kappa = params.value("kappa", 6.0);
        double res = check_recursions(kappa, params.value("n_max", 5));
        report["kappa"] = kappa;
        report["max_residual"] = res;
        rc = res <= 1e-12 ? 0 : 1;
        std::cout << "recursions kappa=" << kappa << " residual=" << res
                  << (rc == 0 ? " PASS" : " FAIL") << "\n";
    } else if (suite == "martingale") {
        MartingaleSpec ms;
        ms.kappa = params.value("kappa", 6.0);
        ms.rho_right = params.value("rho", 1.0);
        ms.x_right = params.value("x", 1.0);
        StepPolicy pol;
        pol.dt_max = params.value("dt_max", 1e-3);
        auto res = martingale_drift_test(ms, params.value("paths", 20000L),
                                         params.value("horizon", 0.05), params.value("seed", 1),
                                         pol);
        report["mean"] = res.mean;
        report["stderr"] = res.se;
        report["z"] = res.z;
        report["frozen_early"] = res.frozen_early;
        rc = std::abs(res.z) > 5.0 ? 1 : 0;
        std::cout << "martingale mean=" << res.mean << " z=" << res.z
                  << (rc == 0 ? " PASS" : " FAIL") << "\n";
    } else if (suite == "density") {
        double kappa = params.value("kappa", 6.0);
        double nu = params.value("nu", -1.0);
        auto res = invariant_density_test(kappa, nu, params.value("samples", 10000L),
                                          params.value("burn_in", 50.0),
                                          params.value("seed", 1));
        report["ks"] = res.ks;
        report["mean"] = res.mean;
        report["beta_a"] = res.beta_a;
        report["beta_b"] = res.beta_b;
        double ksz = res.ks * std::sqrt(static_cast<double>(res.samples)) / 1.36;
        rc = ksz > 5.0 ? 1 : 0;
        std::cout << "density ks=" << res.ks << " mean=" << res.mean
                  << (rc == 0 ? " PASS" : " FAIL") << "\n";
    } else if (suite == "comparison") {
        int fixtures = params.value("fixtures", 100);
        std::uint64_t seed = params.value("seed", 3);
        int violations = 0, count_mismatch = 0;
        auto fig = figure_fixture_2_5();
        auto v0 = comparison_check(fig.curve, fig.xi_m, fig.xi_p, fig.xihat_m, fig.xihat_p);
        if (!v0.ok) ++violations;
        if (v0.count_plain != fig.expected_plain || v0.count_hat != fig.expected_hat)
            ++count_mismatch;
        report["figure_counts"] = json::array({v0.count_plain, v0.count_hat});
        for (int i = 0; i < fixtures; ++i) {
            auto f = random_fixture(seed + i);
            auto v = comparison_check(f.curve, f.xi_m, f.xi_p, f.xihat_m, f.xihat_p);
            if (!v.ok) ++violations;
            if (v.count_plain != f.expected_plain || v.count_hat != f.expected_hat)
                ++count_mismatch;
        }
        report["fixtures"] = fixtures;
        report["violations"] = violations;
        report["count_mismatches"] = count_mismatch;
        rc = (violations == 0 && count_mismatch == 0) ? 0 : 1;
        std::cout << "comparison fixtures=" << fixtures << " violations=" << violations
                  << " mismatches=" << count_mismatch << (rc == 0 ? " PASS" : " FAIL") << "\n";
    } else if (suite == "girsanov") {
        StepPolicy pol;
        auto res = girsanov_check(params.value("kappa", 6.0), params.value("rho", 1.0),
                                  params.value("x", 1.0), params.value("frac", 0.3),
                                  params.value("paths", 4000L), params.value("horizon", 0.05),
                                  params.value("seed", 1), pol);
        report["p_direct"] = res.p_direct;
        report["p_weighted"] = res.p_weighted;
        report["z"] = res.z;
        rc = std::abs(res.z) > 5.0 ? 1 : 0;
        std::cout << "girsanov direct=" << res.p_direct << " weighted=" << res.p_weighted
                  << " z=" << res.z << (rc == 0 ? " PASS" : " FAIL") << "\n";
    } else {
        std::cerr << "unknown suite: " << suite << "\n";
        return 2;
    }
    if (!out_path.empty()) write_file(out_path, report.dump(2) + "\n");
    return rc;
}

int cmd_trace(double kappa, double horizon, std::uint64_t seed, std::uint64_t path_index,
              int skip, const std::string& out_path) {
    DriverConfig dc;
    dc.kappa = kappa;
    dc.seed = seed;
    DriverPath p = sample_sle(dc, path_index, horizon);
    std::ostringstream os;
    os << "t,w,tip_re,tip_im\n";
    double t = 0.0;
    for (std::size_t k = 1; k <= p.chain.size(); ++k) {
        t += p.chain.steps[k - 1].dt;
        if (k % static_cast<std::size_t>(skip) != 0 && k != p.chain.size()) continue;
        Cplx tip = trace_tip(p.chain, k);
        os << fmt_g17(t) << ',' << fmt_g17(p.chain.steps[k - 1].w1) << ','
           << fmt_g17(tip.real()) << ',' << fmt_g17(tip.imag()) << '\n';
    }
    if (out_path.empty())
        std::cout << os.str();
    else
        write_file(out_path, os.str());
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"armlab: chordal Loewner/SLE crossing-event laboratory"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // maps
    auto* maps = app.add_subcommand("maps", "evaluate or self-test the conformal maps");
    maps->require_subcommand(1);
    auto* ev = maps->add_subcommand("eval", "evaluate a map at a point");
    std::string map_name = "halfstrip-f", zs = "1";
    double my = 0.0, mx0 = 0.0, mr = 1.0;
    ev->add_option("--map", map_name, "halfstrip-f | halfstrip-g | semidisc | phi");
    ev->add_option("--y", my, "half-strip right edge");
    ev->add_option("--z", zs, "evaluation point, e.g. 0+2i");
    ev->add_option("--x0", mx0, "semidisc center");
    ev->add_option("--r", mr, "semidisc radius");
    auto* st = maps->add_subcommand("selftest", "run the conformal-map invariant suite");

    // estimate
    EstimateArgs ea;
    std::string config_path, from_manifest;
    auto* est = app.add_subcommand("estimate", "Monte Carlo crossing-probability experiment");
    est->add_option("--event", ea.family, "H | Hhat | Hpi");
    est->add_option("--n", ea.j, "arm index j >= 1");
    est->add_option("--kappa", ea.kappa);
    est->add_option("--x", ea.x);
    est->add_option("--y", ea.y);
    est->add_option("--eps-grid", ea.grid, "start:count[:factor] or comma list");
    est->add_option("--grid-var", ea.grid_var, "eps | ratio");
    est->add_option("--x-over-eps", ea.x_over_eps, "couple x = c*eps (0 = off)");
    est->add_option("--paths", ea.paths);
    est->add_option("--seed", ea.seed);
    est->add_option("--out-dir", ea.out_dir);
    est->add_option("--mode", ea.mode, "threshold | trace");
    est->add_flag("--importance", ea.importance);
    est->add_flag("--coupled", ea.coupled);
    est->add_option("--threads", ea.threads);
    est->add_option("--dt-max", ea.dt_max);
    est->add_option("--c-step", ea.c_step);
    est->add_option("--delta-hit", ea.delta_hit);
    est->add_option("--horizon-mult", ea.horizon_mult);
    est->add_option("--config", config_path, "JSON config file (flags override)");
    est->add_option("--from-manifest", from_manifest, "re-run a recorded manifest");

    // verify
    auto* ver = app.add_subcommand("verify", "run a verification suite");
    std::string suite, ver_out;
    double vkappa = 6.0, vnu = -1.0, vrho = 1.0, vx = 1.0, vhorizon = 0.05, vburn = 50.0;
    long vpaths = 20000, vsamples = 10000;
    int vfixtures = 100;
    std::uint64_t vseed = 1;
    ver->add_option("suite", suite, "recursions | martingale | density | comparison | girsanov")
        ->required();
    ver->add_option("--kappa", vkappa);
    ver->add_option("--nu", vnu);
    ver->add_option("--rho", vrho);
    ver->add_option("--x", vx);
    ver->add_option("--paths", vpaths);
    ver->add_option("--samples", vsamples);
    ver->add_option("--horizon", vhorizon);
    ver->add_option("--burn-in", vburn);
    ver->add_option("--fixtures", vfixtures);
    ver->add_option("--seed", vseed);
    ver->add_option("--out", ver_out, "write the JSON report here");

    // trace
    auto* tr = app.add_subcommand("trace", "dump a single-path trace as CSV");
    double tkappa = 8.0 / 3.0, thorizon = 1.0;
    std::uint64_t tseed = 1, tpath = 0;
    int tskip = 10;
    std::string tout;
    tr->add_option("--kappa", tkappa);
    tr->add_option("--horizon", thorizon);
    tr->add_option("--seed", tseed);
    tr->add_option("--path-index", tpath);
    tr->add_option("--skip", tskip);
    tr->add_option("--out", tout);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (ev->parsed()) return cmd_maps_eval(map_name, my, zs, mx0, mr);
        if (st->parsed()) return cmd_maps_selftest();
        if (est->parsed()) {
            if (!from_manifest.empty()) {
                json manifest = json::parse(read_file(from_manifest));
                EstimateArgs a = args_from_config(manifest.at("config"));
                if (est->count("--out-dir")) a.out_dir = ea.out_dir;
                a.threads = ea.threads;
                return run_estimate(a);
            }
            EstimateArgs a = ea;
            if (!config_path.empty()) {
                json conf = json::parse(read_file(config_path));
                a = args_from_config(conf);
                // flags override the config file
                auto ov = [&](const char* name, auto& dst, const auto& src) {
                    if (est->count(name)) dst = src;
                };
                ov("--event", a.family, ea.family);
                ov("--n", a.j, ea.j);
                ov("--kappa", a.kappa, ea.kappa);
                ov("--x", a.x, ea.x);
                ov("--y", a.y, ea.y);
                ov("--eps-grid", a.grid, ea.grid);
                ov("--grid-var", a.grid_var, ea.grid_var);
                ov("--x-over-eps", a.x_over_eps, ea.x_over_eps);
                ov("--paths", a.paths, ea.paths);
                ov("--seed", a.seed, ea.seed);
                ov("--out-dir", a.out_dir, ea.out_dir);
                ov("--mode", a.mode, ea.mode);
                ov("--dt-max", a.dt_max, ea.dt_max);
                ov("--c-step", a.c_step, ea.c_step);
                ov("--delta-hit", a.delta_hit, ea.delta_hit);
                ov("--horizon-mult", a.horizon_mult, ea.horizon_mult);
                if (est->count("--importance")) a.importance = ea.importance;
                if (est->count("--coupled")) a.coupled = ea.coupled;
                a.threads = ea.threads;
            }
            return run_estimate(a);
        }
        if (ver->parsed()) {
            json params;
            params["kappa"] = vkappa;
            params["nu"] = vnu;
            params["rho"] = vrho;
            params["x"] = vx;
            params["paths"] = vpaths;
            params["samples"] = vsamples;
            params["horizon"] = vhorizon;
            params["burn_in"] = vburn;
            params["fixtures"] = vfixtures;
            params["seed"] = vseed;
            return cmd_verify(suite, params, ver_out);
        }
        if (tr->parsed()) return cmd_trace(tkappa, thorizon, tseed, tpath, tskip, tout);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace armlab
