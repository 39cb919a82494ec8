#include "armlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace armlab {

std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string results_csv(const std::vector<PointStats>& pts) {
    std::ostringstream os;
    os << "grid_value,trials,hits,p_hat,stderr,horizon_failures\n";
    for (const auto& p : pts) {
        os << fmt_g17(p.grid_value) << ',' << p.trials << ',' << p.hits << ','
           << fmt_g17(p.p_hat) << ',' << fmt_g17(p.se) << ',' << p.horizon_failures << '\n';
    }
    return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string run_id_from(const std::string& config_dump) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(config_dump)));
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string svg_loglog_plot(const std::vector<PointStats>& pts, const FitResult& fit,
                            double predicted, const std::string& title) {
    const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : pts) {
        if (!(p.p_hat > 0.0)) continue;
        double lx = std::log10(p.grid_value), ly = std::log10(p.p_hat);
        xmin = std::min(xmin, lx);
        xmax = std::max(xmax, lx);
        ymin = std::min(ymin, ly);
        ymax = std::max(ymax, ly);
    }
    if (xmin > xmax) {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    double padx = 0.05 * (xmax - xmin + 1e-12), pady = 0.15 * (ymax - ymin + 1e-12);
    xmin -= padx;
    xmax += padx;
    ymin -= pady;
    ymax += pady;
    auto X = [&](double lx) { return ml + (lx - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto Y = [&](double ly) { return H - mb - (ly - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
       << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << title << "</text>\n"
       << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
       << H - mb << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
       << "\" stroke=\"black\"/>\n";
    // axis tick labels at the extremes
    os << "<text x=\"" << X(xmin + padx) << "\" y=\"" << H - mb + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">1e" << fmt_g17(xmin + padx) << "</text>\n"
       << "<text x=\"" << X(xmax - padx) << "\" y=\"" << H - mb + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">1e" << fmt_g17(xmax - padx) << "</text>\n"
       << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
       << "\" font-size=\"12\" text-anchor=\"middle\">grid value (log10)</text>\n";

    // fitted line and predicted-slope guide through the weighted center
    if (fit.valid) {
        const double l10 = std::log(10.0);
        auto fit_y = [&](double lx) {
            return (fit.intercept + fit.slope * (lx * l10)) / l10;
        };
        os << "<line x1=\"" << X(xmin) << "\" y1=\"" << Y(fit_y(xmin)) << "\" x2=\"" << X(xmax)
           << "\" y2=\"" << Y(fit_y(xmax)) << "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
        double cx = 0.5 * (xmin + xmax), cy = fit_y(cx);
        auto guide_y = [&](double lx) { return cy + predicted * (lx - cx); };
        os << "<line x1=\"" << X(xmin) << "\" y1=\"" << Y(guide_y(xmin)) << "\" x2=\""
           << X(xmax) << "\" y2=\"" << Y(guide_y(xmax))
           << "\" stroke=\"#2ca02c\" stroke-dasharray=\"6,4\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << W - mr - 6 << "\" y=\"" << mt + 16
           << "\" font-size=\"12\" text-anchor=\"end\">slope " << fmt_g17(fit.slope)
           << " &#177; " << fmt_g17(fit.se_slope) << " (predicted " << fmt_g17(predicted)
           << ")</text>\n";
    }
    for (const auto& p : pts) {
        if (!(p.p_hat > 0.0)) continue;
        double lx = std::log10(p.grid_value), ly = std::log10(p.p_hat);
        // 1-sigma error bar on log10 p
        double rel = p.se > 0.0 ? p.se / p.p_hat / std::log(10.0) : 0.0;
        os << "<line x1=\"" << X(lx) << "\" y1=\"" << Y(ly - rel) << "\" x2=\"" << X(lx)
           << "\" y2=\"" << Y(ly + rel) << "\" stroke=\"#1f77b4\"/>\n";
        os << "<circle cx=\"" << X(lx) << "\" cy=\"" << Y(ly)
           << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace armlab
