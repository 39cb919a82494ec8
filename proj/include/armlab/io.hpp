#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "armlab/estimator.hpp"

namespace armlab {

// Stable CSV schema: one row per grid point, full-precision scientific
// notation.  Header: grid_value,trials,hits,p_hat,stderr,horizon_failures
std::string results_csv(const std::vector<PointStats>& pts);

// Full-precision number formatting shared by all writers.
std::string fmt_g17(double v);

// FNV-1a over the canonical config dump; run_id in hex.
std::uint64_t fnv1a(const std::string& s);
std::string run_id_from(const std::string& config_dump);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Self-contained SVG 1.1 log-log scatter with the fitted line and the
// predicted-slope guide line.
std::string svg_loglog_plot(const std::vector<PointStats>& pts, const FitResult& fit,
                            double predicted, const std::string& title);

}  // namespace armlab
