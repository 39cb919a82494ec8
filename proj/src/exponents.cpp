#include "armlab/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace armlab {

double predicted_exponent(ExponentKind kind, double kappa, int j) {
    if (j < 0) throw std::domain_error("predicted_exponent: j < 0");
    if (j == 0) return 0.0;
    const bool odd = (j % 2) != 0;
    const double n = odd ? (j + 1) / 2 : j / 2;
    switch (kind) {
        case ExponentKind::alpha_plus_lt8:
            if (!(kappa > 0.0 && kappa < 8.0))
                throw std::domain_error("predicted_exponent: alpha_plus_lt8 needs kappa in (0,8)");
            return odd ? n * (4.0 * n + 4.0 - kappa) / kappa
                       : n * (4.0 * n + 8.0 - kappa) / kappa;
        case ExponentKind::alpha_plus_ge8:
            if (!(kappa >= 8.0))
                throw std::domain_error("predicted_exponent: alpha_plus_ge8 needs kappa >= 8");
            return odd ? (n - 1.0) * (4.0 * n + kappa - 8.0) / kappa
                       : n * (4.0 * n + kappa - 8.0) / kappa;
        case ExponentKind::alpha_hat:
            if (!(kappa > 4.0 && kappa < 8.0))
                throw std::domain_error("predicted_exponent: alpha_hat needs kappa in (4,8)");
            return odd ? n * (4.0 * n + kappa - 8.0) / kappa
                       : n * (4.0 * n + kappa - 4.0) / kappa;
    }
    throw std::domain_error("predicted_exponent: bad kind");
}

double u1(double kappa, double lambda) {
    double a = 4.0 - kappa / 2.0;
    return (a + std::sqrt(4.0 * kappa * lambda + a * a)) / kappa;
}

double u2(double kappa, double lambda) {
    double a = kappa / 2.0 - 2.0;
    return (a + std::sqrt(4.0 * kappa * lambda + a * a)) / kappa;
}

double check_recursions(double kappa, int n_max) {
    double worst = 0.0;
    auto upd = [&worst](double r) { worst = std::max(worst, std::abs(r)); };
    if (kappa > 0.0 && kappa < 8.0) {
        for (int n = 1; n <= n_max; ++n) {
            double a_odd = predicted_exponent(ExponentKind::alpha_plus_lt8, kappa, 2 * n - 1);
            double a_even = predicted_exponent(ExponentKind::alpha_plus_lt8, kappa, 2 * n);
            double a_next = predicted_exponent(ExponentKind::alpha_plus_lt8, kappa, 2 * n + 1);
            upd(u2(kappa, a_odd) - (a_even - a_odd));
            upd(u1(kappa, a_even) + a_even - a_next);
        }
    }
    if (kappa > 4.0 && kappa < 8.0) {
        for (int n = 1; n <= n_max; ++n) {
            double h_odd = predicted_exponent(ExponentKind::alpha_hat, kappa, 2 * n - 1);
            double h_even = predicted_exponent(ExponentKind::alpha_hat, kappa, 2 * n);
            double h_next = predicted_exponent(ExponentKind::alpha_hat, kappa, 2 * n + 1);
            upd(u1(kappa, h_odd) + h_odd - h_even);
            upd(u2(kappa, h_even) + h_even - h_next);
        }
    }
    return worst;
}

}  // namespace armlab
