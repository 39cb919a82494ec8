#pragma once

namespace armlab {

// Boundary arm-exponent table.
//
//   kappa in (0,8):  a+_{2n-1} = n(4n+4-kappa)/kappa,  a+_{2n} = n(4n+8-kappa)/kappa
//   kappa >= 8:      a+_{2n-1} = (n-1)(4n+kappa-8)/kappa, a+_{2n} = n(4n+kappa-8)/kappa
//   kappa in (4,8):  ahat+_{2n-1} = n(4n+kappa-8)/kappa, ahat+_{2n} = n(4n+kappa-4)/kappa
//
// with a+_0 = ahat+_0 = 0.

enum class ExponentKind { alpha_plus_lt8, alpha_plus_ge8, alpha_hat };

// alpha_j for the given family; throws std::domain_error on an incompatible
// (kind, kappa) pair or j < 0.
double predicted_exponent(ExponentKind kind, double kappa, int j);

// u1(l) = (4-k/2)/k + sqrt(4kl+(4-k/2)^2)/k
// u2(l) = (k/2-2)/k + sqrt(4kl+(k/2-2)^2)/k
double u1(double kappa, double lambda);
double u2(double kappa, double lambda);

// Max absolute residual of the recursion identities up to n_max:
//   u2(a_{2n-1}) = a_{2n} - a_{2n-1},  a_{2n+1} = u1(a_{2n}) + a_{2n}
// and for kappa in (4,8) the hat versions
//   ahat_{2n} = u1(ahat_{2n-1}) + ahat_{2n-1},
//   ahat_{2n+1} = u2(ahat_{2n}) + ahat_{2n}.
double check_recursions(double kappa, int n_max);

}  // namespace armlab
