#pragma once

namespace senseopt {

/// Standard normal complementary CDF, Q(x) = P(Z > x).
double gaussian_tail(double x);

/// Inverse of gaussian_tail on (0, 1). Throws std::domain_error outside.
/// The pair are mutual inverses to better than 1e-10 absolute over
/// p in [1e-8, 1 - 1e-8].
double gaussian_tail_inverse(double p);

}  // namespace senseopt
