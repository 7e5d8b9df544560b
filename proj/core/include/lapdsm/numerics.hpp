#pragma once

#include <span>
#include <vector>

#include "lapdsm/aperture.hpp"
#include "lapdsm/types.hpp"

namespace lapdsm {

inline constexpr int kMaxBesselOrder = 200;
inline constexpr double kMaxBesselArgument = 1.0e4;

// J_order(x) for 0 <= order <= 200 and 0 <= x <= 1e4.
//
// Small arguments use the ascending series. Everything else runs Miller's
// downward recurrence from an index above max(order, x), normalized with
// J_0 + 2 * sum J_{2k} = 1.
double bessel_j(int order, double x);

// J_0(x) .. J_max_order(x) from one recurrence sweep.
std::vector<double> bessel_j_sequence(int max_order, double x);

// Signed-order convenience: J_{-n}(x) = (-1)^n J_n(x).
double bessel_j_signed(int order, double x);

// Y_0 / Y_1 through the Neumann series in even-order J values.
double bessel_y(int order, double x);

// H^(1)_order(x) = J_order(x) + i Y_order(x) for order 0 or 1, 1e-8 <= x <= 1e4.
Complex hankel1(int order, double x);

// sum_q w_q * values_q with w_q = 2 alpha_l / Q_l on arc l.
Complex arc_quadrature(std::span<const Complex> values, const ApertureSet& aperture);

// L2(Gamma) norm of sampled values, sqrt(sum_q w_q |values_q|^2).
double arc_norm(std::span<const Complex> values, const ApertureSet& aperture);

}  // namespace lapdsm
