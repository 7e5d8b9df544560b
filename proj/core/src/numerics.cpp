#include "lapdsm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lapdsm/errors.hpp"

namespace lapdsm {
namespace {

constexpr double kSeriesCutoff = 2.0;
constexpr double kRescaleAbove = 1.0e250;
constexpr double kRescaleFactor = 1.0e-250;

void check_bessel_args(int order, double x) {
    if (order < 0 || order > kMaxBesselOrder) {
        throw DomainError("bessel_j: unsupported order " + std::to_string(order));
    }
    if (!(x >= 0.0) || x > kMaxBesselArgument) {
        throw DomainError("bessel_j: argument outside [0, 1e4]: " + std::to_string(x));
    }
}

// Ascending series; no cancellation worth mentioning for x < 2.
double j_series(int order, double x) {
    const double half = 0.5 * x;
    double lead = 1.0;
    for (int i = 1; i <= order; ++i) lead *= half / i;
    if (lead == 0.0) return 0.0;
    const double q = -half * half;
    double term = lead;
    double sum = lead;
    for (int m = 1; m < 200; ++m) {
        term *= q / (static_cast<double>(m) * (m + order));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

int miller_start(int max_order, double x) {
    const double top = std::max(static_cast<double>(max_order), std::ceil(x));
    int start = static_cast<int>(top + 15.0 + std::sqrt(60.0 * std::max(top, 1.0)));
    return start + (start & 1);
}

// Normalized J_0..J_n for every n up to the recurrence start, x > 0.
std::vector<double> miller_table(int max_order, double x) {
    const int start = miller_start(max_order, x);
    std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
    j[start + 1] = 0.0;
    j[start] = 1e-30;
    for (int n = start; n >= 1; --n) {
        j[n - 1] = (2.0 * n / x) * j[n] - j[n + 1];
        if (std::abs(j[n - 1]) > kRescaleAbove) {
            for (int m = n - 1; m <= start; ++m) j[m] *= kRescaleFactor;
        }
    }
    double norm = j[0];
    for (int n = 2; n <= start; n += 2) norm += 2.0 * j[n];
    for (double& v : j) v /= norm;
    return j;
}

struct LowOrderSweep {
    double j0, j1, y0, y1;
};

// One downward sweep yielding J_0, J_1 and the Neumann sums
//   Y_0 = (2/pi) [ (ln(x/2) + gamma) J_0 - 2 sum_k (-1)^k J_{2k} / k ]
//   Y_1 = -Y_0' = -(2/pi) [ J_0/x - (ln(x/2) + gamma) J_1
//                           - sum_k (-1)^k (J_{2k-1} - J_{2k+1}) / k ]
LowOrderSweep low_order_sweep(double x) {
    const int start = miller_start(1, x);
    double next = 0.0;
    double cur = 1e-30;
    double norm = 0.0;
    double s0 = 0.0;
    double s1 = 0.0;
    for (int n = start; n >= 1; --n) {
        const double prev = (2.0 * n / x) * cur - next;
        if (n % 2 == 0) {
            const int k = n / 2;
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            norm += 2.0 * cur;
            s0 += sign * cur / k;
            s1 += sign * (prev - next) / k;
        }
        next = cur;
        cur = prev;
        if (std::abs(cur) > kRescaleAbove) {
            cur *= kRescaleFactor;
            next *= kRescaleFactor;
            norm *= kRescaleFactor;
            s0 *= kRescaleFactor;
            s1 *= kRescaleFactor;
        }
    }
    norm += cur;
    const double j0 = cur / norm;
    const double j1 = next / norm;
    s0 /= norm;
    s1 /= norm;
    const double log_term = std::log(0.5 * x) + std::numbers::egamma;
    const double y0 = (2.0 / kPi) * (log_term * j0 - 2.0 * s0);
    const double y1 = -(2.0 / kPi) * (j0 / x - log_term * j1 - s1);
    return {j0, j1, y0, y1};
}

}  // namespace

double bessel_j(int order, double x) {
    check_bessel_args(order, x);
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;
    if (x < kSeriesCutoff) return j_series(order, x);

    // Scalar Miller sweep: only the requested order is kept.
    const int start = miller_start(order, x);
    double next = 0.0;
    double cur = 1e-30;
    double kept = order == start ? cur : 0.0;
    double norm = 0.0;
    for (int n = start; n >= 1; --n) {
        if (n % 2 == 0) norm += 2.0 * cur;
        const double prev = (2.0 * n / x) * cur - next;
        next = cur;
        cur = prev;
        if (n - 1 == order) kept = cur;
        if (std::abs(cur) > kRescaleAbove) {
            cur *= kRescaleFactor;
            next *= kRescaleFactor;
            norm *= kRescaleFactor;
            kept *= kRescaleFactor;
        }
    }
    norm += cur;
    return kept / norm;
}

std::vector<double> bessel_j_sequence(int max_order, double x) {
    check_bessel_args(max_order, x);
    std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (x < kSeriesCutoff) {
        for (int n = 0; n <= max_order; ++n) out[n] = j_series(n, x);
        return out;
    }
    const auto table = miller_table(max_order, x);
    std::copy_n(table.begin(), out.size(), out.begin());
    return out;
}

double bessel_j_signed(int order, double x) {
    const int n = std::abs(order);
    const double v = bessel_j(n, x);
    return (order < 0 && (n % 2 == 1)) ? -v : v;
}

double bessel_y(int order, double x) {
    if (order != 0 && order != 1) {
        throw DomainError("bessel_y: only orders 0 and 1 are supported");
    }
    if (!(x > 0.0) || x > kMaxBesselArgument) {
        throw DomainError("bessel_y: argument outside (0, 1e4]: " + std::to_string(x));
    }
    const LowOrderSweep sw = low_order_sweep(x);
    return order == 0 ? sw.y0 : sw.y1;
}

Complex hankel1(int order, double x) {
    if (order != 0 && order != 1) {
        throw DomainError("hankel1: only orders 0 and 1 are supported");
    }
    if (!(x >= 1e-8) || x > kMaxBesselArgument) {
        throw DomainError("hankel1: argument outside [1e-8, 1e4]: " + std::to_string(x));
    }
    const LowOrderSweep sw = low_order_sweep(x);
    return order == 0 ? Complex{sw.j0, sw.y0} : Complex{sw.j1, sw.y1};
}

Complex arc_quadrature(std::span<const Complex> values, const ApertureSet& aperture) {
    if (values.size() != static_cast<std::size_t>(aperture.total_receivers())) {
        throw ValidationError("arc_quadrature: " + std::to_string(values.size()) +
                              " values for " + std::to_string(aperture.total_receivers()) +
                              " receivers");
    }
    Complex total{0.0, 0.0};
    std::size_t q = 0;
    for (const Arc& arc : aperture.arcs()) {
        Complex partial{0.0, 0.0};
        for (int i = 0; i < arc.receivers; ++i) partial += values[q++];
        total += (2.0 * arc.alpha / arc.receivers) * partial;
    }
    return total;
}

double arc_norm(std::span<const Complex> values, const ApertureSet& aperture) {
    if (values.size() != static_cast<std::size_t>(aperture.total_receivers())) {
        throw ValidationError("arc_norm: value count does not match receiver count");
    }
    double total = 0.0;
    std::size_t q = 0;
    for (const Arc& arc : aperture.arcs()) {
        double partial = 0.0;
        for (int i = 0; i < arc.receivers; ++i) partial += std::norm(values[q++]);
        total += (2.0 * arc.alpha / arc.receivers) * partial;
    }
    return std::sqrt(total);
}

}  // namespace lapdsm
