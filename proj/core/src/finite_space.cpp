#include "lapdsm/finite_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lapdsm/errors.hpp"
#include "lapdsm/numerics.hpp"
#include "lapdsm/parallel.hpp"

namespace lapdsm {

namespace {

constexpr double kTruncationTail = 1e-14;
constexpr std::size_t kPointBlock = 1024;

// i^p for any integer p.
Complex i_power(int p) {
    switch (((p % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

SourceTestingSpace SourceTestingSpace::lattice(const Domain& domain, int per_side, double wavenumber) {
    if (per_side < 1) throw ValidationError("source lattice: need at least one point per side");
    SourceTestingSpace s;
    s.wavenumber = wavenumber;
    const auto coord = [per_side](double lo, double hi, int i) {
        return per_side == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (per_side - 1);
    };
    for (int r = 0; r < per_side; ++r) {
        for (int c = 0; c < per_side; ++c) {
            s.sources.push_back({coord(domain.xmin, domain.xmax, c), coord(domain.ymin, domain.ymax, r)});
        }
    }
    return s;
}

double SourceTestingSpace::max_radius() const {
    double r = 0.0;
    for (const Vec2& y : sources) r = std::max(r, norm(y));
    return r;
}

Eigen::MatrixXcd ffsm_matrix(const ApertureSet& aperture, int trial_order, int testing_order) {
    if (trial_order < 1 || testing_order < 1) throw ValidationError("ffsm_matrix: order must be >= 1");
    const int rows = 2 * testing_order + 1;
    const int cols = 2 * trial_order + 1;
    Eigen::MatrixXcd a(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const int n = r - testing_order;
        for (int c = 0; c < cols; ++c) {
            const int m = c - trial_order;
            const int d = m - n;
            Complex entry{0.0, 0.0};
            for (const Arc& arc : aperture.arcs()) {
                if (d == 0) {
                    entry += arc.alpha / kPi;
                } else {
                    entry += std::sin(d * arc.alpha) / (d * kPi) * unit_phase(d * arc.beta);
                }
            }
            a(r, c) = entry;
        }
    }
    return a;
}

Eigen::VectorXcd ffsm_rhs(Vec2 z, int order, double k) {
    const double radius = norm(z);
    const double theta = radius > 0.0 ? std::atan2(z.y, z.x) : 0.0;
    const auto j = bessel_j_sequence(order, k * radius);
    const Complex lead = unit_phase(0.25 * kPi) / (2.0 * std::sqrt(k));
    Eigen::VectorXcd b(2 * order + 1);
    for (int n = -order; n <= order; ++n) {
        const int a = std::abs(n);
        const double jn = (n < 0 && (a % 2 == 1)) ? -j[a] : j[a];
        b(n + order) = lead * i_power(-n) * jn * unit_phase(-n * theta);
    }
    return b;
}

int default_truncation(double k, double max_radius) {
    return static_cast<int>(std::ceil(k * max_radius)) + 30;
}

Eigen::MatrixXcd fssm_matrix(const ApertureSet& aperture, int order,
                             const SourceTestingSpace& sources, int truncation) {
    if (order < 1) throw ValidationError("fssm_matrix: order must be >= 1");
    const double k = sources.wavenumber;
    if (!(k > 0.0)) throw ValidationError("fssm_matrix: wavenumber must be positive");
    const double reach = k * sources.max_radius();
    if (truncation < 0 || truncation > kMaxBesselOrder ||
        std::abs(bessel_j(truncation, reach)) >= kTruncationTail) {
        throw ValidationError("fssm_matrix: truncation " + std::to_string(truncation) +
                              " leaves a Bessel tail above 1e-14 at k|y| = " + std::to_string(reach));
    }
    const int rows = static_cast<int>(sources.sources.size());
    const int cols = 2 * order + 1;
    const Complex lead = unit_phase(-0.25 * kPi) / (2.0 * kPi * std::sqrt(k));

    // C_{l,m,p} e^{i(m-p) beta_l} summed over arcs depends on m - p only.
    std::vector<Complex> arc_sum(static_cast<std::size_t>(2 * (order + truncation) + 1));
    for (int d = -(order + truncation); d <= order + truncation; ++d) {
        Complex s{0.0, 0.0};
        for (const Arc& arc : aperture.arcs()) {
            const double c = d == 0 ? arc.alpha : std::sin(arc.alpha * d) / d;
            s += c * unit_phase(d * arc.beta);
        }
        arc_sum[d + order + truncation] = s;
    }

    Eigen::MatrixXcd a(rows, cols);
    parallel_for(static_cast<std::size_t>(rows), [&](std::size_t row) {
        const Vec2 y = sources.sources[row];
        const double radius = norm(y);
        const double theta = radius > 0.0 ? std::atan2(y.y, y.x) : 0.0;
        const auto j = bessel_j_sequence(truncation, k * radius);
        std::vector<Complex> series(static_cast<std::size_t>(2 * truncation + 1));
        for (int p = -truncation; p <= truncation; ++p) {
            const int ap = std::abs(p);
            const double jp = (p < 0 && (ap % 2 == 1)) ? -j[ap] : j[ap];
            series[p + truncation] = i_power(p) * unit_phase(p * theta) * jp;
        }
        for (int m = -order; m <= order; ++m) {
            Complex acc{0.0, 0.0};
            for (int p = -truncation; p <= truncation; ++p) {
                acc += series[p + truncation] * arc_sum[m - p + order + truncation];
            }
            a(static_cast<Eigen::Index>(row), m + order) = lead * acc;
        }
    });
    return a;
}

Eigen::VectorXcd fssm_rhs(Vec2 z, const SourceTestingSpace& sources) {
    const double k = sources.wavenumber;
    Eigen::VectorXcd b(static_cast<Eigen::Index>(sources.sources.size()));
    for (std::size_t n = 0; n < sources.sources.size(); ++n) {
        b(static_cast<Eigen::Index>(n)) = bessel_j(0, k * norm(z - sources.sources[n])) / (4.0 * k);
    }
    return b;
}

TikhonovSolver::TikhonovSolver(const Eigen::MatrixXcd& matrix, double sigma)
    : adjoint_(matrix.adjoint()), sigma_(sigma) {
    if (!(sigma > 0.0)) throw ValidationError("tikhonov: sigma must be positive");
    Eigen::MatrixXcd normal = adjoint_ * matrix;
    normal.diagonal().array() += sigma;
    llt_.compute(normal);
    if (llt_.info() != Eigen::Success) {
        throw NumericalError("tikhonov: factorization of sigma I + A*A failed (sigma = " +
                             std::to_string(sigma) + ", |A| = " +
                             std::to_string(matrix.norm()) + ")");
    }
}

Eigen::VectorXcd TikhonovSolver::solve(const Eigen::VectorXcd& rhs) const {
    return llt_.solve(adjoint_ * rhs);
}

Eigen::MatrixXcd TikhonovSolver::solve(const Eigen::MatrixXcd& rhs) const {
    return llt_.solve(adjoint_ * rhs);
}

CoefficientField tikhonov_solve(const Eigen::MatrixXcd& matrix, double sigma,
                                const Eigen::MatrixXcd& rhs_field) {
    return TikhonovSolver(matrix, sigma).solve(rhs_field);
}

ProbingSet probing_from_coefficients(const CoefficientField& coeffs, const FourierTrialSpace& trial,
                                     const ApertureSet& aperture) {
    if (coeffs.rows() != trial.dimension()) {
        throw ValidationError("probing_from_coefficients: coefficient length does not match trial space");
    }
    const auto angles = aperture.receiver_angles();
    const auto q_total = static_cast<Eigen::Index>(angles.size());
    Eigen::MatrixXcd basis(q_total, trial.dimension());
    const double scale = 1.0 / std::sqrt(2.0 * kPi);
    for (Eigen::Index q = 0; q < q_total; ++q) {
        for (int n = -trial.order; n <= trial.order; ++n) {
            basis(q, n + trial.order) = scale * unit_phase(n * angles[q]);
        }
    }
    ProbingSet probing(static_cast<std::size_t>(coeffs.cols()), angles.size());
    // Column i of basis * coeffs is the probing function of point i.
    Eigen::Map<Eigen::MatrixXcd> out(probing.values().data(), q_total, coeffs.cols());
    out.noalias() = basis * coeffs;
    return probing;
}

double FiniteSpaceOptions::sigma() const { return std::pow(0.1, sigma_exponent); }

ProbingSet finite_space_probing(const FiniteSpaceOptions& options, const ApertureSet& aperture,
                                const SamplingGrid& grid, double k) {
    const FourierTrialSpace trial{options.trial_order};
    Eigen::MatrixXcd matrix;
    SourceTestingSpace sources;
    if (options.method == FiniteSpaceMethod::ffsm) {
        matrix = ffsm_matrix(aperture, options.trial_order, options.testing_order);
    } else {
        sources = SourceTestingSpace::lattice(grid.domain(), options.sources_per_side, k);
        const int truncation = options.truncation > 0
                                   ? options.truncation
                                   : default_truncation(k, sources.max_radius());
        matrix = fssm_matrix(aperture, options.trial_order, sources, truncation);
    }
    const TikhonovSolver solver(matrix, options.sigma());

    ProbingSet probing(grid.size(), static_cast<std::size_t>(aperture.total_receivers()));
    for (std::size_t begin = 0; begin < grid.size(); begin += kPointBlock) {
        const std::size_t end = std::min(grid.size(), begin + kPointBlock);
        const auto count = static_cast<Eigen::Index>(end - begin);
        Eigen::MatrixXcd rhs(matrix.rows(), count);
        parallel_for(end - begin, [&](std::size_t i) {
            const Vec2 z = grid.point(begin + i);
            rhs.col(static_cast<Eigen::Index>(i)) = options.method == FiniteSpaceMethod::ffsm
                                                        ? ffsm_rhs(z, options.testing_order, k)
                                                        : fssm_rhs(z, sources);
        });
        const ProbingSet block = probing_from_coefficients(solver.solve(rhs), trial, aperture);
        std::copy(block.values().begin(), block.values().end(),
                  probing.values().begin() + static_cast<std::ptrdiff_t>(begin * probing.receivers()));
    }
    return probing;
}

IndexField reconstruct_finite_space(const FarFieldData& data, const FiniteSpaceOptions& options,
                                    const SamplingGrid& grid, double k) {
    const ProbingSet probing = finite_space_probing(options, data.aperture, grid, k);
    const auto fields = index_per_incidence(data, probing, grid);
    return average_and_normalize(fields);
}

}  // namespace lapdsm
