#include "lapdsm/forward.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "lapdsm/dsm.hpp"
#include "lapdsm/errors.hpp"
#include "lapdsm/numerics.hpp"

namespace lapdsm {

namespace {
constexpr double kMinCellsPerWavelength = 10.0;
constexpr double kMinRcond = 1e-13;

Complex plane_wave(double k, Vec2 d, Vec2 y) {
    const double phase = k * dot(y, d);
    return {std::cos(phase), std::sin(phase)};
}
}  // namespace

ContrastGrid make_contrast_grid(const Scene& scene, int resolution) {
    if (resolution <= 0) throw ValidationError("contrast grid: resolution must be positive");
    const Domain& d = scene.domain();
    const double hx = d.width() / resolution;
    const double hy = d.height() / resolution;
    const double wavelength = 2.0 * kPi / scene.wavenumber();
    if (wavelength / std::max(hx, hy) < kMinCellsPerWavelength) {
        throw ValidationError("contrast grid: " + std::to_string(resolution) +
                              " cells do not resolve the wavelength (need >= 10 per wavelength)");
    }
    ContrastGrid g;
    g.domain = d;
    g.resolution = resolution;
    g.cell_area = hx * hy;
    for (int r = 0; r < resolution; ++r) {
        for (int c = 0; c < resolution; ++c) {
            const Vec2 y{d.xmin + (c + 0.5) * hx, d.ymin + (r + 0.5) * hy};
            const double q = refractive_index_at(scene, y) - 1.0;
            if (q != 0.0) {
                g.centers.push_back(y);
                g.contrast.push_back(q);
            }
        }
    }
    return g;
}

Complex green_2d(double k, double r) { return 0.25 * kI * hankel1(0, k * r); }

Complex green_disk_integral(double k, double radius) {
    const double ka = k * radius;
    return (kI / (2.0 * k * k)) * (kPi * ka * hankel1(1, ka) + 2.0 * kI);
}

struct ScatteringSystem::Factorization {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
};

ScatteringSystem::ScatteringSystem(double wavenumber, ContrastGrid grid)
    : k_(wavenumber), grid_(std::move(grid)) {
    const auto n = static_cast<Eigen::Index>(grid_.unknowns());
    if (n == 0) return;
    const double k2 = k_ * k_;
    const double h2 = grid_.cell_area;
    const Complex self = green_disk_integral(k_, std::sqrt(h2 / kPi));

    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        a(j, j) = 1.0 - k2 * grid_.contrast[j] * self;
        for (Eigen::Index m = j + 1; m < n; ++m) {
            const Complex g = green_2d(k_, norm(grid_.centers[j] - grid_.centers[m])) * h2;
            a(j, m) = -k2 * grid_.contrast[m] * g;
            a(m, j) = -k2 * grid_.contrast[j] * g;
        }
    }
    lu_ = std::make_unique<Factorization>();
    lu_->lu.compute(a);
    rcond_ = lu_->lu.rcond();
    if (!(rcond_ > kMinRcond)) {
        throw NumericalError("scattering system is singular or ill-conditioned (rcond estimate " +
                             std::to_string(rcond_) + ")");
    }
}

ScatteringSystem::~ScatteringSystem() = default;
ScatteringSystem::ScatteringSystem(ScatteringSystem&&) noexcept = default;
ScatteringSystem& ScatteringSystem::operator=(ScatteringSystem&&) noexcept = default;

ForwardSolution ScatteringSystem::solve(Vec2 incidence) const {
    ForwardSolution s;
    s.wavenumber = k_;
    s.cell_area = grid_.cell_area;
    s.centers = grid_.centers;
    const auto n = static_cast<Eigen::Index>(grid_.unknowns());
    if (n == 0) return s;
    Eigen::VectorXcd rhs(n);
    for (Eigen::Index j = 0; j < n; ++j) rhs(j) = plane_wave(k_, incidence, grid_.centers[j]);
    const Eigen::VectorXcd u = lu_->lu.solve(rhs);
    s.total_field.assign(u.data(), u.data() + n);
    s.induced_current.resize(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        s.induced_current[j] = grid_.contrast[j] * k_ * k_ * u(j);
    }
    return s;
}

ForwardSolution solve_scattering(const Scene& scene, std::size_t incidence_index,
                                 const ContrastGrid& grid) {
    if (incidence_index >= scene.incidences().size()) {
        throw ValidationError("solve_scattering: incidence index out of range");
    }
    ScatteringSystem system(scene.wavenumber(), grid);
    return system.solve(scene.incidences()[incidence_index]);
}

std::vector<Complex> far_field(const ForwardSolution& solution, std::span<const double> angles,
                               double k) {
    std::vector<Complex> out(angles.size(), Complex{0.0, 0.0});
    for (std::size_t q = 0; q < angles.size(); ++q) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < solution.centers.size(); ++j) {
            acc += green_far_field(solution.centers[j], angles[q], k) * solution.induced_current[j];
        }
        out[q] = solution.cell_area * acc;
    }
    return out;
}

std::vector<Complex> near_field(const ForwardSolution& solution, Vec2 incidence,
                                std::span<const Vec2> points) {
    const double k = solution.wavenumber;
    std::vector<Complex> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < solution.centers.size(); ++j) {
            acc += green_2d(k, norm(points[i] - solution.centers[j])) * solution.induced_current[j];
        }
        out[i] = plane_wave(k, incidence, points[i]) + solution.cell_area * acc;
    }
    return out;
}

std::vector<Complex> born_far_field(const Scene& scene, std::size_t incidence_index,
                                    std::span<const double> angles, const ContrastGrid& grid) {
    if (incidence_index >= scene.incidences().size()) {
        throw ValidationError("born_far_field: incidence index out of range");
    }
    const double k = scene.wavenumber();
    const Vec2 d = scene.incidences()[incidence_index];
    std::vector<Complex> out(angles.size());
    for (std::size_t q = 0; q < angles.size(); ++q) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < grid.unknowns(); ++j) {
            acc += green_far_field(grid.centers[j], angles[q], k) * grid.contrast[j] *
                   plane_wave(k, d, grid.centers[j]);
        }
        out[q] = grid.cell_area * k * k * acc;
    }
    return out;
}

FarFieldData simulate_far_field(const Scene& scene, int resolution) {
    ScatteringSystem system(scene.wavenumber(), make_contrast_grid(scene, resolution));
    const auto angles = scene.aperture().receiver_angles();
    FarFieldData data;
    data.aperture = scene.aperture();
    for (const Vec2& d : scene.incidences()) {
        data.samples.push_back(far_field(system.solve(d), angles, scene.wavenumber()));
    }
    return data;
}

}  // namespace lapdsm
