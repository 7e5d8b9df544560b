#pragma once

#include <memory>
#include <span>
#include <vector>

#include "lapdsm/scene.hpp"
#include "lapdsm/types.hpp"

namespace lapdsm {

// Piecewise-constant contrast q = n - 1 sampled at cell centers of a
// resolution x resolution lattice over the scene domain. Only cells with
// q != 0 are kept; the rest carry no induced current.
struct ContrastGrid {
    Domain domain;
    int resolution = 0;
    double cell_area = 0.0;
    std::vector<Vec2> centers;
    std::vector<double> contrast;

    std::size_t unknowns() const { return centers.size(); }
};

// Throws ValidationError when the lattice has fewer than ten cells per
// wavelength.
ContrastGrid make_contrast_grid(const Scene& scene, int resolution);

struct ForwardSolution {
    double wavenumber = 0.0;
    double cell_area = 0.0;
    std::vector<Vec2> centers;
    std::vector<Complex> total_field;
    // I = (n - 1) k^2 u on each cell.
    std::vector<Complex> induced_current;
};

// (i/4) H0(k r)
Complex green_2d(double k, double r);

// Integral of the 2-D Green's function over a disk of radius a centered on
// the singularity: (i / (2 k^2)) (pi k a H1(ka) + 2i).
Complex green_disk_integral(double k, double radius);

// Dense collocation system for the Lippmann-Schwinger equation
//   u_j - k^2 sum_m S_jm q_m u_m = u_inc(y_j)
// with S_jm = G(y_j, y_m) h^2 off the diagonal and the equivalent-disk
// integral on it. Assembled and LU-factored once; each incidence is one
// back-substitution.
class ScatteringSystem {
public:
    ScatteringSystem(double wavenumber, ContrastGrid grid);
    ~ScatteringSystem();
    ScatteringSystem(ScatteringSystem&&) noexcept;
    ScatteringSystem& operator=(ScatteringSystem&&) noexcept;

    const ContrastGrid& grid() const { return grid_; }
    // Reciprocal condition estimate of the factored matrix (1 if empty).
    double rcond() const { return rcond_; }

    ForwardSolution solve(Vec2 incidence) const;

private:
    struct Factorization;
    double k_;
    ContrastGrid grid_;
    double rcond_ = 1.0;
    std::unique_ptr<Factorization> lu_;
};

ForwardSolution solve_scattering(const Scene& scene, std::size_t incidence_index,
                                 const ContrastGrid& grid);

// u_inf(x) = sum_j h^2 G_inf(y_j, x) I(y_j)
std::vector<Complex> far_field(const ForwardSolution& solution, std::span<const double> angles,
                               double k);

// u = u_inc + sum_j h^2 G(y_j, x) I(y_j), valid away from the cells.
std::vector<Complex> near_field(const ForwardSolution& solution, Vec2 incidence,
                                std::span<const Vec2> points);

// Born approximation: replaces u by u_inc inside the induced current.
std::vector<Complex> born_far_field(const Scene& scene, std::size_t incidence_index,
                                    std::span<const double> angles, const ContrastGrid& grid);

// Synthesizes noiseless far-field data for every incidence of the scene at
// the scene aperture's receivers.
FarFieldData simulate_far_field(const Scene& scene, int resolution);

}  // namespace lapdsm
