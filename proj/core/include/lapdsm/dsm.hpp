#pragma once

#include <span>
#include <vector>

#include "lapdsm/aperture.hpp"
#include "lapdsm/scene.hpp"
#include "lapdsm/types.hpp"

namespace lapdsm {

// G_inf(z, x) = exp(i pi/4) / sqrt(8 k pi) * exp(-i k x.z), x = (cos t, sin t).
Complex green_far_field(Vec2 z, double angle, double k);

// Probing-function samples G(z, x_q): one row per sampling point, one column
// per receiver, row-major.
class ProbingSet {
public:
    ProbingSet(std::size_t points, std::size_t receivers);

    std::size_t points() const { return points_; }
    std::size_t receivers() const { return receivers_; }
    std::span<Complex> row(std::size_t i) { return {values_.data() + i * receivers_, receivers_}; }
    std::span<const Complex> row(std::size_t i) const {
        return {values_.data() + i * receivers_, receivers_};
    }
    std::vector<Complex>& values() { return values_; }
    const std::vector<Complex>& values() const { return values_; }

private:
    std::size_t points_;
    std::size_t receivers_;
    std::vector<Complex> values_;
};

// G_inf restricted to the aperture's receivers, for every grid point.
ProbingSet classical_probing(const SamplingGrid& grid, const ApertureSet& aperture, double k);

struct IndexField {
    SamplingGrid grid;
    std::vector<double> values;
    bool normalized = false;

    double max() const;
};

// I(z) = | sum_q w_q G(z, x_q) conj(u(x_q)) | for one incidence.
IndexField index_classical(std::span<const Complex> samples, const ProbingSet& probing,
                           const ApertureSet& aperture, const SamplingGrid& grid);

// One field per incidence of the data set.
std::vector<IndexField> index_per_incidence(const FarFieldData& data, const ProbingSet& probing,
                                            const SamplingGrid& grid);

// K_Gamma(z, y) = <G_inf(z, .), G_inf(y, .)>_Gamma with quadrature_points
// midpoint nodes per arc (at least 64).
Complex kernel_gamma(Vec2 z, Vec2 y, const ApertureSet& aperture, double k,
                     int quadrature_points);

// RN(z) = ||G(z, .)||_{L2(Gamma)} / ||G_inf(z, .)||_{L2(Gamma)}.
IndexField relative_norm(const ProbingSet& probing, const ApertureSet& aperture, double k,
                         const SamplingGrid& grid);

// Pointwise mean, then division by the global maximum. Throws
// NumericalError when the mean is identically zero.
IndexField average_and_normalize(std::span<const IndexField> fields);

// Full classical pipeline: G_inf probing on the data aperture, per-incidence
// indices, mean, normalization.
IndexField reconstruct_classical(const FarFieldData& data, const SamplingGrid& grid, double k);

struct Peak {
    Vec2 location;
    double value = 0.0;
    std::size_t index = 0;
};

// Grid points not exceeded by any of their eight neighbours (plateaus are
// resolved toward the first point in raster order). Sorted by value, highest
// first.
std::vector<Peak> local_maxima(const IndexField& field);

// Local maxima of height >= min_relative_height * max with no higher local
// maximum within `separation`. Sorted highest first.
std::vector<Peak> separated_maxima(const IndexField& field, double separation,
                                   double min_relative_height);

// True when the `centers.size()` highest separated maxima can be matched
// one-to-one to the centers, each within `tolerance`.
bool localizes_centers(const IndexField& field, std::span<const Vec2> centers, double separation,
                       double tolerance, double min_relative_height);

}  // namespace lapdsm
