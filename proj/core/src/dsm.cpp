#include "lapdsm/dsm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lapdsm/errors.hpp"
#include "lapdsm/numerics.hpp"
#include "lapdsm/parallel.hpp"

namespace lapdsm {

Complex green_far_field(Vec2 z, double angle, double k) {
    const double phase = -k * (std::cos(angle) * z.x + std::sin(angle) * z.y) + 0.25 * kPi;
    return Complex{std::cos(phase), std::sin(phase)} / std::sqrt(8.0 * k * kPi);
}

ProbingSet::ProbingSet(std::size_t points, std::size_t receivers)
    : points_(points), receivers_(receivers), values_(points * receivers, Complex{0.0, 0.0}) {}

ProbingSet classical_probing(const SamplingGrid& grid, const ApertureSet& aperture, double k) {
    const auto angles = aperture.receiver_angles();
    ProbingSet probing(grid.size(), angles.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        auto row = probing.row(i);
        for (std::size_t q = 0; q < angles.size(); ++q) {
            row[q] = green_far_field(grid.point(i), angles[q], k);
        }
    });
    return probing;
}

double IndexField::max() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

IndexField index_classical(std::span<const Complex> samples, const ProbingSet& probing,
                           const ApertureSet& aperture, const SamplingGrid& grid) {
    const auto q_total = static_cast<std::size_t>(aperture.total_receivers());
    if (samples.size() != q_total || probing.receivers() != q_total) {
        throw ValidationError("index: data, probing functions and aperture disagree on receivers");
    }
    if (probing.points() != grid.size()) {
        throw ValidationError("index: probing set does not match the sampling grid");
    }
    const auto weights = aperture.weights();
    std::vector<Complex> weighted_conj(q_total);
    for (std::size_t q = 0; q < q_total; ++q) weighted_conj[q] = weights[q] * std::conj(samples[q]);

    IndexField field{grid, std::vector<double>(grid.size(), 0.0), false};
    parallel_for(grid.size(), [&](std::size_t i) {
        const auto row = probing.row(i);
        Complex acc{0.0, 0.0};
        for (std::size_t q = 0; q < q_total; ++q) acc += row[q] * weighted_conj[q];
        field.values[i] = std::abs(acc);
    });
    return field;
}

std::vector<IndexField> index_per_incidence(const FarFieldData& data, const ProbingSet& probing,
                                            const SamplingGrid& grid) {
    std::vector<IndexField> fields;
    fields.reserve(data.samples.size());
    for (const auto& row : data.samples) {
        fields.push_back(index_classical(row, probing, data.aperture, grid));
    }
    return fields;
}

Complex kernel_gamma(Vec2 z, Vec2 y, const ApertureSet& aperture, double k,
                     int quadrature_points) {
    if (quadrature_points < 64) {
        throw ValidationError("kernel_gamma: need at least 64 quadrature points per arc");
    }
    std::vector<Arc> arcs = aperture.arcs();
    for (Arc& a : arcs) a.receivers = quadrature_points;
    const ApertureSet fine(std::move(arcs));
    const auto angles = fine.receiver_angles();
    std::vector<Complex> integrand(angles.size());
    for (std::size_t q = 0; q < angles.size(); ++q) {
        integrand[q] = green_far_field(z, angles[q], k) * std::conj(green_far_field(y, angles[q], k));
    }
    return arc_quadrature(integrand, fine);
}

IndexField relative_norm(const ProbingSet& probing, const ApertureSet& aperture, double k,
                         const SamplingGrid& grid) {
    if (probing.points() != grid.size() ||
        probing.receivers() != static_cast<std::size_t>(aperture.total_receivers())) {
        throw ValidationError("relative_norm: probing set does not match grid and aperture");
    }
    const auto angles = aperture.receiver_angles();
    IndexField field{grid, std::vector<double>(grid.size(), 0.0), false};
    parallel_for(grid.size(), [&](std::size_t i) {
        std::vector<Complex> reference(angles.size());
        for (std::size_t q = 0; q < angles.size(); ++q) {
            reference[q] = green_far_field(grid.point(i), angles[q], k);
        }
        const double denom = arc_norm(reference, aperture);
        field.values[i] = denom > 0.0 ? arc_norm(probing.row(i), aperture) / denom : 0.0;
    });
    for (double v : field.values) {
        if (!std::isfinite(v)) throw NumericalError("relative_norm: non-finite value");
    }
    return field;
}

IndexField average_and_normalize(std::span<const IndexField> fields) {
    if (fields.empty()) throw ValidationError("average_and_normalize: no fields");
    const std::size_t n = fields.front().values.size();
    for (const IndexField& f : fields) {
        if (f.values.size() != n) throw ValidationError("average_and_normalize: grid mismatch");
    }
    IndexField out{fields.front().grid, std::vector<double>(n, 0.0), true};
    for (const IndexField& f : fields) {
        for (std::size_t i = 0; i < n; ++i) out.values[i] += f.values[i];
    }
    const double count = static_cast<double>(fields.size());
    for (double& v : out.values) v /= count;
    const double peak = out.max();
    if (!(peak > 0.0) || !std::isfinite(peak)) {
        throw NumericalError("average_and_normalize: index field is identically zero");
    }
    for (double& v : out.values) v /= peak;
    return out;
}

IndexField reconstruct_classical(const FarFieldData& data, const SamplingGrid& grid, double k) {
    const ProbingSet probing = classical_probing(grid, data.aperture, k);
    const auto fields = index_per_incidence(data, probing, grid);
    return average_and_normalize(fields);
}

std::vector<Peak> local_maxima(const IndexField& field) {
    const int n = field.grid.resolution();
    const auto& v = field.values;
    std::vector<Peak> peaks;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * n + c;
            bool is_max = true;
            for (int dr = -1; dr <= 1 && is_max; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const int rr = r + dr;
                    const int cc = c + dc;
                    if (rr < 0 || rr >= n || cc < 0 || cc >= n) continue;
                    const std::size_t j = static_cast<std::size_t>(rr) * n + cc;
                    // Earlier raster neighbours win ties.
                    if (v[j] > v[i] || (v[j] == v[i] && j < i)) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) peaks.push_back({field.grid.point(i), v[i], i});
        }
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const Peak& a, const Peak& b) { return a.value > b.value; });
    return peaks;
}

std::vector<Peak> separated_maxima(const IndexField& field, double separation,
                                   double min_relative_height) {
    const auto peaks = local_maxima(field);
    const double floor = min_relative_height * field.max();
    std::vector<Peak> out;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        if (peaks[i].value < floor) break;
        bool isolated = true;
        for (std::size_t j = 0; j < i; ++j) {
            if (norm(peaks[j].location - peaks[i].location) < separation) {
                isolated = false;
                break;
            }
        }
        if (isolated) out.push_back(peaks[i]);
    }
    return out;
}

bool localizes_centers(const IndexField& field, std::span<const Vec2> centers, double separation,
                       double tolerance, double min_relative_height) {
    const auto peaks = separated_maxima(field, separation, min_relative_height);
    if (peaks.size() < centers.size()) return false;
    std::vector<std::size_t> perm(centers.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < centers.size() && ok; ++i) {
            ok = norm(peaks[i].location - centers[perm[i]]) <= tolerance;
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace lapdsm
