#pragma once

#include <vector>

namespace lapdsm {

// One measurement arc: directions with angle in (beta - alpha, beta + alpha).
struct Arc {
    double alpha = 0.0;
    double beta = 0.0;
    int receivers = 0;

    friend bool operator==(const Arc&, const Arc&) = default;
};

// Union of disjoint arcs on the unit circle, each with receivers placed at
// the midpoints of Q equal sub-intervals.
class ApertureSet {
public:
    ApertureSet() = default;
    // Throws ValidationError if an arc is out of range or two arcs overlap.
    explicit ApertureSet(std::vector<Arc> arcs);

    static ApertureSet full_circle(int receivers);
    // Single arc of half-width 2*pi/5 about beta = 0.
    static ApertureSet config_one(int receivers = 100);
    // Three arcs of half-width pi/8 at beta = 0, 2*pi/3, -2*pi/3.
    static ApertureSet config_two(int receivers_per_arc = 30);

    const std::vector<Arc>& arcs() const { return arcs_; }
    int total_receivers() const;
    // |Gamma| = sum of 2*alpha.
    double measure() const;
    bool is_full_circle() const;

    // Concatenated per-arc angles, increasing within each arc.
    std::vector<double> receiver_angles() const;
    // Riemann weight |Gamma_l| / Q_l for every receiver, same order as the angles.
    std::vector<double> weights() const;

    friend bool operator==(const ApertureSet&, const ApertureSet&) = default;

private:
    std::vector<Arc> arcs_;
};

}  // namespace lapdsm
