#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lapdsm/aperture.hpp"
#include "lapdsm/dsm.hpp"
#include "lapdsm/rng.hpp"
#include "lapdsm/scene.hpp"
#include "lapdsm/types.hpp"

namespace lapdsm::dpn {

// Fully connected network z -> (Re f_{-P..P}, Im f_{-P..P}).
// Hidden layers use the rectifier, the output layer is affine.
struct NetworkParams {
    int order = 20;
    std::vector<int> widths;  // [2, hidden..., 4P+2]
    std::vector<Eigen::MatrixXd> weights;  // weights[l] is widths[l+1] x widths[l]
    std::vector<Eigen::VectorXd> biases;
    double wavenumber = 0.0;
    Domain domain;

    static NetworkParams zeros(int order, const std::vector<int>& hidden, double wavenumber,
                               Domain domain);
    // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases, layer l
    // drawn from CounterRng(seed, l).
    static NetworkParams initialize(int order, const std::vector<int>& hidden, double wavenumber,
                                    Domain domain, std::uint64_t seed);

    int output_width() const { return 4 * order + 2; }
    std::size_t parameter_count() const;
    std::vector<double> flatten() const;
    void assign(std::span<const double> flat);

    friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

inline const std::vector<int> kDefaultHidden{200, 200, 200, 200};

// Coefficients f_{-P..P}(z) for one point.
std::vector<Complex> network_forward(const NetworkParams& params, Vec2 z);

// Coefficients for many points at once, one row per point.
Eigen::MatrixXcd network_coefficients(const NetworkParams& params, std::span<const Vec2> points);

// sum_n f_n(z) e^{i n t} + exp(-i k x.z)
Complex probing_eval(const NetworkParams& params, Vec2 z, double angle, double k);

struct TrainConfig {
    int test_functions = 400;  // M
    int sources = 3;           // N
    int points = 400;          // L
    int iterations = 5000;
    double max_noise = 0.05;   // lambda
    double learning_rate = 0.005;
    double decay_factor = 0.9;
    int decay_every = 100;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int order = 20;
    std::vector<int> hidden = kDefaultHidden;
    std::uint64_t seed = 0;
    int checkpoint_every = 500;

    // Throws ValidationError for non-positive sizes or lambda outside [0, 1).
    void validate() const;
    double learning_rate_at(int iteration) const;
};

struct TrainingBatch {
    std::vector<Vec2> sources;        // y_{nm}, index m * N + n
    std::vector<Complex> amplitudes;  // c_{nm}, same indexing
    std::vector<Vec2> points;         // z_l
    double noise_level = 0.0;
    Eigen::MatrixXcd clean;           // v_m(x_q), Q x M
    Eigen::MatrixXcd polluted;        // v_m^delta(x_q), Q x M

    int test_functions() const { return static_cast<int>(clean.cols()); }
    int sources_per_function() const;
};

// Draw order: for each m, for each n: y.x, y.y, Re c, Im c; then delta;
// then per m, per receiver: eta_r, eta_i; then z_l.x, z_l.y for each l.
// Sources come from source_domain, points from point_domain.
TrainingBatch sample_batch(const TrainConfig& config, const Domain& source_domain,
                           const Domain& point_domain, const ApertureSet& aperture, double k,
                           CounterRng& rng);

// Target 2 pi sum_n conj(c_nm) J_0(k |z_l - y_nm|), L x M.
Eigen::MatrixXcd batch_target(const TrainingBatch& batch, double k);

struct LossResult {
    double loss = 0.0;
    Eigen::MatrixXcd residual;  // L x M
};

// (1/ML) sum_m sum_l | sum_q w_q G(z_l, x_q) conj(v_m^delta(x_q)) - target_lm |^2
LossResult loss(const NetworkParams& params, const TrainingBatch& batch,
                const ApertureSet& aperture, double k);

struct Gradient {
    double loss = 0.0;
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    std::vector<double> flatten() const;
};

// Reverse-mode gradient of loss() with respect to every weight and bias.
Gradient loss_gradient(const NetworkParams& params, const TrainingBatch& batch,
                       const ApertureSet& aperture, double k);

struct TrainResult {
    NetworkParams params;
    std::vector<double> loss_trace;
};

using CheckpointHook = std::function<void(int iteration, const NetworkParams&,
                                          const std::vector<double>& trace)>;

// Adaptive-moment training on fresh batches. Aborts with NumericalError if
// the loss exceeds 1e3 times its first value.
TrainResult train(const TrainConfig& config, const ApertureSet& aperture,
                  const Domain& source_domain, const Domain& point_domain, double k,
                  const CheckpointHook& hook = {});

inline TrainResult train(const TrainConfig& config, const ApertureSet& aperture,
                         const Domain& domain, double k) {
    return train(config, aperture, domain, domain, k);
}

// K independent networks, each owning one subdomain.
struct PartitionedNetwork {
    std::vector<Domain> subdomains;
    std::vector<NetworkParams> networks;

    // Lowest-index subdomain containing z; ValidationError if none does.
    std::size_t dispatch(Vec2 z) const;
    Eigen::MatrixXcd coefficients(std::span<const Vec2> points) const;
    int order() const { return networks.front().order; }
    double wavenumber() const { return networks.front().wavenumber; }
};

// per_side x per_side equal rectangles tiling the domain; index r * per_side + c
// with row r counted from ymin and column c from xmin.
std::vector<Domain> partition_domain(const Domain& domain, int per_side);

// Network i trains with seed config.seed + i, points drawn from subdomain i
// and sources from the whole domain.
PartitionedNetwork train_partitioned(const TrainConfig& config, const ApertureSet& aperture,
                                     const Domain& domain, const std::vector<Domain>& subdomains,
                                     double k);

// Serves wavenumber k_new on {z : (k_new / k_old) z in domain}:
// G(z, x) = sum_n f_n((k_new/k_old) z) e^{i n t} + exp(-i k_new x.z).
class RescaledProbe {
public:
    RescaledProbe(PartitionedNetwork network, double k_old, double k_new);

    double wavenumber() const { return k_new_; }
    double ratio() const { return ratio_; }
    int order() const { return network_.order(); }
    // Throws ValidationError when a scaled point leaves the trained domain.
    Eigen::MatrixXcd coefficients(std::span<const Vec2> points) const;
    Complex eval(Vec2 z, double angle) const;

private:
    PartitionedNetwork network_;
    double k_new_;
    double ratio_;
};

RescaledProbe rescale_for_wavenumber(const NetworkParams& params, double k_old, double k_new);

// Coefficient provider used by the residual and probing-set helpers: rows
// are points, columns f_{-P..P}.
using CoefficientFn = std::function<Eigen::MatrixXcd(std::span<const Vec2>)>;

// Mean squared bracketed residual over fresh unpolluted test functions.
double validation_residual(const CoefficientFn& coefficients, int order,
                           const ApertureSet& aperture, const Domain& source_domain,
                           const Domain& point_domain, double k, std::uint64_t seed,
                           int test_functions = 100, int points = 100, int sources = 3);

// Probing set on a grid: sum_n f_n(z) e^{i n t_q} + exp(-i k x_q.z).
ProbingSet network_probing(const CoefficientFn& coefficients, int order, const SamplingGrid& grid,
                           const ApertureSet& aperture, double k);

// Checkpoint text format, see README.md.
void write_checkpoint(std::ostream& out, const NetworkParams& params);
void save_checkpoint(const std::string& path, const PartitionedNetwork& network);
// Reads every network block in the file.
PartitionedNetwork load_checkpoint(const std::string& path);
PartitionedNetwork read_checkpoint(std::istream& in);

}  // namespace lapdsm::dpn
