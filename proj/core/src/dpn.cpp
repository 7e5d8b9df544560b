#include "lapdsm/dpn.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "lapdsm/errors.hpp"
#include "lapdsm/numerics.hpp"

namespace lapdsm::dpn {

namespace {

constexpr double kDivergenceFactor = 1e3;
constexpr std::uint64_t kBatchStreamBase = 1ULL << 32;
constexpr std::uint64_t kValidationStream = 0x5eed5eedULL;
constexpr std::size_t kProbingBlock = 2048;

using RowMatrixXcd = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<int> layer_widths(int order, const std::vector<int>& hidden) {
    if (order < 1) throw ValidationError("network: order must be >= 1");
    if (hidden.empty()) throw ValidationError("network: need at least one hidden layer");
    std::vector<int> widths{2};
    for (int h : hidden) {
        if (h < 1) throw ValidationError("network: hidden widths must be positive");
        widths.push_back(h);
    }
    widths.push_back(4 * order + 2);
    return widths;
}

Eigen::MatrixXd point_matrix(std::span<const Vec2> points) {
    Eigen::MatrixXd x(2, static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        x(0, static_cast<Eigen::Index>(i)) = points[i].x;
        x(1, static_cast<Eigen::Index>(i)) = points[i].y;
    }
    return x;
}

// Activations of every layer; activations[0] is the input.
std::vector<Eigen::MatrixXd> forward_pass(const NetworkParams& p, std::span<const Vec2> points) {
    std::vector<Eigen::MatrixXd> act;
    act.reserve(p.weights.size() + 1);
    act.push_back(point_matrix(points));
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        Eigen::MatrixXd z = p.weights[l] * act.back();
        z.colwise() += p.biases[l];
        if (l + 1 < p.weights.size()) z = z.cwiseMax(0.0);
        act.push_back(std::move(z));
    }
    return act;
}

// Output columns -> complex coefficient rows.
Eigen::MatrixXcd pair_outputs(const Eigen::MatrixXd& out, int order) {
    const int dim = 2 * order + 1;
    Eigen::MatrixXcd c(out.cols(), dim);
    c.real() = out.topRows(dim).transpose();
    c.imag() = out.bottomRows(dim).transpose();
    return c;
}

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Q x (2P+1) matrix of e^{i n t_q}.
Eigen::MatrixXcd fourier_basis(const std::vector<double>& angles, int order) {
    Eigen::MatrixXcd phi(static_cast<Eigen::Index>(angles.size()), 2 * order + 1);
    for (std::size_t q = 0; q < angles.size(); ++q) {
        for (int n = -order; n <= order; ++n) {
            phi(static_cast<Eigen::Index>(q), n + order) = unit_phase(n * angles[q]);
        }
    }
    return phi;
}

// points x Q matrix of exp(-i k x_q . z).
Eigen::MatrixXcd plane_waves(std::span<const Vec2> points, const std::vector<double>& angles, double k) {
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(angles.size()));
    for (std::size_t q = 0; q < angles.size(); ++q) {
        const Vec2 d = direction(angles[q]);
        for (std::size_t l = 0; l < points.size(); ++l) {
            e(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(q)) = unit_phase(-k * dot(d, points[l]));
        }
    }
    return e;
}

struct ResidualParts {
    Eigen::MatrixXcd residual;  // L x M
    Eigen::MatrixXcd psi;       // (2P+1) x M, sum_q w_q e^{i n t_q} conj(v_m^delta)
};

ResidualParts residual_parts(const Eigen::MatrixXcd& coeffs, int order, const Eigen::MatrixXcd& samples,
                             const TrainingBatch& batch, const ApertureSet& aperture, double k) {
    const auto angles = aperture.receiver_angles();
    const auto weights = aperture.weights();
    if (static_cast<std::size_t>(samples.rows()) != angles.size()) {
        throw ValidationError("loss: batch samples do not match the aperture receivers");
    }
    Eigen::MatrixXcd weighted = samples.conjugate();
    for (std::size_t q = 0; q < weights.size(); ++q) weighted.row(static_cast<Eigen::Index>(q)) *= weights[q];
    ResidualParts parts;
    parts.psi = fourier_basis(angles, order).transpose() * weighted;
    parts.residual = coeffs * parts.psi + plane_waves(batch.points, angles, k) * weighted;
    parts.residual -= batch_target(batch, k);
    return parts;
}

Eigen::VectorXcd source_samples(std::span<const Vec2> sources, std::span<const Complex> amplitudes,
                                const std::vector<double>& angles, double k) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(angles.size()));
    for (std::size_t q = 0; q < angles.size(); ++q) {
        const Vec2 d = direction(angles[q]);
        Complex acc{0.0, 0.0};
        for (std::size_t n = 0; n < sources.size(); ++n) acc += amplitudes[n] * unit_phase(-k * dot(d, sources[n]));
        v(static_cast<Eigen::Index>(q)) = acc;
    }
    return v;
}

std::string join_widths(const std::vector<int>& widths) {
    std::string s;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(widths[i]);
    }
    return s;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

NetworkParams NetworkParams::zeros(int order, const std::vector<int>& hidden, double wavenumber,
                                   Domain domain) {
    NetworkParams p;
    p.order = order;
    p.widths = layer_widths(order, hidden);
    p.wavenumber = wavenumber;
    p.domain = domain;
    for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
        p.weights.push_back(Eigen::MatrixXd::Zero(p.widths[l + 1], p.widths[l]));
        p.biases.push_back(Eigen::VectorXd::Zero(p.widths[l + 1]));
    }
    return p;
}

NetworkParams NetworkParams::initialize(int order, const std::vector<int>& hidden, double wavenumber,
                                        Domain domain, std::uint64_t seed) {
    NetworkParams p = zeros(order, hidden, wavenumber, domain);
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        CounterRng rng(seed, l);
        const double bound = 1.0 / std::sqrt(static_cast<double>(p.widths[l]));
        // Row-major draw order.
        for (Eigen::Index r = 0; r < p.weights[l].rows(); ++r) {
            for (Eigen::Index c = 0; c < p.weights[l].cols(); ++c) p.weights[l](r, c) = rng.uniform(-bound, bound);
        }
        for (Eigen::Index r = 0; r < p.biases[l].size(); ++r) p.biases[l](r) = rng.uniform(-bound, bound);
    }
    return p;
}

std::size_t NetworkParams::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

std::vector<double> NetworkParams::flatten() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
            for (Eigen::Index c = 0; c < weights[l].cols(); ++c) flat.push_back(weights[l](r, c));
        }
        for (Eigen::Index r = 0; r < biases[l].size(); ++r) flat.push_back(biases[l](r));
    }
    return flat;
}

void NetworkParams::assign(std::span<const double> flat) {
    if (flat.size() != parameter_count()) throw ValidationError("network: parameter vector has wrong length");
    std::size_t i = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
            for (Eigen::Index c = 0; c < weights[l].cols(); ++c) weights[l](r, c) = flat[i++];
        }
        for (Eigen::Index r = 0; r < biases[l].size(); ++r) biases[l](r) = flat[i++];
    }
}

std::vector<double> Gradient::flatten() const {
    std::vector<double> flat;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
            for (Eigen::Index c = 0; c < weights[l].cols(); ++c) flat.push_back(weights[l](r, c));
        }
        for (Eigen::Index r = 0; r < biases[l].size(); ++r) flat.push_back(biases[l](r));
    }
    return flat;
}

Eigen::MatrixXcd network_coefficients(const NetworkParams& params, std::span<const Vec2> points) {
    return pair_outputs(forward_pass(params, points).back(), params.order);
}

std::vector<Complex> network_forward(const NetworkParams& params, Vec2 z) {
    const Eigen::MatrixXcd c = network_coefficients(params, std::span<const Vec2>(&z, 1));
    return {c.data(), c.data() + c.size()};
}

Complex probing_eval(const NetworkParams& params, Vec2 z, double angle, double k) {
    const auto f = network_forward(params, z);
    Complex acc{0.0, 0.0};
    for (int n = -params.order; n <= params.order; ++n) acc += f[n + params.order] * unit_phase(n * angle);
    return acc + unit_phase(-k * dot(direction(angle), z));
}

void TrainConfig::validate() const {
    if (test_functions < 1 || sources < 1 || points < 1) {
        throw ValidationError("train config: M, N and L must be positive");
    }
    if (iterations < 0) throw ValidationError("train config: iterations must be >= 0");
    if (!(max_noise >= 0.0 && max_noise < 1.0)) throw ValidationError("train config: lambda must lie in [0, 1)");
    if (!(learning_rate > 0.0) || !(decay_factor > 0.0 && decay_factor <= 1.0) || decay_every < 1) {
        throw ValidationError("train config: invalid learning-rate schedule");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0)) {
        throw ValidationError("train config: invalid optimizer constants");
    }
    if (checkpoint_every < 1) throw ValidationError("train config: checkpoint interval must be positive");
    layer_widths(order, hidden);
}

double TrainConfig::learning_rate_at(int iteration) const {
    return learning_rate * std::pow(decay_factor, iteration / decay_every);
}

int TrainingBatch::sources_per_function() const {
    const int m = test_functions();
    return m > 0 ? static_cast<int>(sources.size()) / m : 0;
}

TrainingBatch sample_batch(const TrainConfig& config, const Domain& source_domain,
                           const Domain& point_domain, const ApertureSet& aperture, double k,
                           CounterRng& rng) {
    const int m_total = config.test_functions;
    const int n_total = config.sources;
    const auto angles = aperture.receiver_angles();
    const double root_measure = std::sqrt(aperture.measure());

    TrainingBatch b;
    b.sources.resize(static_cast<std::size_t>(m_total) * n_total);
    b.amplitudes.resize(b.sources.size());
    for (std::size_t i = 0; i < b.sources.size(); ++i) {
        b.sources[i].x = rng.uniform(source_domain.xmin, source_domain.xmax);
        b.sources[i].y = rng.uniform(source_domain.ymin, source_domain.ymax);
        const double re = rng.normal();
        const double im = rng.normal();
        b.amplitudes[i] = {re, im};
    }
    b.noise_level = config.max_noise > 0.0 ? rng.uniform(0.0, config.max_noise) : 0.0;

    b.clean.resize(static_cast<Eigen::Index>(angles.size()), m_total);
    for (int m = 0; m < m_total; ++m) {
        const std::size_t off = static_cast<std::size_t>(m) * n_total;
        b.clean.col(m) = source_samples(std::span<const Vec2>(b.sources).subspan(off, n_total),
                                        std::span<const Complex>(b.amplitudes).subspan(off, n_total), angles, k);
    }
    b.polluted = b.clean;
    if (b.noise_level > 0.0) {
        for (int m = 0; m < m_total; ++m) {
            const Eigen::VectorXcd col = b.clean.col(m);
            const double scale = b.noise_level * arc_norm({col.data(), static_cast<std::size_t>(col.size())}, aperture) /
                                 root_measure;
            for (Eigen::Index q = 0; q < col.size(); ++q) {
                const double er = rng.normal();
                const double ei = rng.normal();
                b.polluted(q, m) += scale * Complex{er, ei};
            }
        }
    }
    b.points.resize(static_cast<std::size_t>(config.points));
    for (Vec2& z : b.points) {
        z.x = rng.uniform(point_domain.xmin, point_domain.xmax);
        z.y = rng.uniform(point_domain.ymin, point_domain.ymax);
    }
    return b;
}

Eigen::MatrixXcd batch_target(const TrainingBatch& batch, double k) {
    const int m_total = batch.test_functions();
    const int n_total = batch.sources_per_function();
    const auto l_total = static_cast<Eigen::Index>(batch.points.size());
    Eigen::MatrixXcd t(l_total, m_total);
    for (int m = 0; m < m_total; ++m) {
        for (Eigen::Index l = 0; l < l_total; ++l) {
            Complex acc{0.0, 0.0};
            for (int n = 0; n < n_total; ++n) {
                const std::size_t i = static_cast<std::size_t>(m) * n_total + n;
                acc += std::conj(batch.amplitudes[i]) *
                       bessel_j(0, k * norm(batch.points[static_cast<std::size_t>(l)] - batch.sources[i]));
            }
            t(l, m) = 2.0 * kPi * acc;
        }
    }
    return t;
}

LossResult loss(const NetworkParams& params, const TrainingBatch& batch, const ApertureSet& aperture,
                double k) {
    const Eigen::MatrixXcd coeffs = network_coefficients(params, batch.points);
    ResidualParts parts = residual_parts(coeffs, params.order, batch.polluted, batch, aperture, k);
    const double count = static_cast<double>(parts.residual.size());
    return {parts.residual.squaredNorm() / count, std::move(parts.residual)};
}

Gradient loss_gradient(const NetworkParams& params, const TrainingBatch& batch, const ApertureSet& aperture,
                       double k) {
    const auto act = forward_pass(params, batch.points);
    const Eigen::MatrixXcd coeffs = pair_outputs(act.back(), params.order);
    const ResidualParts parts = residual_parts(coeffs, params.order, batch.polluted, batch, aperture, k);
    const double count = static_cast<double>(parts.residual.size());

    Gradient g;
    g.loss = parts.residual.squaredNorm() / count;

    // dLoss/dRe f = (2/ML) Re(conj(R) Psi^T), dLoss/dIm f = -(2/ML) Im(...).
    const Eigen::MatrixXcd h = parts.residual.conjugate() * parts.psi.transpose();
    const int dim = 2 * params.order + 1;
    Eigen::MatrixXd delta(params.output_width(), static_cast<Eigen::Index>(batch.points.size()));
    delta.topRows(dim) = (2.0 / count) * h.real().transpose();
    delta.bottomRows(dim) = (-2.0 / count) * h.imag().transpose();

    const std::size_t layers = params.weights.size();
    g.weights.resize(layers);
    g.biases.resize(layers);
    for (std::size_t l = layers; l-- > 0;) {
        g.weights[l] = delta * act[l].transpose();
        g.biases[l] = delta.rowwise().sum();
        if (l > 0) {
            Eigen::MatrixXd back = params.weights[l].transpose() * delta;
            delta = back.cwiseProduct((act[l].array() > 0.0).cast<double>().matrix());
        }
    }
    return g;
}

TrainResult train(const TrainConfig& config, const ApertureSet& aperture, const Domain& source_domain,
                  const Domain& point_domain, double k, const CheckpointHook& hook) {
    config.validate();
    if (!(k > 0.0)) throw ValidationError("train: wavenumber must be positive");

    TrainResult result{NetworkParams::initialize(config.order, config.hidden, k, point_domain, config.seed), {}};
    NetworkParams& p = result.params;
    const std::size_t layers = p.weights.size();
    std::vector<Eigen::MatrixXd> mw(layers), vw(layers);
    std::vector<Eigen::VectorXd> mb(layers), vb(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        mw[l] = vw[l] = Eigen::MatrixXd::Zero(p.weights[l].rows(), p.weights[l].cols());
        mb[l] = vb[l] = Eigen::VectorXd::Zero(p.biases[l].size());
    }
    result.loss_trace.reserve(static_cast<std::size_t>(config.iterations));

    double beta1_power = 1.0;
    double beta2_power = 1.0;
    for (int it = 0; it < config.iterations; ++it) {
        CounterRng rng(config.seed, kBatchStreamBase + static_cast<std::uint64_t>(it));
        const TrainingBatch batch = sample_batch(config, source_domain, point_domain, aperture, k, rng);
        const Gradient g = loss_gradient(p, batch, aperture, k);
        if (!std::isfinite(g.loss)) throw NumericalError("train: non-finite loss at iteration " + std::to_string(it));
        if (!result.loss_trace.empty() && g.loss > kDivergenceFactor * result.loss_trace.front()) {
            throw NumericalError("train: loss " + std::to_string(g.loss) + " at iteration " + std::to_string(it) +
                                 " exceeds 1e3 times the initial loss " + std::to_string(result.loss_trace.front()));
        }
        result.loss_trace.push_back(g.loss);

        beta1_power *= config.beta1;
        beta2_power *= config.beta2;
        const double step = config.learning_rate_at(it);
        const double c1 = 1.0 / (1.0 - beta1_power);
        const double c2 = 1.0 / (1.0 - beta2_power);
        const auto update = [&](auto& param, auto& m, auto& v, const auto& grad) {
            m = config.beta1 * m + (1.0 - config.beta1) * grad;
            v = config.beta2 * v + (1.0 - config.beta2) * grad.cwiseAbs2();
            param.array() -= step * (c1 * m.array()) / ((c2 * v.array()).sqrt() + config.epsilon);
        };
        for (std::size_t l = 0; l < layers; ++l) {
            update(p.weights[l], mw[l], vw[l], g.weights[l]);
            update(p.biases[l], mb[l], vb[l], g.biases[l]);
        }
        if (hook && ((it + 1) % config.checkpoint_every == 0 || it + 1 == config.iterations)) {
            hook(it + 1, p, result.loss_trace);
        }
    }
    return result;
}

std::size_t PartitionedNetwork::dispatch(Vec2 z) const {
    for (std::size_t i = 0; i < subdomains.size(); ++i) {
        if (subdomains[i].contains(z)) return i;
    }
    throw ValidationError("partitioned network: point (" + std::to_string(z.x) + ", " + std::to_string(z.y) +
                          ") lies outside every subdomain");
}

Eigen::MatrixXcd PartitionedNetwork::coefficients(std::span<const Vec2> points) const {
    if (networks.empty() || networks.size() != subdomains.size()) {
        throw ValidationError("partitioned network: one network per subdomain required");
    }
    std::vector<std::vector<std::size_t>> owned(networks.size());
    for (std::size_t i = 0; i < points.size(); ++i) owned[dispatch(points[i])].push_back(i);
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(points.size()), 2 * order() + 1);
    for (std::size_t n = 0; n < networks.size(); ++n) {
        if (owned[n].empty()) continue;
        std::vector<Vec2> local;
        local.reserve(owned[n].size());
        for (std::size_t i : owned[n]) local.push_back(points[i]);
        const Eigen::MatrixXcd c = network_coefficients(networks[n], local);
        for (std::size_t j = 0; j < owned[n].size(); ++j) {
            out.row(static_cast<Eigen::Index>(owned[n][j])) = c.row(static_cast<Eigen::Index>(j));
        }
    }
    return out;
}

std::vector<Domain> partition_domain(const Domain& domain, int per_side) {
    if (per_side < 1) throw ValidationError("partition: need at least one subdomain per side");
    std::vector<Domain> parts;
    const double w = domain.width() / per_side;
    const double h = domain.height() / per_side;
    for (int r = 0; r < per_side; ++r) {
        for (int c = 0; c < per_side; ++c) {
            Domain d;
            d.xmin = domain.xmin + c * w;
            d.xmax = c + 1 == per_side ? domain.xmax : domain.xmin + (c + 1) * w;
            d.ymin = domain.ymin + r * h;
            d.ymax = r + 1 == per_side ? domain.ymax : domain.ymin + (r + 1) * h;
            parts.push_back(d);
        }
    }
    return parts;
}

PartitionedNetwork train_partitioned(const TrainConfig& config, const ApertureSet& aperture,
                                     const Domain& domain, const std::vector<Domain>& subdomains, double k) {
    if (subdomains.empty()) throw ValidationError("train_partitioned: no subdomains");
    PartitionedNetwork out;
    out.subdomains = subdomains;
    for (std::size_t i = 0; i < subdomains.size(); ++i) {
        TrainConfig local = config;
        local.seed = config.seed + i;
        out.networks.push_back(train(local, aperture, domain, subdomains[i], k).params);
    }
    return out;
}

RescaledProbe::RescaledProbe(PartitionedNetwork network, double k_old, double k_new)
    : network_(std::move(network)), k_new_(k_new), ratio_(k_new / k_old) {
    if (!(k_old > 0.0) || !(k_new > 0.0)) throw ValidationError("rescale: wavenumbers must be positive");
    if (network_.networks.empty()) throw ValidationError("rescale: empty network");
}

Eigen::MatrixXcd RescaledProbe::coefficients(std::span<const Vec2> points) const {
    std::vector<Vec2> scaled(points.begin(), points.end());
    for (Vec2& z : scaled) z = ratio_ * z;
    return network_.coefficients(scaled);
}

Complex RescaledProbe::eval(Vec2 z, double angle) const {
    const Eigen::MatrixXcd f = coefficients(std::span<const Vec2>(&z, 1));
    const int order = network_.order();
    Complex acc{0.0, 0.0};
    for (int n = -order; n <= order; ++n) acc += f(0, n + order) * unit_phase(n * angle);
    return acc + unit_phase(-k_new_ * dot(direction(angle), z));
}

RescaledProbe rescale_for_wavenumber(const NetworkParams& params, double k_old, double k_new) {
    return RescaledProbe(PartitionedNetwork{{params.domain}, {params}}, k_old, k_new);
}

double validation_residual(const CoefficientFn& coefficients, int order, const ApertureSet& aperture,
                           const Domain& source_domain, const Domain& point_domain, double k,
                           std::uint64_t seed, int test_functions, int points, int sources) {
    TrainConfig config;
    config.test_functions = test_functions;
    config.points = points;
    config.sources = sources;
    config.max_noise = 0.0;
    CounterRng rng(seed, kValidationStream);
    const TrainingBatch batch = sample_batch(config, source_domain, point_domain, aperture, k, rng);
    const Eigen::MatrixXcd coeffs = coefficients(batch.points);
    if (coeffs.rows() != points || coeffs.cols() != 2 * order + 1) {
        throw ValidationError("validation_residual: coefficient provider returned the wrong shape");
    }
    const ResidualParts parts = residual_parts(coeffs, order, batch.clean, batch, aperture, k);
    return parts.residual.squaredNorm() / static_cast<double>(parts.residual.size());
}

ProbingSet network_probing(const CoefficientFn& coefficients, int order, const SamplingGrid& grid,
                           const ApertureSet& aperture, double k) {
    const auto angles = aperture.receiver_angles();
    const Eigen::MatrixXcd basis_t = fourier_basis(angles, order).transpose();
    ProbingSet probing(grid.size(), angles.size());
    const auto& pts = grid.points();
    for (std::size_t begin = 0; begin < pts.size(); begin += kProbingBlock) {
        const std::size_t count = std::min(kProbingBlock, pts.size() - begin);
        const std::span<const Vec2> block(pts.data() + begin, count);
        Eigen::Map<RowMatrixXcd> out(probing.values().data() + begin * angles.size(),
                                     static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(angles.size()));
        out = coefficients(block) * basis_t + plane_waves(block, angles, k);
    }
    return probing;
}

void write_checkpoint(std::ostream& out, const NetworkParams& p) {
    out << "DPN v1 P=" << p.order << " layers=" << join_widths(p.widths) << " k=" << format_double(p.wavenumber)
        << '\n';
    out << "domain=" << format_double(p.domain.xmin) << ',' << format_double(p.domain.xmax) << ','
        << format_double(p.domain.ymin) << ',' << format_double(p.domain.ymax) << '\n';
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        out << "weight " << l << ' ' << p.weights[l].rows() << ' ' << p.weights[l].cols() << '\n';
        for (Eigen::Index r = 0; r < p.weights[l].rows(); ++r) {
            for (Eigen::Index c = 0; c < p.weights[l].cols(); ++c) {
                out << (c ? " " : "") << format_double(p.weights[l](r, c));
            }
            out << '\n';
        }
        out << "bias " << l << ' ' << p.biases[l].size() << '\n';
        for (Eigen::Index r = 0; r < p.biases[l].size(); ++r) out << (r ? " " : "") << format_double(p.biases[l](r));
        out << '\n';
    }
    out << "end\n";
}

void save_checkpoint(const std::string& path, const PartitionedNetwork& network) {
    std::ofstream out(path);
    if (!out) throw ValidationError("checkpoint: cannot open " + path + " for writing");
    for (const NetworkParams& p : network.networks) write_checkpoint(out, p);
    if (!out) throw NumericalError("checkpoint: write to " + path + " failed");
}

namespace {

[[noreturn]] void bad_checkpoint(const std::string& what) {
    throw ValidationError("checkpoint: " + what);
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

NetworkParams read_block(std::istream& in, const std::string& header) {
    std::istringstream hs(header);
    std::string magic, version, order_tok, layers_tok, k_tok;
    hs >> magic >> version >> order_tok >> layers_tok >> k_tok;
    if (magic != "DPN" || version != "v1") bad_checkpoint("unsupported header '" + header + "'");
    if (order_tok.rfind("P=", 0) != 0 || layers_tok.rfind("layers=", 0) != 0 || k_tok.rfind("k=", 0) != 0) {
        bad_checkpoint("malformed header '" + header + "'");
    }
    NetworkParams p;
    try {
        p.order = std::stoi(order_tok.substr(2));
        for (double w : parse_csv_doubles(layers_tok.substr(7))) p.widths.push_back(static_cast<int>(w));
        p.wavenumber = std::stod(k_tok.substr(2));
    } catch (const std::exception&) {
        bad_checkpoint("malformed header '" + header + "'");
    }
    if (p.widths.size() < 3 || p.widths.front() != 2 || p.widths.back() != 4 * p.order + 2) {
        bad_checkpoint("layer widths inconsistent with P");
    }
    std::string line;
    if (!std::getline(in, line) || line.rfind("domain=", 0) != 0) bad_checkpoint("missing domain line");
    const auto d = parse_csv_doubles(line.substr(7));
    if (d.size() != 4) bad_checkpoint("domain line needs four values");
    p.domain = {d[0], d[1], d[2], d[3]};

    for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
        std::string tag;
        std::size_t index = 0;
        Eigen::Index rows = 0, cols = 0;
        in >> tag >> index >> rows >> cols;
        if (tag != "weight" || index != l || rows != p.widths[l + 1] || cols != p.widths[l]) {
            bad_checkpoint("unexpected weight block " + std::to_string(l));
        }
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) in >> w(r, c);
        }
        in >> tag >> index >> rows;
        if (tag != "bias" || index != l || rows != p.widths[l + 1]) bad_checkpoint("unexpected bias block");
        Eigen::VectorXd b(rows);
        for (Eigen::Index r = 0; r < rows; ++r) in >> b(r);
        if (!in) bad_checkpoint("truncated data in layer " + std::to_string(l));
        p.weights.push_back(std::move(w));
        p.biases.push_back(std::move(b));
    }
    std::string end;
    in >> end;
    if (end != "end") bad_checkpoint("missing end marker");
    std::getline(in, line);
    return p;
}

}  // namespace

PartitionedNetwork read_checkpoint(std::istream& in) {
    PartitionedNetwork out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        NetworkParams p = read_block(in, line);
        out.subdomains.push_back(p.domain);
        out.networks.push_back(std::move(p));
    }
    if (out.networks.empty()) bad_checkpoint("no network blocks");
    return out;
}

PartitionedNetwork load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("checkpoint: cannot open " + path);
    return read_checkpoint(in);
}

}  // namespace lapdsm::dpn
