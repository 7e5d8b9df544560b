#include "lapdsm_cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lapdsm/dpn.hpp"
#include "lapdsm/dsm.hpp"
#include "lapdsm/errors.hpp"
#include "lapdsm/finite_space.hpp"
#include "lapdsm/forward.hpp"
#include "lapdsm/io.hpp"

namespace lapdsm::cli {

using nlohmann::json;

namespace {

std::string require_out(const std::string& out) {
    if (out.empty()) throw ValidationError("--out PREFIX is required");
    return out;
}

json common_json(const CommonOptions& c, const Scene& scene) {
    const std::string preset = c.preset.empty() && c.scene_file.empty() ? "ex1_1" : c.preset;
    json assumed = json::array();
    if (preset == "ex2_2") assumed.push_back("rectangle sizes and positions");
    return {{"preset", preset},
            {"preset_assumed_values", assumed},
            {"preset_noise_levels", {0.01, 0.05}},
            {"scene_file", c.scene_file},
            {"aperture_override", c.aperture},
            {"seed", c.seed},
            {"noise", c.noise},
            {"grid", c.grid},
            {"forward_grid", c.forward_grid},
            {"scene", json::parse(scene_to_json(scene))}};
}

void write_meta(const std::string& prefix, const json& meta) { io::save_text(prefix + ".meta.json", meta.dump(2) + "\n"); }

FarFieldData acquire_data(const CommonOptions& c, const Scene& scene, const std::string& data_file) {
    if (!data_file.empty()) return io::load_far_field_csv(data_file, scene.aperture());
    return add_noise(simulate_far_field(scene, c.forward_grid), c.noise, c.seed);
}

double sigma_exponent_for(const std::string& method, double requested) {
    if (requested >= 0.0) return requested;
    return method == "fssm" ? 4.0 : 8.0;
}

FiniteSpaceOptions finite_options(const std::string& method, int order, int testing_order, double sigma_exp,
                                  const std::string& sources) {
    FiniteSpaceOptions o;
    o.method = method == "fssm" ? FiniteSpaceMethod::fssm : FiniteSpaceMethod::ffsm;
    o.trial_order = order;
    o.testing_order = testing_order > 0 ? testing_order : order;
    o.sigma_exponent = sigma_exp;
    o.sources_per_side = parse_square(sources, "--sources");
    return o;
}

// Probing functions from a checkpoint, rescaled when the checkpoint was
// trained at a different wavenumber.
ProbingSet checkpoint_probing(const std::string& path, const SamplingGrid& grid, const ApertureSet& aperture,
                              double k) {
    if (path.empty()) throw ValidationError("method dpn requires --checkpoint");
    dpn::PartitionedNetwork net = dpn::load_checkpoint(path);
    const int order = net.order();
    const double k_trained = net.wavenumber();
    if (k_trained == k) {
        return dpn::network_probing([&net](std::span<const Vec2> pts) { return net.coefficients(pts); }, order, grid,
                                    aperture, k);
    }
    const dpn::RescaledProbe probe(std::move(net), k_trained, k);
    return dpn::network_probing([&probe](std::span<const Vec2> pts) { return probe.coefficients(pts); }, order, grid,
                                aperture, k);
}

std::string sigma_tag(double m) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", m);
    return buf;
}

}  // namespace

ApertureSet parse_aperture(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    int count = 0;
    if (colon != std::string::npos) {
        try {
            std::size_t used = 0;
            count = std::stoi(spec.substr(colon + 1), &used);
            if (used != spec.size() - colon - 1) throw std::invalid_argument(spec);
        } catch (const std::exception&) {
            throw ValidationError("aperture: bad receiver count in '" + spec + "'");
        }
        if (count < 1) throw ValidationError("aperture: receiver count must be positive");
    }
    if (name == "config1") return ApertureSet::config_one(count ? count : 100);
    if (name == "config2") return ApertureSet::config_two(count ? count : 30);
    if (name == "full") return ApertureSet::full_circle(count ? count : 360);
    throw ValidationError("aperture: unknown configuration '" + spec + "' (config1, config2, full)");
}

int parse_square(const std::string& spec, const char* what) {
    const auto x = spec.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(spec);
        const int a = std::stoi(spec.substr(0, x));
        const int b = std::stoi(spec.substr(x + 1));
        if (a != b || a < 1) throw std::invalid_argument(spec);
        return a;
    } catch (const std::exception&) {
        throw ValidationError(std::string(what) + ": expected NxN with N >= 1, got '" + spec + "'");
    }
}

Scene resolve_scene(const CommonOptions& c) {
    if (!c.scene_file.empty() && !c.preset.empty()) throw ValidationError("use either --scene or --preset");
    Scene scene = c.scene_file.empty() ? presets::by_name(c.preset.empty() ? "ex1_1" : c.preset)
                                       : load_scene(c.scene_file);
    if (!c.aperture.empty()) scene = scene.with_aperture(parse_aperture(c.aperture));
    if (c.grid < 1) throw ValidationError("--grid must be positive");
    if (c.noise < 0.0) throw ValidationError("--noise must be non-negative");
    return scene;
}

void simulate(const SimulateOptions& o) {
    const std::string prefix = require_out(o.common.out);
    const Scene scene = resolve_scene(o.common);
    const FarFieldData clean = simulate_far_field(scene, o.common.forward_grid);
    const FarFieldData noisy = add_noise(clean, o.common.noise, o.common.seed);
    io::save_far_field_csv(prefix + ".clean.csv", clean);
    io::save_far_field_csv(prefix + ".farfield.csv", noisy);
    json meta = common_json(o.common, scene);
    meta["command"] = "simulate";
    meta["solver"] = {{"discretization", "piecewise-constant collocation, equivalent-disk self term"},
                      {"linear_solver", "dense partial-pivot LU"},
                      {"forward_grid", o.common.forward_grid}};
    meta["outputs"] = {prefix + ".clean.csv", prefix + ".farfield.csv"};
    write_meta(prefix, meta);
}

void reconstruct(const ReconstructOptions& o) {
    const std::string prefix = require_out(o.common.out);
    const Scene scene = resolve_scene(o.common);
    const std::string& method = o.method;
    if (method != "full" && method != "partial" && method != "ffsm" && method != "fssm" && method != "dpn") {
        throw ValidationError("--method must be one of full, partial, ffsm, fssm, dpn");
    }
    const FarFieldData data = acquire_data(o.common, scene, o.data_file);
    const SamplingGrid grid(scene.domain(), o.common.grid);
    const double k = scene.wavenumber();

    json meta = common_json(o.common, scene);
    meta["command"] = "reconstruct";
    meta["method"] = method;
    meta["data_file"] = o.data_file;
    json outputs = json::array();

    const auto emit = [&](const std::string& stem, const IndexField& field) {
        io::save_index(stem, field);
        outputs.push_back(stem + ".csv");
        outputs.push_back(stem + ".pgm");
    };

    if (method == "full" || method == "partial") {
        if (method == "full" && !data.aperture.is_full_circle()) {
            throw ValidationError("method full needs full-circle data; pass --aperture full[:Q]");
        }
        emit(prefix + ".index", reconstruct_classical(data, grid, k));
    } else if (method == "dpn") {
        const ProbingSet probing = checkpoint_probing(o.checkpoint, grid, data.aperture, k);
        const auto fields = index_per_incidence(data, probing, grid);
        emit(prefix + ".index", average_and_normalize(fields));
        meta["checkpoint"] = o.checkpoint;
    } else {
        std::vector<double> exps = o.sigma_exp_list;
        const bool sweep = !exps.empty();
        if (!sweep) exps.push_back(sigma_exponent_for(method, o.sigma_exp));
        for (double m : exps) {
            const auto opts = finite_options(method, o.order, o.testing_order, m, o.sources);
            const std::string stem = sweep ? prefix + ".sigma" + sigma_tag(m) + ".index" : prefix + ".index";
            emit(stem, reconstruct_finite_space(data, opts, grid, k));
        }
        meta["order"] = o.order;
        meta["testing_order"] = o.testing_order > 0 ? o.testing_order : o.order;
        meta["sigma_exponents"] = exps;
        meta["sources"] = o.sources;
    }
    meta["outputs"] = outputs;
    write_meta(prefix, meta);
}

void train_dpn(const TrainOptions& o) {
    const std::string prefix = require_out(o.common.out);
    const Scene scene = resolve_scene(o.common);
    dpn::TrainConfig config;
    config.iterations = o.iterations;
    config.test_functions = o.test_functions;
    config.points = o.points;
    config.sources = o.batch_sources;
    config.order = o.order;
    config.max_noise = o.max_noise;
    config.seed = o.common.seed;
    config.checkpoint_every = o.checkpoint_every;
    config.validate();

    const int per_side = parse_square(o.partition, "--partition");
    const auto subdomains = dpn::partition_domain(scene.domain(), per_side);
    const double k = scene.wavenumber();
    const ApertureSet& aperture = scene.aperture();

    dpn::PartitionedNetwork done;
    std::vector<std::vector<double>> traces;
    const auto save_all = [&](const dpn::NetworkParams* current, const std::vector<double>* trace) {
        dpn::PartitionedNetwork snapshot = done;
        auto all_traces = traces;
        if (current) {
            snapshot.subdomains.push_back(current->domain);
            snapshot.networks.push_back(*current);
            all_traces.push_back(*trace);
        }
        dpn::save_checkpoint(prefix + ".ckpt", snapshot);
        std::ostringstream csv;
        csv << "network,iteration,loss\n";
        for (std::size_t n = 0; n < all_traces.size(); ++n) {
            for (std::size_t i = 0; i < all_traces[n].size(); ++i) {
                csv << n << ',' << i << ',' << io::format_number(all_traces[n][i]) << '\n';
            }
        }
        io::save_text(prefix + ".loss.csv", csv.str());
    };

    for (std::size_t i = 0; i < subdomains.size(); ++i) {
        dpn::TrainConfig local = config;
        local.seed = config.seed + i;
        auto result = dpn::train(local, aperture, scene.domain(), subdomains[i], k,
                                 [&](int, const dpn::NetworkParams& p, const std::vector<double>& trace) {
                                     save_all(&p, &trace);
                                 });
        done.subdomains.push_back(subdomains[i]);
        done.networks.push_back(std::move(result.params));
        traces.push_back(std::move(result.loss_trace));
    }
    save_all(nullptr, nullptr);

    json meta = common_json(o.common, scene);
    meta["command"] = "train-dpn";
    meta["train"] = {{"iterations", o.iterations},
                     {"test_functions", o.test_functions},
                     {"points", o.points},
                     {"sources_per_function", o.batch_sources},
                     {"order", o.order},
                     {"hidden", config.hidden},
                     {"max_noise", o.max_noise},
                     {"learning_rate", config.learning_rate},
                     {"decay_factor", config.decay_factor},
                     {"decay_every", config.decay_every},
                     {"beta1", config.beta1},
                     {"beta2", config.beta2},
                     {"epsilon", config.epsilon},
                     {"partition", o.partition},
                     {"checkpoint_every", o.checkpoint_every}};
    meta["outputs"] = {prefix + ".ckpt", prefix + ".loss.csv"};
    write_meta(prefix, meta);
}

void kernel(const KernelOptions& o) {
    const std::string prefix = require_out(o.out);
    if (o.samples < 2) throw ValidationError("--samples must be at least 2");
    if (!(o.k > 0.0) || !(o.r_max > 0.0)) throw ValidationError("--k and --rmax must be positive");
    const ApertureSet arc({{o.alpha, 0.0, 1}});
    const ApertureSet full = ApertureSet::full_circle(1);
    std::ostringstream csv;
    csv << "R";
    for (double b : o.betas) csv << ",beta=" << io::format_number(b);
    csv << ",full\n";
    for (int i = 0; i < o.samples; ++i) {
        const double r = o.r_max * i / (o.samples - 1);
        csv << io::format_number(r);
        for (double b : o.betas) {
            csv << ',' << io::format_number(std::abs(kernel_gamma({0, 0}, r * direction(b), arc, o.k, o.quadrature)));
        }
        csv << ',' << io::format_number(std::abs(kernel_gamma({0, 0}, {r, 0.0}, full, o.k, o.quadrature))) << '\n';
    }
    io::save_text(prefix + ".kernel.csv", csv.str());
    json meta = {{"command", "kernel"}, {"alpha", o.alpha}, {"betas", o.betas},     {"k", o.k},
                 {"r_max", o.r_max},    {"samples", o.samples}, {"quadrature", o.quadrature},
                 {"outputs", {prefix + ".kernel.csv"}}};
    write_meta(prefix, meta);
}

void relative_norm(const RnOptions& o) {
    const std::string prefix = require_out(o.common.out);
    const Scene scene = resolve_scene(o.common);
    const SamplingGrid grid(scene.domain(), o.common.grid);
    const double k = scene.wavenumber();
    const ApertureSet& aperture = scene.aperture();
    json meta = common_json(o.common, scene);
    meta["command"] = "rn";
    meta["method"] = o.method;
    ProbingSet probing = [&] {
        if (o.method == "classical") return classical_probing(grid, aperture, k);
        if (o.method == "dpn") {
            meta["checkpoint"] = o.checkpoint;
            return checkpoint_probing(o.checkpoint, grid, aperture, k);
        }
        if (o.method == "ffsm" || o.method == "fssm") {
            const auto opts =
                finite_options(o.method, o.order, o.testing_order, sigma_exponent_for(o.method, o.sigma_exp), o.sources);
            meta["order"] = opts.trial_order;
            meta["testing_order"] = opts.testing_order;
            meta["sigma_exponent"] = opts.sigma_exponent;
            meta["sources"] = o.sources;
            return finite_space_probing(opts, aperture, grid, k);
        }
        throw ValidationError("--method must be one of classical, ffsm, fssm, dpn");
    }();
    const IndexField rn = lapdsm::relative_norm(probing, aperture, k, grid);
    io::save_index(prefix + ".rn", rn);
    meta["outputs"] = {prefix + ".rn.csv", prefix + ".rn.pgm"};
    write_meta(prefix, meta);
}

namespace {

void add_common(CLI::App* app, CommonOptions& c) {
    app->add_option("--preset", c.preset, "Built-in scene: ex1_1, ex1_2, ex2_1, ex2_2 (default ex1_1)");
    app->add_option("--scene", c.scene_file, "Scene JSON file");
    app->add_option("--aperture", c.aperture, "Override aperture: config1[:Q], config2[:Q], full[:Q]");
    app->add_option("--seed", c.seed, "Noise / training seed");
    app->add_option("--noise", c.noise, "Relative noise level delta")->capture_default_str();
    app->add_option("--grid", c.grid, "Sampling grid resolution per axis")->capture_default_str();
    app->add_option("--forward-grid", c.forward_grid, "Forward solver grid resolution")->capture_default_str();
    app->add_option("--out", c.out, "Output prefix")->required();
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Limited-aperture direct sampling toolkit"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* s = app.add_subcommand("simulate", "Synthesize clean and noisy far-field data");
    add_common(s, sim.common);

    ReconstructOptions rec;
    auto* r = app.add_subcommand("reconstruct", "Compute a normalized index function");
    add_common(r, rec.common);
    r->add_option("--data", rec.data_file, "Far-field CSV (default: simulate)");
    r->add_option("--method", rec.method, "full | partial | ffsm | fssm | dpn")->capture_default_str();
    r->add_option("--order", rec.order, "Fourier order P")->capture_default_str();
    r->add_option("--testing-order", rec.testing_order, "FFSM testing order (default: --order)");
    r->add_option("--sigma-exp", rec.sigma_exp, "sigma = 0.1^m (default 8 ffsm, 4 fssm)");
    r->add_option("--sigma-exp-list", rec.sigma_exp_list, "Comma-separated sweep of m")->delimiter(',');
    r->add_option("--sources", rec.sources, "FSSM source lattice NxN")->capture_default_str();
    r->add_option("--checkpoint", rec.checkpoint, "DPN checkpoint");

    TrainOptions tr;
    auto* t = app.add_subcommand("train-dpn", "Train the deep probing network");
    add_common(t, tr.common);
    t->add_option("--iterations", tr.iterations)->capture_default_str();
    t->add_option("--test-functions", tr.test_functions, "M")->capture_default_str();
    t->add_option("--points", tr.points, "L")->capture_default_str();
    t->add_option("--batch-sources", tr.batch_sources, "N")->capture_default_str();
    t->add_option("--order", tr.order, "P")->capture_default_str();
    t->add_option("--max-noise", tr.max_noise, "lambda")->capture_default_str();
    t->add_option("--partition", tr.partition, "KxK subdomains")->capture_default_str();
    t->add_option("--checkpoint-every", tr.checkpoint_every)->capture_default_str();

    KernelOptions ko;
    auto* kc = app.add_subcommand("kernel", "Tabulate |K_Gamma(0, R(cos b, sin b))|");
    kc->add_option("--out", ko.out, "Output prefix")->required();
    kc->add_option("--alpha", ko.alpha, "Arc half-width")->capture_default_str();
    kc->add_option("--betas", ko.betas, "Comma-separated directions")->delimiter(',');
    kc->add_option("--k", ko.k, "Wavenumber")->capture_default_str();
    kc->add_option("--rmax", ko.r_max)->capture_default_str();
    kc->add_option("--samples", ko.samples)->capture_default_str();
    kc->add_option("--quadrature", ko.quadrature, "Nodes per arc (>= 64)")->capture_default_str();

    RnOptions rn;
    auto* rc = app.add_subcommand("rn", "Relative norm of a probing family");
    add_common(rc, rn.common);
    rc->add_option("--method", rn.method, "classical | ffsm | fssm | dpn")->capture_default_str();
    rc->add_option("--order", rn.order)->capture_default_str();
    rc->add_option("--testing-order", rn.testing_order);
    rc->add_option("--sigma-exp", rn.sigma_exp);
    rc->add_option("--sources", rn.sources)->capture_default_str();
    rc->add_option("--checkpoint", rn.checkpoint);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*s) simulate(sim);
        if (*r) reconstruct(rec);
        if (*t) train_dpn(tr);
        if (*kc) kernel(ko);
        if (*rc) relative_norm(rn);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace lapdsm::cli
