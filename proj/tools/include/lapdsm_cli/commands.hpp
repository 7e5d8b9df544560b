#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lapdsm/aperture.hpp"
#include "lapdsm/scene.hpp"

namespace lapdsm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct CommonOptions {
    std::string preset;      // empty with no scene file selects ex1_1
    std::string scene_file;
    std::string aperture;    // config1[:Q] | config2[:Q per arc] | full[:Q]
    std::uint64_t seed = 0;
    double noise = 0.01;
    int grid = 128;
    int forward_grid = 120;
    std::string out;
};

struct SimulateOptions {
    CommonOptions common;
};

struct ReconstructOptions {
    CommonOptions common;
    std::string data_file;   // empty: simulate with common.noise and common.seed
    std::string method = "partial";
    int order = 20;
    int testing_order = 0;   // 0: same as order
    double sigma_exp = -1.0; // negative: 8 for ffsm, 4 for fssm
    std::vector<double> sigma_exp_list;
    std::string sources = "20x20";
    std::string checkpoint;
};

struct TrainOptions {
    CommonOptions common;
    int iterations = 5000;
    int test_functions = 400;
    int points = 400;
    int batch_sources = 3;
    int order = 20;
    double max_noise = 0.05;
    std::string partition = "1x1";
    int checkpoint_every = 500;
};

struct KernelOptions {
    std::string out;
    double alpha = 1.0471975511965976;
    std::vector<double> betas{0.0, 0.7853981633974483, 1.5707963267948966};
    double k = 8.0;
    double r_max = 2.0;
    int samples = 201;
    int quadrature = 1024;
};

struct RnOptions {
    CommonOptions common;
    std::string method = "ffsm";
    int order = 20;
    int testing_order = 0;
    double sigma_exp = -1.0;
    std::string sources = "20x20";
    std::string checkpoint;
};

// "config1", "config2:30", "full:512", ...
ApertureSet parse_aperture(const std::string& spec);
// "NxM" with N == M for the sources lattice and partitions.
int parse_square(const std::string& spec, const char* what);

Scene resolve_scene(const CommonOptions& common);

void simulate(const SimulateOptions& options);
void reconstruct(const ReconstructOptions& options);
void train_dpn(const TrainOptions& options);
void kernel(const KernelOptions& options);
void relative_norm(const RnOptions& options);

// Parses argv, dispatches and maps exceptions to exit codes.
int run(int argc, const char* const* argv);

}  // namespace lapdsm::cli
