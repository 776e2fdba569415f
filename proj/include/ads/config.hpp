#ifndef ADS_CONFIG_HPP
#define ADS_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ads/groups.hpp"
#include "ads/spectra.hpp"

// Line-oriented `key = value` configuration with [section] headers.
// Unknown sections or keys are hard errors.

namespace ads {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GroupSpecKind { trivial, cyclic, schottky, pair };

struct ExperimentConfig {
    // [group]
    GroupSpecKind kind = GroupSpecKind::schottky;
    double T = 2.0;
    CyclicSide side = CyclicSide::left;
    std::optional<double> T2;
    int k = 2;
    std::vector<double> angles;  // empty -> i * pi / (2k)
    bool antipode = false;

    // [deform]
    bool deform_enabled = false;
    DeformMode mode = DeformMode::rotation;
    double t = 0.0;
    double t_start = 0.0;
    double t_step = 0.1;
    int t_count = 6;
    DeformParams deform_params;

    // [run]
    int depth = 8;
    std::uint64_t seed = 1;
    int threads = 0;
    bool export_orbit = false;

    // [spectral]
    Model model = Model::ads;
    int m = 2;
    int ell_min = 2;
    int ell_max = 8;

    // [series]
    double shell_r = 1.0;
    double ratio_floor = 2.0;
    int samples = 100;
    int trials = 64;
    std::vector<double> point{1.0, 0.0, 0.0, 0.0};

    // [count]
    double r_start = 0.5;
    double r_step = 1.0;
    int r_count = 20;

    // [laplacian]
    double h = 1e-3;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Canonical `key = value` echo of a parsed config (for the run manifest).
std::string config_echo(const ExperimentConfig& cfg);

/// Build the configured generator set (group + optional deformation at cfg.t).
GeneratorSet build_group(const ExperimentConfig& cfg);

}  // namespace ads

#endif
