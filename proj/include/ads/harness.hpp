#ifndef ADS_HARNESS_HPP
#define ADS_HARNESS_HPP

#include <filesystem>
#include <string>

#include "ads/config.hpp"

// Experiment drivers. Each command writes its CSVs plus a manifest.txt into
// the output directory and returns a process exit code: 0 success, 2 config
// error, 3 numerical failure.

namespace ads {

constexpr const char* kVersionTag = "adslab 1.0.0";

/// 17-significant-digit CSV real formatting ('.' decimal).
std::string csv_real(double v);

int run_sharpness(const ExperimentConfig& cfg, const std::filesystem::path& out);
int run_count(const ExperimentConfig& cfg, const std::filesystem::path& out);
int run_spectrum(const ExperimentConfig& cfg, const std::filesystem::path& out);
int run_deform(const ExperimentConfig& cfg, const std::filesystem::path& out);
int run_laplacian(const ExperimentConfig& cfg, const std::filesystem::path& out);
int run_series_eval(const ExperimentConfig& cfg, const std::filesystem::path& out);

/// Dispatch by subcommand name; exceptions mapped to exit codes.
int run_command(const std::string& command, const ExperimentConfig& cfg,
                const std::filesystem::path& out);

}  // namespace ads

#endif
