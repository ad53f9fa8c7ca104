#pragma once

#include "heatmann/heat_operators.hpp"
#include "heatmann/mann.hpp"
#include "heatmann/regularization.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace heatmann::experiment {

inline constexpr const char* kToolVersion = "heatmann 0.1.0";

/// Exit codes shared by every command.
enum ExitCode : int { kSuccess = 0, kCheckFailed = 1, kConfigError = 2 };

/// Declarative experiment description. Text form is an INI file; every field
/// is addressable as `section.key` for command-line overrides.
struct ExperimentConfig {
    // [problem]
    std::size_t n_modes = 64;
    double horizon = 1.0;
    double gamma = 1.0;
    // [data]  generator: single-mode | smooth | rough | source-condition | file
    std::string generator = "single-mode";
    std::size_t mode = 1;
    double p = 1.0;
    std::string source = "rough";  // y profile for source-condition: rough | flat
    std::string data_file;
    // [initial]  empty file means x1 = 0
    std::string initial_file;
    // [noise]
    std::vector<double> eps{0.0};
    std::string profile = "white";
    std::vector<std::uint64_t> seeds{0};
    // [schedule]  name: picard | constant | harmonic | geometric
    std::string schedule = "picard";
    double d = 0.5;
    // [stop]
    double mu = 1.5;
    std::size_t max_iter = 100000;
    double tolerance = 1e-12;
    // [output]
    std::string out_dir = "out";
    std::size_t samples = 0;
    // [run]
    std::size_t parallel = 1;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses INI text, then applies `section.key=value` overrides in order.
/// Unknown keys and malformed values raise ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
std::string serialize_config(const ExperimentConfig& config);
/// Reads `path` (if given) and applies overrides.
ExperimentConfig load_config(const std::optional<std::filesystem::path>& path,
                             const std::vector<std::string>& overrides);

/// Checks every bound that can be checked without running (gamma interval,
/// schedule and profile names, eps ordering when `for_sweep`).
void validate_config(const ExperimentConfig& config, bool for_sweep);

SegmentingSchedule make_schedule(const ExperimentConfig& config);

/// A generated (or loaded) problem with its exact data and, when known, the true initial state.
struct ProblemInstance {
    HeatProblem problem;
    CoefVec f;
    std::optional<CoefVec> xbar;
    CoefVec x1;
    std::optional<double> p;
};

ProblemInstance build_instance(const ExperimentConfig& config, bool allow_oracle);

struct TrialResult {
    double eps;
    std::uint64_t seed;
    std::size_t k_stop;
    StopReason stopped_by;
    double final_residual;
    std::optional<double> final_error;
    /// ceil((mu-1)^{-2} ||xbar - x1||^2 eps^{-2}) + 1, when xbar is known and eps > 0
    std::optional<double> bound_rhs;
    RunRecord record;
};

TrialResult run_trial(const ExperimentConfig& config, const ProblemInstance& instance, double eps,
                      std::uint64_t seed);

struct CommandOptions {
    bool allow_oracle = false;
    OperatorFault fault = OperatorFault::none;
};

int cmd_solve(const ExperimentConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const ExperimentConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_gen(const ExperimentConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err);

/// RunRecord CSV: k,residual_norm,v_diff_norm[,error_norm],sum_dk_1mdk
std::string run_record_csv(const RunRecord& record);
/// Sweep CSV, one row per trial, rows in the given order.
std::string sweep_csv(const ExperimentConfig& config, const std::vector<TrialResult>& trials);

}  // namespace heatmann::experiment
