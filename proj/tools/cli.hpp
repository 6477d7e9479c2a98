#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "falc/falc.hpp"
#include "falc/problems.hpp"
#include "json.hpp"

namespace falc::cli {

enum class Command { Solve, Generate, Bench };

enum ExitCode : int { kOk = 0, kConfigError = 1, kMaxOuter = 2, kSolverError = 3 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Either a preset with generator parameters or a serialized instance directory.
struct ProblemConfig {
    std::string preset = "robust_pca";  // robust_pca | stable_pcp | basis_pursuit | matrix_completion
    std::string instance;               // instance directory, overrides the generator
    std::size_t n = 50;
    double rank_frac = 0.05;
    double sparse_frac = 0.05;
    double rho_noise = 0.0;
    std::string noise = "uniform";      // uniform | gaussian
    double mu2 = 0.0;                   // 0 selects 1 / sqrt(n)
    std::size_t sparsity = 8;           // basis_pursuit
    std::size_t rows = 80;              // basis_pursuit
    std::size_t rank = 5;               // matrix_completion
    double sample_frac = 0.5;           // matrix_completion

    bool operator==(const ProblemConfig&) const = default;
};

struct RunConfig {
    Command command = Command::Solve;
    ProblemConfig problem;
    SolverParams solver;
    std::vector<std::uint64_t> seeds{1};
    std::filesystem::path output = "falc_out";
    std::string format = "csv";  // bench summary format: csv | json
    std::size_t trials = 1;
    bool verbose = false;

    /// Seed of trial i: seeds[i] when listed, else seeds.back() + (i - seeds.size() + 1).
    std::uint64_t seed_for(std::size_t trial) const;
    void validate() const;
};

bool params_equal(const SolverParams& a, const SolverParams& b);
bool operator==(const RunConfig& a, const RunConfig& b);

std::string_view to_string(Command c) noexcept;
Command parse_command(std::string_view text);

/// Preset solver settings for a problem, before config overrides.
SolverParams default_params(const ProblemConfig& problem);

nlohmann::json to_json(const SolverParams& p);
nlohmann::json to_json(const RunConfig& c);
/// Missing fields keep the defaults of `base`; unknown fields are an error.
SolverParams params_from_json(const nlohmann::json& j, SolverParams base);
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// A problem built from a config and a seed, with whatever ground truth exists.
struct BuiltProblem {
    ProblemSpec spec;
    std::optional<GroundTruth> truth;
    std::optional<SparseInstance> sparse;
    std::optional<CompletionInstance> completion;
};

BuiltProblem build_problem(const ProblemConfig& problem, std::uint64_t seed);

nlohmann::json report_to_json(const SolveReport& report, const std::optional<MetricsRow>& metrics);

/// Writes doubles with 17 significant digits.
std::string format_real(double v);
void write_history_csv(std::ostream& out, const SolveReport& report);

struct TrialRow {
    std::uint64_t seed = 0;
    MetricsRow metrics;
};

struct BenchSummary {
    MetricsRow average;
    MetricsRow min;
    MetricsRow max;
    std::size_t trials = 0;
};

BenchSummary summarize(const std::vector<TrialRow>& rows);

/// Header of metric names, then the average, min and max rows.
void write_summary_csv(std::ostream& out, const BenchSummary& s);
/// seed column then the metric columns.
void write_trials_csv(std::ostream& out, const std::vector<TrialRow>& rows);

int run_solve(const RunConfig& config, std::ostream& log);
int run_generate(const RunConfig& config, std::ostream& log);
int run_bench(const RunConfig& config, std::ostream& log);

/// Entry point shared by main and the tests; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace falc::cli
