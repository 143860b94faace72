#pragma once

#include "aad/config.hpp"
#include "aad/synth.hpp"
#include "aad/trainers.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace aad {

/// Fold/size/seed grid over one data source. Synthetic data is regenerated
/// per seed (each seed stands in for a subject); an external dataset is
/// shared by all seeds, which then only vary the splits and initial labels.
struct ExperimentPlan
{
    std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
    std::vector<std::size_t> training_sizes{5, 10, 15};
    int n_folds = 3;
    std::vector<std::uint64_t> seeds{1};
    TrainConfig train;   // method field ignored
    SynthConfig synth;
    std::optional<StoredDataset> external;
    bool parallel = true;

    /// Throws Error(plan_infeasible) when a training size exceeds the
    /// training pool of some fold, Error(invalid_config) on an empty grid.
    void validate() const;
};

struct ReportRow
{
    Method method = Method::single;
    std::size_t training_size = 0;
    int fold = 0;
    std::uint64_t seed = 0;
    std::optional<double> transductive_accuracy;   // absent for supervised
    double inductive_accuracy = 0.0;
    double wall_time_seconds = 0.0;
    double normalized_cpu_time = 0.0;
    int iterations_run = 0;
    bool converged = false;

    // Not written to CSV.
    double cpu_time_seconds = 0.0;
    std::vector<std::size_t> train_indices;
};

struct ExperimentReport
{
    std::vector<ReportRow> rows;

    /// Orders rows by (method, training_size, fold, seed).
    void sort();
};

ExperimentReport run_experiment(const ExperimentPlan& plan);

inline constexpr const char* kReportHeader =
    "method,training_size,fold,seed,transductive_accuracy,inductive_accuracy,wall_time_seconds,"
    "normalized_cpu_time,iterations_run,converged";

/// Header plus one row per cell in sorted order; floats at 6 significant
/// digits, missing transductive accuracy as an empty field.
std::string report_csv(const ExperimentReport& report);
void emit_csv(const ExperimentReport& report, const std::filesystem::path& path);
ExperimentReport parse_report_csv(const std::string& text);
ExperimentReport read_report_csv(const std::filesystem::path& path);

struct MeanStd
{
    double mean = 0.0;
    double std = 0.0;   // population
    std::size_t n = 0;
};

MeanStd mean_std(const std::vector<double>& values);

struct SummaryRow
{
    Method method = Method::single;
    std::size_t training_size = 0;
    std::size_t n = 0;
    std::optional<MeanStd> transductive_accuracy;
    MeanStd inductive_accuracy;
    MeanStd normalized_cpu_time;
};

/// Mean and population standard deviation over folds x seeds per
/// (method, training_size).
std::vector<SummaryRow> summarize(const ExperimentReport& report);
std::string summary_csv(const std::vector<SummaryRow>& rows);

// Config keys understood by the helpers below.
std::vector<std::string> train_config_keys();
std::vector<std::string> synth_config_keys();
std::vector<std::string> experiment_config_keys();

TrainConfig train_config_from(const Config& cfg);
SynthConfig synth_config_from(const Config& cfg);
/// Loads `data_dir` when set, otherwise plans on synthetic data.
ExperimentPlan plan_from(const Config& cfg);

/// Deterministic 64-bit mix used to derive per-cell seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

} // namespace aad
