#pragma once

#include "mos/dataset_io.hpp"
#include "mos/estimators.hpp"
#include "mos/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mos::harness {

struct Split {
    std::vector<std::size_t> train, test;
};

/// Deterministic per-class split: each class's indices are shuffled with a
/// seed-derived stream and the first `fraction` go to training.
Split stratified_split(std::span<const std::size_t> labels, double fraction, std::uint64_t seed);

struct GenerateResult {
    std::string dataset_path;
    std::string features_path;
    std::string ecnet_features_path;
    std::size_t n_samples = 0; // physical samples (carriers grouped)
    std::size_t d_cols = 0;
};

/// Simulates the dataset, persists it, and featurizes it twice: the
/// multi-mode G matrices and the single-column SISO variant.
GenerateResult cmd_generate(const chansim::SimConfig& cfg, std::size_t n_common,
                            const std::string& out_path, std::ostream& log);

struct TrainOptions {
    std::string arch = "proposed"; // proposed | ecnet
    std::size_t filters = 8;
    std::size_t filter_size = 3;
    double split_fraction = 0.7;
    nn::TrainConfig train; // train.seed doubles as the split seed
};

struct TrainSummary {
    std::string model_path;
    std::string loss_csv_path;
    std::size_t n_train = 0;
    std::size_t parameters = 0;
    double final_loss = 0.0;
};

TrainSummary cmd_train(const std::string& features_path, const TrainOptions& opt,
                       const std::string& model_path, std::ostream& log);

struct EvalOptions {
    std::string method = "proposed"; // proposed | ecnet | large
    double xi = 0.8;
    double rho = 0.57;
    std::optional<double> split_fraction;     // default: recorded in the model
    std::optional<std::uint64_t> split_seed;  // required for method "large"
    std::string trace_csv_path;               // per-sample scores, optional
};

EvalReport cmd_eval(const std::string& features_path, const std::string& model_path,
                    const EvalOptions& opt, const std::string& report_path, std::ostream& log);

struct InspectOptions {
    std::string proposed_model_path; // optional
    std::string ecnet_model_path;    // optional
    double xi = 0.8;
    double rho = 0.57;
    std::size_t n_common = 50;
};

/// Re-runs the pre-processing for one stored sample and emits aligned
/// columns (G, per-estimator scores) for plotting.
void cmd_inspect(const std::string& dataset_path, std::size_t sample_id,
                 const InspectOptions& opt, const std::string& out_csv, std::ostream& log);

void cmd_report(const std::vector<std::string>& report_paths, const std::string& out_csv,
                std::ostream& log);

} // namespace mos::harness
