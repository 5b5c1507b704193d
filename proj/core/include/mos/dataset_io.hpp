#pragma once

#include "mos/chansim.hpp"
#include "mos/features.hpp"
#include "mos/nn.hpp"

#include <map>
#include <string>
#include <vector>

namespace mos::io {

/// On-disk containers share one layout: a line-oriented "key=value" text
/// header closed by "end_header", followed by raw little-endian 64-bit
/// payload data. Round trips are bit-exact.

struct Dataset {
    chansim::SimConfig cfg;
    std::vector<chansim::ChannelSample> samples;
};

void write_dataset(const std::string& path, const Dataset& ds);
Dataset read_dataset(const std::string& path);

struct FeatureSet {
    std::string kind; // "proposed" | "ecnet"
    std::size_t n_common = 0;
    std::size_t d_cols = 0;
    std::size_t l_max = 0;
    std::vector<std::size_t> mode_sizes; // original mode length per column
    chansim::SimConfig sim;              // provenance echo
    std::vector<linalg::RealMatrix> g;   // one n_common x d_cols matrix per sample
    std::vector<features::LabelVector> labels;
};

void write_features(const std::string& path, const FeatureSet& fs);
FeatureSet read_features(const std::string& path);

/// Model container: layer specs in the header, kernel then bias arrays per
/// layer in the payload. `extra` carries run metadata (split seed etc.).
void save_model(const std::string& path, const nn::NNModel& m,
                const std::map<std::string, std::string>& extra);
nn::NNModel load_model(const std::string& path,
                       std::map<std::string, std::string>* extra = nullptr);

} // namespace mos::io
