#pragma once
// Fully resolved parameter record behind the run/eval/tune commands.

#include <cstdint>
#include <optional>
#include <string>

#include "dmapper/core_data.hpp"
#include "dmapper/evaluation.hpp"
#include "dmapper/pipeline.hpp"
#include "dmapper/serialize.hpp"

namespace dmapper::cli {

struct RunConfig {
    std::string input;
    std::string format = "points-csv";  // points-csv | xyz | distance-csv | fasta
    bool header = false;
    std::size_t kmer_k = 3;  // fasta only
    bool scale = false;      // min-max scale the distance matrix
    std::string cluster_on = "scaled";  // scaled | raw, for scaled matrices
    std::string filter_on = "scaled";   // scaled | raw, matrix the filter is computed on
    std::string filter = "axis:0";      // axis:<k> | sum | mean-distance

    CoverMode mode = CoverMode::DMapper;
    std::size_t n = 10;
    std::optional<double> alpha;
    std::optional<double> p;
    double alpha_star = 0.005;
    double eps = 0.5;
    std::size_t min_samples = 3;
    std::string metric = "auto";  // auto | euclidean | precomputed
    EmConfig em;

    std::uint64_t seed = 0;
    std::size_t replicates = 100;
    double confidence = 0.85;
    std::size_t threads = 1;
    std::size_t grid = 50;

    /// Checks field consistency and resolves metric "auto".
    void resolve();
    PipelineParams pipeline() const;
    BootstrapConfig bootstrap() const;
};

Json to_json(const RunConfig& cfg);
/// Reads the keys present in `j` over `base`; unknown keys are a ConfigError.
RunConfig from_json(const Json& j, RunConfig base = {});

struct Inputs {
    Dataset data;
    FilterValues filter;
};

Inputs load_inputs(const RunConfig& cfg);

}  // namespace dmapper::cli
