#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "metaseal/canonical.hpp"

namespace metaseal {

struct BenchOptions {
    std::size_t size_mb = 64;
    int repeats = 5;
    std::uint64_t seed = 42;
    std::filesystem::path work_dir; // empty: a fresh temp dir, removed afterwards
};

struct BenchResult {
    std::size_t size_mb = 0;
    int repeats = 0;
    double baseline_seconds_median = 0.0;
    double sealed_seconds_median = 0.0;
    double overhead_percent_median = 0.0; // median of per-repeat overheads
    std::vector<double> baseline_seconds;
    std::vector<double> sealed_seconds;
    std::vector<double> overhead_percent;
    bool chain_verified = false; // sealed run's chain verifies afterwards

    Document to_document() const;
};

/// Synthetic lifecycle pipeline (data generation, one streaming transform
/// pass, a compute-bound training loop writing checkpoints) run twice per
/// repeat: unsealed baseline and fully sealed 7-stage chain + meta-seal.
/// Overhead percent is (sealed - baseline) / baseline * 100.
BenchResult run_benchmark(const BenchOptions& options);

} // namespace metaseal
