#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "metaseal/meta_seal.hpp"

namespace metaseal {

enum class TamperScope { sealed, journal };

struct TamperTrial {
    std::size_t index = 0;
    std::string target;      // "record:<id>", "meta", or "journal:<seq>"
    std::string description; // what was mutated
    bool in_sealed_scope = true;
    bool detected = false;
    std::string component; // failing component code when detected
};

struct TamperSummary {
    std::size_t trials = 0;
    std::size_t sealed_trials = 0;
    std::size_t detected = 0;
    std::size_t out_of_scope = 0;
    std::uint64_t seed = 0;
    std::vector<TamperTrial> entries;

    double detection_rate() const noexcept; // over sealed-scope trials
    Document to_document() const;
};

/// Applies seeded random single-field/byte mutations across the stored
/// envelopes (and the meta envelope), verifying after each; the registry
/// snapshot is restored between trials. Journal-scope mutations are outside
/// the sealed surface and reported as such.
TamperSummary run_tamper_simulation(const std::filesystem::path& registry_path,
                                    const MetaSeal& meta, const PublicKey& key,
                                    std::size_t trials, std::uint64_t seed,
                                    TamperScope scope = TamperScope::sealed);

} // namespace metaseal
