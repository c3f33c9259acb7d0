#pragma once

// Synthetic homopolymer corpus: (Mn, dispersity) drawn to cover a rectangle
// in (log Mn, dispersity) space, organized into degeneracy groups whose
// members share the nominal scalars exactly but differ in distribution
// shape. Records persist as JSON Lines; splits are group-aware so scalar
// duplicates never leak across train/val/test.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyset/encode.hpp"
#include "polyset/ensemble.hpp"
#include "polyset/mwd.hpp"

namespace polyset {

struct DatasetConfig {
    int n_groups = 2500;
    int variants_per_group = 4;
    std::pair<double, double> mn_range{1e4, 1e6};          // log-uniform draw
    std::pair<double, double> dispersity_range{1.5, 4.0};  // uniform draw
    int chains_per_ensemble = 512;
    double m0 = 100.0;
    std::string monomer = "A";
    std::uint64_t master_seed = 0;
    SamplingMode sampling_mode = SamplingMode::Grid;
    double default_span = 8.0;
    // Truncation window, in sigma-equivalents, for the narrowed-lognormal
    // variant; drawn uniformly per record. Narrow windows are what make the
    // variant a genuinely different shape at the same nominal scalars.
    std::pair<double, double> jitter_span_range{0.3, 1.0};
};

// Enough to rebuild a record's ensemble bit-for-bit.
struct SamplingInfo {
    SamplingMode mode = SamplingMode::Grid;
    int n = 0;
    double span_sigmas = 0.0;
    std::uint64_t seed = 0;
};

struct PolymerRecord {
    std::int64_t id = 0;
    std::int64_t group_id = 0;
    MwdSpec spec;
    double mn = 0.0;          // realized, from the sampled ensemble
    double dispersity = 0.0;  // realized
    double target_log10_mz = 0.0;
    double target_log10_mz1 = 0.0;
    SamplingInfo sampling;
    std::optional<Embedding> embedding_polyset;
    std::optional<Embedding> embedding_baseline;

    Family family() const { return spec.family; }
};

struct SplitAssignment {
    std::vector<std::int64_t> train;
    std::vector<std::int64_t> val;
    std::vector<std::int64_t> test;
    std::uint64_t seed = 0;
    std::array<double, 3> fractions{0.7, 0.15, 0.15};
};

// Throws std::invalid_argument describing the first violated constraint
// (counts positive, mn range positive and ordered, dispersity range ordered
// with min > 1, spans positive).
void validate_config(const DatasetConfig& cfg);

// Rebuilds the ensemble a record's targets were computed from.
PolySetEnsemble ensemble_for_record(const PolymerRecord& rec);

// Embeddings on demand. The baseline uses the NOMINAL (target) scalars, so
// every record of a group collapses to the same vector; realized values
// stay on the record for analysis.
Embedding record_polyset_embedding(const PolymerRecord& rec, const EncoderConfig& cfg,
                                   const std::string& monomer);
Embedding record_baseline_embedding(const PolymerRecord& rec, const EncoderConfig& cfg,
                                    const std::string& monomer);

// One degeneracy group at fixed nominal scalars: variants cycle through
// (lognormal, Schulz-Zimm, Weibull, narrowed-window lognormal). Record ids
// are group_id * variants_per_group + variant. Pure function of its inputs.
std::vector<PolymerRecord> make_group_records(double mn, double dispersity,
                                              std::int64_t group_id,
                                              const DatasetConfig& cfg);

// Full corpus: n_groups independent (Mn, dispersity) draws, each expanded by
// make_group_records. A group whose draw cannot be fitted (Weibull shape out
// of bracket) is skipped with a diagnostic on stderr and replaced by the
// next draw; the output always holds exactly n_groups groups, ordered by id.
std::vector<PolymerRecord> generate_corpus(const DatasetConfig& cfg);

// Fixed-scalar subset spanning the truncation continuum: n_records / 2
// window spans evenly spaced on [span_lo, span_hi], each realized by the two
// quantile-bracketed families (Schulz-Zimm, Weibull). Deterministic; used
// for manifold diagnostics where one group's four variants are too few.
std::vector<PolymerRecord> make_iso_subset(double mn, double dispersity, int n_records,
                                           int chains_per_ensemble = 512,
                                           double m0 = 100.0, double span_lo = 0.3,
                                           double span_hi = 1.2);

// The config as the JSON object embedded in corpus headers and resolved run
// configs; 17-significant-digit numbers, fixed key order.
std::string dataset_config_to_json(const DatasetConfig& cfg);

// JSON Lines. First line: {"schema":"polyset-corpus","version":1,"config":{..}};
// one record per line after that, embeddings included only when materialized.
// Numbers carry 17 significant digits; read(write(x)) is exact.
void write_records(const std::vector<PolymerRecord>& records, const DatasetConfig& cfg,
                   const std::string& path);

struct CorpusFile {
    DatasetConfig config;
    std::vector<PolymerRecord> records;
};

// Parse errors name the 1-based line; a schema/version mismatch is an error.
// An empty file is a valid empty corpus.
CorpusFile read_records(const std::string& path);

// Groups are shuffled by a seeded permutation and cut at cumulative
// llround(fraction * n_groups); every record of a group lands in one split.
// group_aware = false partitions record ids directly instead (same scheme).
// Fractions must sum to 1 within 1e-9; fewer than 3 units is an error.
SplitAssignment split_records(const std::vector<PolymerRecord>& records,
                              const std::array<double, 3>& fractions, std::uint64_t seed,
                              bool group_aware = true);

// {"train":[..],"val":[..],"test":[..],"seed":..,"fractions":[..]}.
void write_split(const SplitAssignment& split, const std::string& path);
SplitAssignment read_split(const std::string& path);

}  // namespace polyset
