#pragma once

// Chain featurization and the two polymer representations: the
// distribution-aware embedding F_P = sum_i w_i f(S_i) over a weighted chain
// ensemble, and the conventional baseline (repeat unit + scalar Mn,
// dispersity) that cannot distinguish distributions sharing those scalars.

#include <string>
#include <vector>

#include <Eigen/Core>

#include "polyset/ensemble.hpp"

namespace polyset {

struct EncoderConfig {
    int n_rbf = 32;
    double center_lo = 3.0;   // log10 g/mol
    double center_hi = 7.5;
    double bandwidth = 1.0;   // in units of center spacing
    std::vector<std::string> monomer_vocab = {"A", "B", "C", "D"};
    bool include_raw_logmass = true;

    double spacing() const { return (center_hi - center_lo) / (n_rbf - 1); }
    int chain_feature_dim() const {
        return static_cast<int>(monomer_vocab.size()) + n_rbf +
               (include_raw_logmass ? 1 : 0);
    }
    int baseline_dim() const { return static_cast<int>(monomer_vocab.size()) + 2; }
    // Index of monomer in the vocabulary; throws on unknown monomer.
    int monomer_index(const std::string& monomer) const;
};

enum class EmbeddingKind { PolySet, Baseline };

std::string embedding_kind_name(EmbeddingKind k);
EmbeddingKind embedding_kind_from_name(const std::string& name);

struct Embedding {
    Eigen::VectorXd values;
    EmbeddingKind kind = EmbeddingKind::PolySet;

    int dim() const { return static_cast<int>(values.size()); }
};

// f(S_i): one-hot monomer block, then Gaussian RBF activations
// exp(-(x - c_k)^2 / (2 h^2)) on x = log10(m) with centers equally spaced on
// [center_lo, center_hi] and h = bandwidth * spacing, then (optionally) x
// itself. Deterministic; no learned parameters.
Eigen::VectorXd chain_features(const Chain& chain, const std::string& monomer,
                               const EncoderConfig& cfg);

// F_P = sum_i w_i f(S_i). Pairs are accumulated in (mass, weight) order so
// the result is bit-stable under permutation of the input.
Embedding polyset_embed(const PolySetEnsemble& e, const std::string& monomer,
                        const EncoderConfig& cfg);

// One-hot monomer block followed by [log10(mn), dispersity]. A pure function
// of (monomer, mn, dispersity): distributions sharing those scalars collapse
// to bit-identical embeddings.
Embedding baseline_embed(const std::string& monomer, double mn, double dispersity,
                         const EncoderConfig& cfg);

}  // namespace polyset
