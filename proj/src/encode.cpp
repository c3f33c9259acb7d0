#include "polyset/encode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace polyset {

std::string embedding_kind_name(EmbeddingKind k) {
    switch (k) {
        case EmbeddingKind::PolySet: return "polyset";
        case EmbeddingKind::Baseline: return "baseline";
    }
    throw std::logic_error("embedding_kind_name: unknown kind");
}

EmbeddingKind embedding_kind_from_name(const std::string& name) {
    if (name == "polyset") return EmbeddingKind::PolySet;
    if (name == "baseline") return EmbeddingKind::Baseline;
    throw std::invalid_argument("unknown representation: " + name);
}

int EncoderConfig::monomer_index(const std::string& monomer) const {
    auto it = std::find(monomer_vocab.begin(), monomer_vocab.end(), monomer);
    if (it == monomer_vocab.end()) {
        throw std::invalid_argument("monomer '" + monomer + "' not in vocabulary");
    }
    return static_cast<int>(it - monomer_vocab.begin());
}

namespace {

void check_config(const EncoderConfig& cfg) {
    if (cfg.n_rbf < 2 || !(cfg.center_hi > cfg.center_lo) || !(cfg.bandwidth > 0.0)) {
        throw std::domain_error("invalid encoder config");
    }
}

}  // namespace

Eigen::VectorXd chain_features(const Chain& chain, const std::string& monomer,
                               const EncoderConfig& cfg) {
    check_config(cfg);
    int vocab = static_cast<int>(cfg.monomer_vocab.size());
    int mono = cfg.monomer_index(monomer);

    Eigen::VectorXd f = Eigen::VectorXd::Zero(cfg.chain_feature_dim());
    f[mono] = 1.0;

    double x = std::log10(chain.m);
    double h = cfg.bandwidth * cfg.spacing();
    for (int k = 0; k < cfg.n_rbf; ++k) {
        double c = cfg.center_lo + k * cfg.spacing();
        double z = (x - c) / h;
        f[vocab + k] = std::exp(-0.5 * z * z);
    }
    if (cfg.include_raw_logmass) {
        f[vocab + cfg.n_rbf] = x;
    }
    return f;
}

Embedding polyset_embed(const PolySetEnsemble& e, const std::string& monomer,
                        const EncoderConfig& cfg) {
    check_config(cfg);
    if (e.chains.empty() || e.chains.size() != e.weights.size()) {
        throw std::domain_error("polyset_embed: empty or inconsistent ensemble");
    }
    std::size_t n = e.chains.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (e.chains[a].m != e.chains[b].m) return e.chains[a].m < e.chains[b].m;
        return e.weights[a] < e.weights[b];
    });

    Embedding out;
    out.kind = EmbeddingKind::PolySet;
    out.values = Eigen::VectorXd::Zero(cfg.chain_feature_dim());
    for (std::size_t idx : order) {
        out.values += e.weights[idx] * chain_features(e.chains[idx], monomer, cfg);
    }
    return out;
}

Embedding baseline_embed(const std::string& monomer, double mn, double dispersity,
                         const EncoderConfig& cfg) {
    check_config(cfg);
    if (!(mn > 0.0)) {
        throw std::domain_error("baseline_embed: mn must be > 0");
    }
    if (!(dispersity >= 1.0)) {
        throw std::domain_error("baseline_embed: dispersity must be >= 1");
    }
    int vocab = static_cast<int>(cfg.monomer_vocab.size());
    int mono = cfg.monomer_index(monomer);

    Embedding out;
    out.kind = EmbeddingKind::Baseline;
    out.values = Eigen::VectorXd::Zero(cfg.baseline_dim());
    out.values[mono] = 1.0;
    out.values[vocab] = std::log10(mn);
    out.values[vocab + 1] = dispersity;
    return out;
}

}  // namespace polyset
