#include "polyset/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "polyset/rng.hpp"
#include "polyset/serialization.hpp"

namespace polyset {

void validate_config(const DatasetConfig& cfg) {
    if (cfg.n_groups <= 0) throw std::invalid_argument("config: n_groups must be positive");
    if (cfg.variants_per_group <= 0) {
        throw std::invalid_argument("config: variants_per_group must be positive");
    }
    if (!(cfg.mn_range.first > 0.0) || !(cfg.mn_range.second > cfg.mn_range.first)) {
        throw std::invalid_argument("config: mn_range must satisfy 0 < lo < hi");
    }
    if (!(cfg.dispersity_range.first > 1.0)) {
        throw std::invalid_argument("config: dispersity range min must be > 1");
    }
    if (!(cfg.dispersity_range.second > cfg.dispersity_range.first)) {
        throw std::invalid_argument("config: dispersity_range must satisfy lo < hi");
    }
    if (cfg.chains_per_ensemble < 2) {
        throw std::invalid_argument("config: chains_per_ensemble must be >= 2");
    }
    if (!(cfg.m0 > 0.0)) throw std::invalid_argument("config: m0 must be > 0");
    if (cfg.monomer.empty()) throw std::invalid_argument("config: monomer must be non-empty");
    if (!(cfg.default_span > 0.0)) {
        throw std::invalid_argument("config: default_span must be > 0");
    }
    if (!(cfg.jitter_span_range.first > 0.0) ||
        !(cfg.jitter_span_range.second >= cfg.jitter_span_range.first)) {
        throw std::invalid_argument("config: jitter_span_range must satisfy 0 < lo <= hi");
    }
    if (cfg.sampling_mode != SamplingMode::Grid) {
        // Draws-from-p modes cover the lognormal only; the variant cycle
        // includes gamma and Weibull shapes.
        throw std::invalid_argument(
            "config: corpus generation supports sampling_mode grid only");
    }
}

PolySetEnsemble ensemble_for_record(const PolymerRecord& rec) {
    PolySetEnsemble e;
    switch (rec.sampling.mode) {
        case SamplingMode::Grid:
            e = sample_grid(rec.spec, rec.sampling.n, rec.sampling.span_sigmas);
            break;
        case SamplingMode::Iid:
            e = sample_iid(rec.spec, rec.sampling.n, rec.sampling.seed);
            break;
        case SamplingMode::LiteralEq8:
            e = sample_literal_eq8(rec.spec, rec.sampling.n, rec.sampling.seed);
            break;
        case SamplingMode::PointMass:
            e = point_mass_ensemble(rec.spec);
            break;
    }
    e.seed = rec.sampling.seed;
    return e;
}

Embedding record_polyset_embedding(const PolymerRecord& rec, const EncoderConfig& cfg,
                                   const std::string& monomer) {
    return polyset_embed(ensemble_for_record(rec), monomer, cfg);
}

Embedding record_baseline_embedding(const PolymerRecord& rec, const EncoderConfig& cfg,
                                    const std::string& monomer) {
    return baseline_embed(monomer, rec.spec.target_mn, rec.spec.target_dispersity, cfg);
}

namespace {

PolymerRecord make_record(const MwdSpec& spec, std::int64_t id, std::int64_t group_id,
                          const SamplingInfo& sampling) {
    PolymerRecord rec;
    rec.id = id;
    rec.group_id = group_id;
    rec.spec = spec;
    rec.sampling = sampling;
    MomentSet m = empirical_moments(ensemble_for_record(rec));
    rec.mn = m.mn;
    rec.dispersity = m.dispersity;
    rec.target_log10_mz = std::log10(m.mz);
    rec.target_log10_mz1 = std::log10(m.mz1);
    return rec;
}

}  // namespace

std::vector<PolymerRecord> make_group_records(double mn, double dispersity,
                                              std::int64_t group_id,
                                              const DatasetConfig& cfg) {
    std::vector<PolymerRecord> out;
    out.reserve(cfg.variants_per_group);
    for (int v = 0; v < cfg.variants_per_group; ++v) {
        MwdSpec spec;
        double span = cfg.default_span;
        std::uint64_t seed = mix_seed(cfg.master_seed, static_cast<std::uint64_t>(group_id),
                                      static_cast<std::uint64_t>(v));
        switch (v % 4) {
            case 0: spec = fit_lognormal(mn, dispersity, cfg.m0); break;
            case 1: spec = fit_schulz_zimm(mn, dispersity, cfg.m0); break;
            case 2: spec = fit_weibull(mn, dispersity, cfg.m0); break;
            case 3: {
                spec = fit_lognormal(mn, dispersity, cfg.m0);
                Rng rng(seed);
                span = rng.uniform(cfg.jitter_span_range.first, cfg.jitter_span_range.second);
                break;
            }
        }
        SamplingInfo info;
        info.mode = cfg.sampling_mode;
        info.n = cfg.chains_per_ensemble;
        info.span_sigmas = span;
        info.seed = seed;
        out.push_back(make_record(
            spec, group_id * cfg.variants_per_group + v, group_id, info));
    }
    return out;
}

std::vector<PolymerRecord> generate_corpus(const DatasetConfig& cfg) {
    validate_config(cfg);
    std::vector<PolymerRecord> out;
    out.reserve(static_cast<std::size_t>(cfg.n_groups) * cfg.variants_per_group);

    double ln_lo = std::log(cfg.mn_range.first);
    double ln_hi = std::log(cfg.mn_range.second);

    std::int64_t group = 0;
    std::uint64_t draw = 0;
    while (group < cfg.n_groups) {
        Rng grng(mix_seed(cfg.master_seed, draw));
        ++draw;
        double mn = std::exp(grng.uniform(ln_lo, ln_hi));
        double dispersity = grng.uniform(cfg.dispersity_range.first,
                                         cfg.dispersity_range.second);
        try {
            std::vector<PolymerRecord> recs =
                make_group_records(mn, dispersity, group, cfg);
            out.insert(out.end(), recs.begin(), recs.end());
        } catch (const std::exception& e) {
            std::cerr << "corpus: skipping draw (mn=" << mn << ", dispersity=" << dispersity
                      << "): " << e.what() << "\n";
            continue;
        }
        ++group;
    }
    return out;
}

std::vector<PolymerRecord> make_iso_subset(double mn, double dispersity, int n_records,
                                           int chains_per_ensemble, double m0,
                                           double span_lo, double span_hi) {
    if (n_records < 2 || n_records % 2 != 0) {
        throw std::invalid_argument("make_iso_subset: n_records must be even and >= 2");
    }
    if (!(span_lo > 0.0) || !(span_hi >= span_lo)) {
        throw std::invalid_argument("make_iso_subset: need 0 < span_lo <= span_hi");
    }
    int n_spans = n_records / 2;
    std::vector<PolymerRecord> out;
    out.reserve(n_records);
    for (int i = 0; i < n_records; ++i) {
        double t = (n_spans == 1) ? 0.0
                                  : static_cast<double>(i / 2) / (n_spans - 1);
        double span = span_lo + t * (span_hi - span_lo);
        MwdSpec spec = (i % 2 == 0) ? fit_schulz_zimm(mn, dispersity, m0)
                                    : fit_weibull(mn, dispersity, m0);
        SamplingInfo info;
        info.mode = SamplingMode::Grid;
        info.n = chains_per_ensemble;
        info.span_sigmas = span;
        info.seed = 0;
        out.push_back(make_record(spec, i, 0, info));
    }
    return out;
}

namespace {

std::string embedding_to_json_array(const Embedding& e) {
    std::string out = "[";
    for (int i = 0; i < e.dim(); ++i) {
        if (i) out += ",";
        out += num17(e.values[i]);
    }
    out += "]";
    return out;
}

}  // namespace

std::string dataset_config_to_json(const DatasetConfig& cfg) {
    std::string out = "{";
    out += "\"n_groups\":" + std::to_string(cfg.n_groups) + ",";
    out += "\"variants_per_group\":" + std::to_string(cfg.variants_per_group) + ",";
    out += "\"mn_range\":[" + num17(cfg.mn_range.first) + "," + num17(cfg.mn_range.second) +
           "],";
    out += "\"dispersity_range\":[" + num17(cfg.dispersity_range.first) + "," +
           num17(cfg.dispersity_range.second) + "],";
    out += "\"chains_per_ensemble\":" + std::to_string(cfg.chains_per_ensemble) + ",";
    out += "\"m0\":" + num17(cfg.m0) + ",";
    out += "\"monomer\":\"" + json_escape(cfg.monomer) + "\",";
    out += "\"master_seed\":" + std::to_string(cfg.master_seed) + ",";
    out += "\"sampling_mode\":\"" + sampling_mode_name(cfg.sampling_mode) + "\",";
    out += "\"default_span\":" + num17(cfg.default_span) + ",";
    out += "\"jitter_span_range\":[" + num17(cfg.jitter_span_range.first) + "," +
           num17(cfg.jitter_span_range.second) + "]}";
    return out;
}

namespace {

DatasetConfig config_from_json(const nlohmann::json& j) {
    DatasetConfig cfg;
    cfg.n_groups = j.at("n_groups").get<int>();
    cfg.variants_per_group = j.at("variants_per_group").get<int>();
    cfg.mn_range = {j.at("mn_range").at(0).get<double>(), j.at("mn_range").at(1).get<double>()};
    cfg.dispersity_range = {j.at("dispersity_range").at(0).get<double>(),
                            j.at("dispersity_range").at(1).get<double>()};
    cfg.chains_per_ensemble = j.at("chains_per_ensemble").get<int>();
    cfg.m0 = j.at("m0").get<double>();
    cfg.monomer = j.at("monomer").get<std::string>();
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    cfg.sampling_mode = sampling_mode_from_name(j.at("sampling_mode").get<std::string>());
    cfg.default_span = j.at("default_span").get<double>();
    cfg.jitter_span_range = {j.at("jitter_span_range").at(0).get<double>(),
                             j.at("jitter_span_range").at(1).get<double>()};
    return cfg;
}

std::string record_to_json(const PolymerRecord& r) {
    std::string out = "{";
    out += "\"id\":" + std::to_string(r.id) + ",";
    out += "\"group_id\":" + std::to_string(r.group_id) + ",";
    out += "\"family\":\"" + family_name(r.family()) + "\",";
    out += "\"spec\":" + mwd_spec_to_json(r.spec) + ",";
    out += "\"mn\":" + num17(r.mn) + ",";
    out += "\"dispersity\":" + num17(r.dispersity) + ",";
    out += "\"target_log10_mz\":" + num17(r.target_log10_mz) + ",";
    out += "\"target_log10_mz1\":" + num17(r.target_log10_mz1) + ",";
    out += "\"sampling\":{\"mode\":\"" + sampling_mode_name(r.sampling.mode) + "\",";
    out += "\"n\":" + std::to_string(r.sampling.n) + ",";
    out += "\"span_sigmas\":" + num17(r.sampling.span_sigmas) + ",";
    out += "\"seed\":" + std::to_string(r.sampling.seed) + "}";
    if (r.embedding_polyset) {
        out += ",\"embedding_polyset\":" + embedding_to_json_array(*r.embedding_polyset);
    }
    if (r.embedding_baseline) {
        out += ",\"embedding_baseline\":" + embedding_to_json_array(*r.embedding_baseline);
    }
    out += "}";
    return out;
}

PolymerRecord record_from_json(const nlohmann::json& j) {
    PolymerRecord r;
    r.id = j.at("id").get<std::int64_t>();
    r.group_id = j.at("group_id").get<std::int64_t>();
    r.spec = mwd_spec_from_json(j.at("spec").dump());
    if (family_from_name(j.at("family").get<std::string>()) != r.spec.family) {
        throw std::runtime_error("record family disagrees with its spec");
    }
    r.mn = j.at("mn").get<double>();
    r.dispersity = j.at("dispersity").get<double>();
    r.target_log10_mz = j.at("target_log10_mz").get<double>();
    r.target_log10_mz1 = j.at("target_log10_mz1").get<double>();
    const auto& s = j.at("sampling");
    r.sampling.mode = sampling_mode_from_name(s.at("mode").get<std::string>());
    r.sampling.n = s.at("n").get<int>();
    r.sampling.span_sigmas = s.at("span_sigmas").get<double>();
    r.sampling.seed = s.at("seed").get<std::uint64_t>();
    auto read_embedding = [&](const char* key, EmbeddingKind kind) {
        std::optional<Embedding> out;
        if (j.contains(key)) {
            Embedding e;
            e.kind = kind;
            const auto& arr = j.at(key);
            e.values.resize(static_cast<int>(arr.size()));
            for (int i = 0; i < e.values.size(); ++i) e.values[i] = arr.at(i).get<double>();
            out = std::move(e);
        }
        return out;
    };
    r.embedding_polyset = read_embedding("embedding_polyset", EmbeddingKind::PolySet);
    r.embedding_baseline = read_embedding("embedding_baseline", EmbeddingKind::Baseline);
    return r;
}

}  // namespace

void write_records(const std::vector<PolymerRecord>& records, const DatasetConfig& cfg,
                   const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "{\"schema\":\"polyset-corpus\",\"version\":1,\"config\":" << dataset_config_to_json(cfg)
      << "}\n";
    for (const PolymerRecord& r : records) f << record_to_json(r) << "\n";
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + path);
}

CorpusFile read_records(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    CorpusFile out;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": parse error: " + e.what());
        }
        try {
            if (!have_header) {
                if (j.value("schema", std::string()) != "polyset-corpus") {
                    throw std::runtime_error("missing polyset-corpus header");
                }
                if (j.at("version").get<int>() != 1) {
                    throw std::runtime_error("unsupported corpus version " +
                                             j.at("version").dump());
                }
                out.config = config_from_json(j.at("config"));
                have_header = true;
            } else {
                out.records.push_back(record_from_json(j));
            }
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": " +
                                     e.what());
        }
    }
    return out;
}

SplitAssignment split_records(const std::vector<PolymerRecord>& records,
                              const std::array<double, 3>& fractions, std::uint64_t seed,
                              bool group_aware) {
    double total = fractions[0] + fractions[1] + fractions[2];
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("split fractions must sum to 1");
    }
    for (double x : fractions) {
        if (!(x >= 0.0)) throw std::invalid_argument("split fractions must be >= 0");
    }

    // Units are group ids (or record ids); sorted first so the permutation
    // depends only on the seed and the set of units, not input order.
    std::set<std::int64_t> unit_set;
    for (const PolymerRecord& r : records) {
        unit_set.insert(group_aware ? r.group_id : r.id);
    }
    std::vector<std::int64_t> units(unit_set.begin(), unit_set.end());
    if (units.size() < 3) {
        throw std::invalid_argument("split needs at least 3 " +
                                    std::string(group_aware ? "groups" : "records"));
    }

    Rng rng(seed);
    rng.shuffle(units);

    auto n = static_cast<double>(units.size());
    std::size_t cut1 = static_cast<std::size_t>(std::llround(fractions[0] * n));
    std::size_t cut2 =
        static_cast<std::size_t>(std::llround((fractions[0] + fractions[1]) * n));
    cut1 = std::min(cut1, units.size());
    cut2 = std::min(std::max(cut2, cut1), units.size());

    std::set<std::int64_t> train_units(units.begin(), units.begin() + cut1);
    std::set<std::int64_t> val_units(units.begin() + cut1, units.begin() + cut2);

    SplitAssignment out;
    out.seed = seed;
    out.fractions = fractions;
    for (const PolymerRecord& r : records) {
        std::int64_t unit = group_aware ? r.group_id : r.id;
        if (train_units.count(unit)) {
            out.train.push_back(r.id);
        } else if (val_units.count(unit)) {
            out.val.push_back(r.id);
        } else {
            out.test.push_back(r.id);
        }
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.val.begin(), out.val.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

void write_split(const SplitAssignment& split, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    auto ids = [](const std::vector<std::int64_t>& v) {
        std::string out = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(v[i]);
        }
        return out + "]";
    };
    f << "{\"train\":" << ids(split.train) << ",\"val\":" << ids(split.val)
      << ",\"test\":" << ids(split.test) << ",\"seed\":" << split.seed << ",\"fractions\":["
      << num17(split.fractions[0]) << "," << num17(split.fractions[1]) << ","
      << num17(split.fractions[2]) << "]}\n";
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + path);
}

SplitAssignment read_split(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    nlohmann::json j = nlohmann::json::parse(ss.str());
    SplitAssignment out;
    out.train = j.at("train").get<std::vector<std::int64_t>>();
    out.val = j.at("val").get<std::vector<std::int64_t>>();
    out.test = j.at("test").get<std::vector<std::int64_t>>();
    out.seed = j.at("seed").get<std::uint64_t>();
    auto fr = j.at("fractions");
    out.fractions = {fr.at(0).get<double>(), fr.at(1).get<double>(), fr.at(2).get<double>()};
    return out;
}

}  // namespace polyset
