// Command-line front end for the polyset pipeline: corpus generation,
// moment spot checks, embedding export, regression runs, PCA diagnostics,
// and the degeneracy report. Every command writes resolved_config.json next
// to its outputs so a run is reproducible from the artifacts alone; nothing
// here emits timestamps, so identical invocations give identical bytes.
//
// Values in a --config JSON file fill in flags the command line left at
// their defaults; explicit flags always win.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyset/analyze.hpp"
#include "polyset/dataset.hpp"
#include "polyset/encode.hpp"
#include "polyset/ensemble.hpp"
#include "polyset/learn.hpp"
#include "polyset/mwd.hpp"
#include "polyset/serialization.hpp"
#include "polyset/svg.hpp"

using namespace polyset;
namespace fs = std::filesystem;

namespace {

// Count-like flags are parsed as doubles so 1e4 works on the command line;
// they must still be exact integers.
std::int64_t to_count(double v, const std::string& what) {
    if (!std::isfinite(v) || v != std::floor(v) || std::fabs(v) > 9.0e15) {
        throw std::runtime_error(what + " must be an integer (got " +
                                 std::to_string(v) + ")");
    }
    return static_cast<std::int64_t>(std::llround(v));
}

nlohmann::json load_config(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config file " + path + ": " + e.what());
    }
    if (!j.is_object()) {
        throw std::runtime_error("config file must hold a JSON object: " + path);
    }
    return j;
}

// cfg[key] -> value unless the flag was given on the command line.
template <typename T>
void cfg_get(const nlohmann::json& cfg, const char* key, const CLI::App& cmd,
             const std::string& flag, T& value) {
    if (!cfg.contains(key)) return;
    if (cmd.get_option(flag)->count() > 0) return;
    try {
        value = cfg.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("config key ") + key + ": " + e.what());
    }
}

bool flag_or_key(const nlohmann::json& cfg, const char* key, const CLI::App& cmd,
                 const std::string& flag) {
    return cmd.get_option(flag)->count() > 0 || cfg.contains(key);
}

std::string bool_json(bool b) { return b ? "true" : "false"; }

std::string json_str(const std::string& s) { return "\"" + json_escape(s) + "\""; }

std::string encoder_to_json(const EncoderConfig& e) {
    std::string out = "{";
    out += "\"n_rbf\":" + std::to_string(e.n_rbf) + ",";
    out += "\"center_lo\":" + num17(e.center_lo) + ",";
    out += "\"center_hi\":" + num17(e.center_hi) + ",";
    out += "\"bandwidth\":" + num17(e.bandwidth) + ",";
    out += "\"monomer_vocab\":[";
    for (std::size_t i = 0; i < e.monomer_vocab.size(); ++i) {
        if (i) out += ",";
        out += json_str(e.monomer_vocab[i]);
    }
    out += "],";
    out += "\"include_raw_logmass\":" + bool_json(e.include_raw_logmass) + "}";
    return out;
}

std::string train_config_to_json(const TrainConfig& t) {
    std::string out = "{";
    out += "\"learning_rate\":" + num17(t.learning_rate) + ",";
    out += "\"beta1\":" + num17(t.beta1) + ",";
    out += "\"beta2\":" + num17(t.beta2) + ",";
    out += "\"epsilon\":" + num17(t.epsilon) + ",";
    out += "\"batch_size\":" + std::to_string(t.batch_size) + ",";
    out += "\"max_epochs\":" + std::to_string(t.max_epochs) + ",";
    out += "\"patience\":" + std::to_string(t.patience) + ",";
    out += "\"seed\":" + std::to_string(t.seed) + ",";
    out += "\"hidden_dims\":[";
    for (std::size_t i = 0; i < t.hidden_dims.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(t.hidden_dims[i]);
    }
    out += "],";
    out += "\"target\":" + json_str(target_name(t.target)) + "}";
    return out;
}

void write_resolved_config(const std::string& out_dir, const std::string& body) {
    write_text_file(out_dir + "/resolved_config.json", body + "\n");
}

std::string embedding_values_json(const Embedding& e) {
    std::string out = "[";
    for (int i = 0; i < e.dim(); ++i) {
        if (i) out += ",";
        out += num17(e.values[i]);
    }
    out += "]";
    return out;
}

// Equal-width histogram over [min, max] of the data; a zero-width range
// collapses into the single first bin.
std::string histogram_csv(const std::vector<double>& v, int bins) {
    std::string out = "bin_lo,bin_hi,count\n";
    if (v.empty()) return out;
    double lo = *std::min_element(v.begin(), v.end());
    double hi = *std::max_element(v.begin(), v.end());
    double width = (hi - lo) / bins;
    std::vector<std::int64_t> count(bins, 0);
    for (double x : v) {
        int i = width > 0.0 ? static_cast<int>((x - lo) / width) : 0;
        i = std::min(std::max(i, 0), bins - 1);
        ++count[i];
    }
    for (int i = 0; i < bins; ++i) {
        out += csv_line({num17(lo + i * width), num17(lo + (i + 1) * width),
                         std::to_string(count[i])});
    }
    return out;
}

// ---------------------------------------------------------------- commands

struct GenArgs {
    double records = 0.0;  // 0 = derive from groups
    double groups = 2500.0;
    double variants = 4.0;
    double mn_lo = 1e4, mn_hi = 1e6;
    double disp_lo = 1.5, disp_hi = 4.0;
    double chains = 512.0;
    double m0 = 100.0;
    std::string monomer = "A";
    double span = 8.0;
    double jitter_lo = 0.3, jitter_hi = 1.0;
};

int run_gen_dataset(const GenArgs& a, std::uint64_t master_seed,
                    const std::string& out_dir) {
    DatasetConfig cfg;
    cfg.variants_per_group = static_cast<int>(to_count(a.variants, "--variants"));
    if (a.records > 0.0) {
        std::int64_t records = to_count(a.records, "--records");
        if (cfg.variants_per_group <= 0 || records % cfg.variants_per_group != 0) {
            throw std::runtime_error("--records must be a multiple of --variants (" +
                                     std::to_string(records) + " vs " +
                                     std::to_string(cfg.variants_per_group) + ")");
        }
        cfg.n_groups = static_cast<int>(records / cfg.variants_per_group);
    } else {
        cfg.n_groups = static_cast<int>(to_count(a.groups, "--groups"));
    }
    cfg.mn_range = {a.mn_lo, a.mn_hi};
    cfg.dispersity_range = {a.disp_lo, a.disp_hi};
    cfg.chains_per_ensemble = static_cast<int>(to_count(a.chains, "--chains"));
    cfg.m0 = a.m0;
    cfg.monomer = a.monomer;
    cfg.master_seed = master_seed;
    cfg.default_span = a.span;
    cfg.jitter_span_range = {a.jitter_lo, a.jitter_hi};
    validate_config(cfg);

    std::vector<PolymerRecord> records = generate_corpus(cfg);
    write_records(records, cfg, out_dir + "/corpus.jsonl");

    std::vector<double> log_mn, disp;
    log_mn.reserve(records.size());
    disp.reserve(records.size());
    for (const PolymerRecord& r : records) {
        log_mn.push_back(std::log10(r.mn));
        disp.push_back(r.dispersity);
    }
    write_text_file(out_dir + "/fig2a_mn_hist.csv", histogram_csv(log_mn, 40));
    write_text_file(out_dir + "/fig2b_disp_hist.csv", histogram_csv(disp, 40));

    // Nominal coverage of the draw rectangle, one count per group.
    const int nb = 10;
    double xlo = std::log10(cfg.mn_range.first), xhi = std::log10(cfg.mn_range.second);
    double ylo = cfg.dispersity_range.first, yhi = cfg.dispersity_range.second;
    double xw = (xhi - xlo) / nb, yw = (yhi - ylo) / nb;
    std::vector<std::int64_t> grid(nb * nb, 0);
    std::int64_t last_group = -1;
    for (const PolymerRecord& r : records) {
        if (r.group_id == last_group) continue;
        last_group = r.group_id;
        int ix = xw > 0.0 ? static_cast<int>((std::log10(r.spec.target_mn) - xlo) / xw) : 0;
        int iy = yw > 0.0 ? static_cast<int>((r.spec.target_dispersity - ylo) / yw) : 0;
        ix = std::min(std::max(ix, 0), nb - 1);
        iy = std::min(std::max(iy, 0), nb - 1);
        ++grid[ix * nb + iy];
    }
    std::string grid_csv =
        "mn_bin,disp_bin,log10_mn_lo,log10_mn_hi,dispersity_lo,dispersity_hi,count\n";
    for (int ix = 0; ix < nb; ++ix) {
        for (int iy = 0; iy < nb; ++iy) {
            grid_csv += csv_line({std::to_string(ix), std::to_string(iy),
                                  num17(xlo + ix * xw), num17(xlo + (ix + 1) * xw),
                                  num17(ylo + iy * yw), num17(ylo + (iy + 1) * yw),
                                  std::to_string(grid[ix * nb + iy])});
        }
    }
    write_text_file(out_dir + "/fig2c_grid_counts.csv", grid_csv);

    std::string scatter_csv =
        "id,group_id,family,log10_target_mn,target_dispersity,log10_mn_realized,"
        "dispersity_realized,target_log10_mz,target_log10_mz1\n";
    for (const PolymerRecord& r : records) {
        scatter_csv += csv_line(
            {std::to_string(r.id), std::to_string(r.group_id), family_name(r.family()),
             num17(std::log10(r.spec.target_mn)), num17(r.spec.target_dispersity),
             num17(std::log10(r.mn)), num17(r.dispersity), num17(r.target_log10_mz),
             num17(r.target_log10_mz1)});
    }
    write_text_file(out_dir + "/fig2d_mz1_scatter.csv", scatter_csv);

    write_resolved_config(out_dir, "{\"command\":\"gen-dataset\",\"out_dir\":" +
                                       json_str(out_dir) +
                                       ",\"dataset\":" + dataset_config_to_json(cfg) + "}");
    std::cout << "wrote " << records.size() << " records in " << cfg.n_groups
              << " groups to " << out_dir << "/corpus.jsonl\n";
    return 0;
}

struct MomentsArgs {
    std::string family = "lognormal";
    double mn = 0.0;
    double disp = 0.0;
    double n = 2048.0;
    double span = 8.0;
    double m0 = 100.0;
};

int run_moments(const MomentsArgs& a, const std::string& out_dir) {
    MwdSpec spec = fit_family(family_from_name(a.family), a.mn, a.disp, a.m0);
    int n = static_cast<int>(to_count(a.n, "--n"));
    PolySetEnsemble ens = spec.is_point_mass() ? point_mass_ensemble(spec)
                                               : sample_grid(spec, n, a.span);
    MomentSet ana = analytic_moments(spec);
    MomentSet emp = empirical_moments(ens);

    auto row = [](const char* name, double va, double ve) {
        double rel = va != 0.0 ? std::fabs(ve - va) / std::fabs(va)
                               : std::fabs(ve - va);
        std::printf("%-11s %-26s %-26s %s\n", name, num17(va).c_str(),
                    num17(ve).c_str(), num17(rel).c_str());
    };
    std::printf("family: %s, chains: %zu\n", family_name(spec.family).c_str(),
                ens.size());
    std::printf("%-11s %-26s %-26s %s\n", "quantity", "analytic", "empirical",
                "rel_error");
    row("mn", ana.mn, emp.mn);
    row("mw", ana.mw, emp.mw);
    row("dispersity", ana.dispersity, emp.dispersity);
    row("mz", ana.mz, emp.mz);
    row("mz1", ana.mz1, emp.mz1);

    write_resolved_config(
        out_dir, "{\"command\":\"moments\",\"out_dir\":" + json_str(out_dir) +
                     ",\"family\":" + json_str(family_name(spec.family)) +
                     ",\"mn\":" + num17(a.mn) + ",\"dispersity\":" + num17(a.disp) +
                     ",\"n\":" + std::to_string(n) + ",\"span_sigmas\":" + num17(a.span) +
                     ",\"m0\":" + num17(a.m0) + "}");
    return 0;
}

struct EmbedArgs {
    std::string corpus;
    std::string repr = "polyset";
    double rbf = 32.0;
    double center_lo = 3.0, center_hi = 7.5;
    double bandwidth = 1.0;
    bool no_raw = false;
};

int run_embed(const EmbedArgs& a, const std::string& out_dir) {
    if (a.repr != "polyset" && a.repr != "baseline" && a.repr != "both") {
        throw std::runtime_error("--repr must be polyset, baseline, or both (got " +
                                 a.repr + ")");
    }
    EncoderConfig enc;
    enc.n_rbf = static_cast<int>(to_count(a.rbf, "--rbf"));
    enc.center_lo = a.center_lo;
    enc.center_hi = a.center_hi;
    enc.bandwidth = a.bandwidth;
    enc.include_raw_logmass = !a.no_raw;
    if (enc.n_rbf < 2) throw std::runtime_error("--rbf must be at least 2");

    CorpusFile corpus = read_records(a.corpus);
    bool want_polyset = a.repr != "baseline";
    bool want_baseline = a.repr != "polyset";

    std::string out = "{\"schema\":\"polyset-embeddings\",\"version\":1,\"config\":" +
                      encoder_to_json(enc) + ",\"representation\":" + json_str(a.repr) +
                      "}\n";
    for (const PolymerRecord& r : corpus.records) {
        out += "{\"id\":" + std::to_string(r.id);
        if (want_polyset) {
            Embedding e = record_polyset_embedding(r, enc, corpus.config.monomer);
            out += ",\"polyset\":" + embedding_values_json(e);
        }
        if (want_baseline) {
            Embedding e = record_baseline_embedding(r, enc, corpus.config.monomer);
            out += ",\"baseline\":" + embedding_values_json(e);
        }
        out += "}\n";
    }
    write_text_file(out_dir + "/embeddings.jsonl", out);

    write_resolved_config(out_dir,
                          "{\"command\":\"embed\",\"out_dir\":" + json_str(out_dir) +
                              ",\"corpus\":" + json_str(a.corpus) + ",\"representation\":" +
                              json_str(a.repr) + ",\"encoder\":" + encoder_to_json(enc) + "}");
    std::cout << "wrote " << corpus.records.size() << " embedding rows to " << out_dir
              << "/embeddings.jsonl\n";
    return 0;
}

struct TrainArgs {
    std::string corpus;
    std::string repr = "polyset";
    std::string target = "mz1";
    double split_seed = 1.0;
    double epochs = 500.0;
    double batch = 64.0;
    double lr = 1e-3;
    double patience = 25.0;
    std::vector<double> hidden{64.0, 64.0};
    bool record_split = false;
    std::array<double, 3> fractions{0.7, 0.15, 0.15};
    std::uint64_t train_seed = 1;
};

void write_curve_outputs(const TrainReport& rep, const std::string& out_dir) {
    write_learning_curve_csv(rep, out_dir + "/learning_curve.csv");
    SvgSeries train_s, val_s;
    train_s.label = "train";
    train_s.color = "#1f77b4";
    val_s.label = "val";
    val_s.color = "#d62728";
    for (std::size_t i = 0; i < rep.train_mse.size(); ++i) {
        train_s.x.push_back(static_cast<double>(i + 1));
        train_s.y.push_back(std::log10(std::max(rep.train_mse[i], 1e-300)));
    }
    for (std::size_t i = 0; i < rep.val_mse.size(); ++i) {
        val_s.x.push_back(static_cast<double>(i + 1));
        val_s.y.push_back(std::log10(std::max(rep.val_mse[i], 1e-300)));
    }
    write_text_file(out_dir + "/learning_curve.svg",
                    svg_line_chart({train_s, val_s}, "learning curve", "epoch",
                                   "log10 mse (standardized)"));
}

int run_train_eval(const TrainArgs& a, const std::string& out_dir) {
    EmbeddingKind kind = embedding_kind_from_name(a.repr);
    TrainConfig tc;
    tc.learning_rate = a.lr;
    tc.batch_size = static_cast<int>(to_count(a.batch, "--batch"));
    tc.max_epochs = static_cast<int>(to_count(a.epochs, "--epochs"));
    tc.patience = static_cast<int>(to_count(a.patience, "--patience"));
    tc.seed = a.train_seed;
    tc.target = target_from_name(a.target);
    tc.hidden_dims.clear();
    for (double h : a.hidden) {
        tc.hidden_dims.push_back(static_cast<int>(to_count(h, "--hidden")));
    }
    validate_config(tc);

    CorpusFile corpus = read_records(a.corpus);
    std::uint64_t split_seed = static_cast<std::uint64_t>(
        to_count(a.split_seed, "--split-seed"));
    SplitAssignment split =
        split_records(corpus.records, a.fractions, split_seed, !a.record_split);
    write_split(split, out_dir + "/split.json");

    EncoderConfig enc;
    TrainOutcome out;
    try {
        out = train(corpus.records, kind, split, enc, tc, corpus.config.monomer);
    } catch (const TrainingDivergence& e) {
        write_curve_outputs(e.partial, out_dir);
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    const TrainReport& rep = out.report;
    write_curve_outputs(rep, out_dir);

    std::string parity = "id,y_log10,yhat_log10\n";
    std::string smape_csv = "id,smape_percent\n";
    for (std::size_t i = 0; i < rep.test_ids.size(); ++i) {
        parity += csv_line({std::to_string(rep.test_ids[i]), num17(rep.test_y_log10[i]),
                            num17(rep.test_pred_log10[i])});
        double y = std::pow(10.0, rep.test_y_log10[i]);
        double p = std::pow(10.0, rep.test_pred_log10[i]);
        double s = (y + p) > 0.0 ? 200.0 * std::fabs(y - p) / (y + p) : 0.0;
        smape_csv += csv_line({std::to_string(rep.test_ids[i]), num17(s)});
    }
    write_text_file(out_dir + "/parity.csv", parity);
    write_text_file(out_dir + "/smape_dist.csv", smape_csv);
    write_text_file(out_dir + "/parity.svg",
                    svg_scatter(rep.test_y_log10, rep.test_pred_log10, {}, "test parity",
                                "log10 " + a.target + " (true)",
                                "log10 " + a.target + " (predicted)", true));

    write_text_file(
        out_dir + "/metrics.json",
        "{\"representation\":" + json_str(embedding_kind_name(kind)) +
            ",\"target\":" + json_str(target_name(tc.target)) +
            ",\"r2\":" + num17(rep.test_r2) + ",\"smape_percent\":" +
            num17(rep.test_smape) + ",\"log_smape_percent\":" +
            num17(rep.test_log_smape) + ",\"best_epoch\":" +
            std::to_string(rep.best_epoch) + ",\"epochs_run\":" +
            std::to_string(rep.epochs_run) + ",\"n_train\":" +
            std::to_string(split.train.size()) + ",\"n_val\":" +
            std::to_string(split.val.size()) + ",\"n_test\":" +
            std::to_string(split.test.size()) + "}\n");
    write_checkpoint(out.model, out.standardizer, tc, out_dir + "/model.json");

    write_resolved_config(
        out_dir,
        "{\"command\":\"train-eval\",\"out_dir\":" + json_str(out_dir) + ",\"corpus\":" +
            json_str(a.corpus) + ",\"representation\":" +
            json_str(embedding_kind_name(kind)) + ",\"target\":" +
            json_str(target_name(tc.target)) + ",\"split_seed\":" +
            std::to_string(split_seed) + ",\"group_aware\":" +
            bool_json(!a.record_split) + ",\"fractions\":[" + num17(a.fractions[0]) +
            "," + num17(a.fractions[1]) + "," + num17(a.fractions[2]) +
            "],\"encoder\":" + encoder_to_json(enc) +
            ",\"train\":" + train_config_to_json(tc) + "}");

    std::cout << embedding_kind_name(kind) << " " << target_name(tc.target)
              << ": test r2 " << num17(rep.test_r2) << ", smape "
              << num17(rep.test_smape) << "%, best epoch " << rep.best_epoch << "/"
              << rep.epochs_run << "\n";
    return 0;
}

struct PcaArgs {
    double mn = std::numeric_limits<double>::quiet_NaN();
    double disp = std::numeric_limits<double>::quiet_NaN();
    double count = 40.0;
    double chains = 512.0;
    double m0 = 100.0;
    double span_lo = 0.3, span_hi = 1.2;
    std::string monomer = "A";
    std::string corpus;
    double group_id = -1.0;
    std::string repr = "polyset";
};

int run_pca(const PcaArgs& a, const std::string& out_dir) {
    bool iso_mode = !std::isnan(a.mn) || !std::isnan(a.disp);
    if (iso_mode && !a.corpus.empty()) {
        throw std::runtime_error("choose one selector: --mn/--disp or --corpus");
    }
    if (iso_mode && (std::isnan(a.mn) || std::isnan(a.disp))) {
        throw std::runtime_error("--mn and --disp must be given together");
    }
    if (!iso_mode && a.corpus.empty()) {
        throw std::runtime_error("need a selector: --mn/--disp or --corpus with --group-id");
    }

    EmbeddingKind kind = embedding_kind_from_name(a.repr);
    EncoderConfig enc;
    std::vector<PolymerRecord> records;
    std::string monomer;
    std::string selector_json;
    if (iso_mode) {
        int count = static_cast<int>(to_count(a.count, "--count"));
        int chains = static_cast<int>(to_count(a.chains, "--chains"));
        records = make_iso_subset(a.mn, a.disp, count, chains, a.m0, a.span_lo, a.span_hi);
        monomer = a.monomer;
        selector_json = "{\"mode\":\"iso\",\"mn\":" + num17(a.mn) + ",\"dispersity\":" +
                        num17(a.disp) + ",\"count\":" + std::to_string(count) +
                        ",\"chains\":" + std::to_string(chains) + ",\"m0\":" +
                        num17(a.m0) + ",\"span_lo\":" + num17(a.span_lo) +
                        ",\"span_hi\":" + num17(a.span_hi) + ",\"monomer\":" +
                        json_str(monomer) + "}";
    } else {
        std::int64_t gid = to_count(a.group_id, "--group-id");
        if (gid < 0) throw std::runtime_error("--group-id is required with --corpus");
        CorpusFile corpus = read_records(a.corpus);
        for (const PolymerRecord& r : corpus.records) {
            if (r.group_id == gid) records.push_back(r);
        }
        if (records.empty()) {
            throw std::runtime_error("no records with group_id " + std::to_string(gid) +
                                     " in " + a.corpus);
        }
        monomer = corpus.config.monomer;
        selector_json = "{\"mode\":\"corpus\",\"corpus\":" + json_str(a.corpus) +
                        ",\"group_id\":" + std::to_string(gid) + "}";
    }

    IsoCheckResult res = iso_subset_manifold_check(records, enc, monomer, kind);

    std::string proj_csv = "id,family,span_sigmas,pc1,pc2,target_log10_mz1\n";
    std::vector<double> pc1(records.size(), 0.0), pc2(records.size(), 0.0), col;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!res.degenerate) {
            pc1[i] = res.projections(static_cast<int>(i), 0);
            pc2[i] = res.projections(static_cast<int>(i), 1);
        }
        col.push_back(records[i].target_log10_mz1);
        proj_csv += csv_line({std::to_string(records[i].id),
                              family_name(records[i].family()),
                              num17(records[i].sampling.span_sigmas), num17(pc1[i]),
                              num17(pc2[i]), num17(records[i].target_log10_mz1)});
    }
    write_text_file(out_dir + "/pca_projections.csv", proj_csv);
    write_text_file(out_dir + "/pca_scatter.svg",
                    svg_scatter(pc1, pc2, col, "principal components (color: log10 mz1)",
                                "pc1", "pc2"));
    write_text_file(out_dir + "/pca_summary.json",
                    "{\"spearman_pc_vs_logmz1\":" + num17(res.spearman_pc_vs_logmz1) +
                        ",\"degenerate\":" + bool_json(res.degenerate) +
                        ",\"low_diversity\":" + bool_json(res.low_diversity) +
                        ",\"n_records\":" + std::to_string(res.n_records) +
                        ",\"n_families\":" + std::to_string(res.n_families) +
                        ",\"n_spans\":" + std::to_string(res.n_spans) +
                        ",\"representation\":" + json_str(embedding_kind_name(kind)) +
                        "}\n");
    write_resolved_config(out_dir,
                          "{\"command\":\"pca\",\"out_dir\":" + json_str(out_dir) +
                              ",\"representation\":" + json_str(embedding_kind_name(kind)) +
                              ",\"selector\":" + selector_json +
                              ",\"encoder\":" + encoder_to_json(enc) + "}");

    if (res.degenerate) {
        std::cout << "degenerate embeddings: no variance across the subset; "
                     "projections written as zeros\n";
    } else {
        std::cout << "spearman(best pc, log10 mz1) = "
                  << num17(res.spearman_pc_vs_logmz1) << " over " << res.n_records
                  << " records\n";
    }
    return 0;
}

int run_degeneracy(const std::string& corpus_path, const std::string& out_dir) {
    CorpusFile corpus = read_records(corpus_path);
    DegeneracyReport rep = degeneracy_report(corpus.records);

    std::string csv =
        "group_id,target_mn,target_dispersity,count,min_log10_mz1,max_log10_mz1,"
        "std_log10_mz1,min_log10_mz,max_log10_mz,std_log10_mz\n";
    double high_disp_sum = 0.0;
    std::int64_t high_disp_n = 0;
    for (const GroupStats& g : rep.groups) {
        csv += csv_line({std::to_string(g.group_id), num17(g.target_mn),
                         num17(g.target_dispersity), std::to_string(g.count),
                         num17(g.min_log10_mz1), num17(g.max_log10_mz1),
                         num17(g.std_log10_mz1), num17(g.min_log10_mz),
                         num17(g.max_log10_mz), num17(g.std_log10_mz)});
        if (g.target_dispersity >= 2.5) {
            high_disp_sum += g.std_log10_mz1;
            ++high_disp_n;
        }
    }
    write_text_file(out_dir + "/degeneracy_report.csv", csv);
    write_text_file(
        out_dir + "/degeneracy_summary.json",
        "{\"n_groups\":" + std::to_string(rep.groups.size()) + ",\"n_records\":" +
            std::to_string(corpus.records.size()) +
            ",\"mean_within_group_std_log10_mz1\":" + num17(rep.mean_within_group_std_mz1) +
            ",\"mean_within_group_std_log10_mz\":" + num17(rep.mean_within_group_std_mz) +
            ",\"mean_std_log10_mz1_dispersity_ge_2p5\":" +
            num17(high_disp_n > 0 ? high_disp_sum / high_disp_n : 0.0) + "}\n");
    write_resolved_config(out_dir, "{\"command\":\"degeneracy-report\",\"out_dir\":" +
                                       json_str(out_dir) + ",\"corpus\":" +
                                       json_str(corpus_path) + "}");
    std::cout << rep.groups.size() << " groups, mean within-group std of log10 mz1 = "
              << num17(rep.mean_within_group_std_mz1) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distribution-aware polymer representation pipeline"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string config_path;
    std::string out_dir = ".";
    app.add_option("--seed", seed, "master seed (gen-dataset) or training seed");
    app.add_option("--config", config_path, "JSON file supplying unset flags");
    app.add_option("--out-dir", out_dir, "directory for all outputs");

    GenArgs ga;
    CLI::App* gen = app.add_subcommand("gen-dataset", "generate the synthetic corpus");
    gen->fallthrough();
    CLI::Option* gen_records = gen->add_option("--records", ga.records,
                                               "total record count (groups * variants)");
    CLI::Option* gen_groups = gen->add_option("--groups", ga.groups, "degeneracy groups");
    gen_records->excludes(gen_groups);
    gen->add_option("--variants", ga.variants, "records per group");
    gen->add_option("--mn-lo", ga.mn_lo, "Mn draw range, low");
    gen->add_option("--mn-hi", ga.mn_hi, "Mn draw range, high");
    gen->add_option("--disp-lo", ga.disp_lo, "dispersity draw range, low");
    gen->add_option("--disp-hi", ga.disp_hi, "dispersity draw range, high");
    gen->add_option("--chains", ga.chains, "chains per ensemble");
    gen->add_option("--m0", ga.m0, "repeat-unit mass");
    gen->add_option("--monomer", ga.monomer, "repeat-unit symbol");
    gen->add_option("--span", ga.span, "default grid span in sigmas");
    gen->add_option("--jitter-lo", ga.jitter_lo, "narrowed-window span range, low");
    gen->add_option("--jitter-hi", ga.jitter_hi, "narrowed-window span range, high");

    MomentsArgs ma;
    CLI::App* mom = app.add_subcommand("moments",
                                       "analytic vs empirical averages for one fit");
    mom->fallthrough();
    mom->add_option("--family", ma.family, "lognormal, schulz-zimm, or weibull");
    mom->add_option("--mn", ma.mn, "target Mn")->required();
    mom->add_option("--disp", ma.disp, "target dispersity")->required();
    mom->add_option("--n", ma.n, "grid points");
    mom->add_option("--span", ma.span, "grid span in sigmas");
    mom->add_option("--m0", ma.m0, "repeat-unit mass");

    EmbedArgs ea;
    CLI::App* emb = app.add_subcommand("embed", "export embeddings for a corpus");
    emb->fallthrough();
    emb->add_option("--corpus", ea.corpus, "corpus.jsonl path")->required();
    emb->add_option("--repr", ea.repr, "polyset, baseline, or both");
    emb->add_option("--rbf", ea.rbf, "radial basis function count");
    emb->add_option("--center-lo", ea.center_lo, "first center, log10 g/mol");
    emb->add_option("--center-hi", ea.center_hi, "last center, log10 g/mol");
    emb->add_option("--bandwidth", ea.bandwidth, "width in units of center spacing");
    emb->add_flag("--no-raw", ea.no_raw, "drop the raw log10 mass feature");

    TrainArgs ta;
    CLI::App* tre = app.add_subcommand("train-eval",
                                       "train the regressor and evaluate on test");
    tre->fallthrough();
    tre->add_option("--corpus", ta.corpus, "corpus.jsonl path")->required();
    tre->add_option("--repr", ta.repr, "polyset or baseline");
    tre->add_option("--target", ta.target, "mz1 or mz");
    tre->add_option("--split-seed", ta.split_seed, "seed for the split permutation");
    tre->add_option("--epochs", ta.epochs, "maximum epochs");
    tre->add_option("--batch", ta.batch, "minibatch size");
    tre->add_option("--lr", ta.lr, "Adam learning rate");
    tre->add_option("--patience", ta.patience, "early-stopping patience in epochs");
    tre->add_option("--hidden", ta.hidden, "hidden layer widths")->delimiter(',');
    tre->add_flag("--record-split", ta.record_split,
                  "split by record id instead of by group");

    PcaArgs pa;
    CLI::App* pc = app.add_subcommand("pca", "principal components of one iso-scalar subset");
    pc->fallthrough();
    pc->add_option("--mn", pa.mn, "nominal Mn of the generated subset");
    pc->add_option("--disp", pa.disp, "nominal dispersity of the generated subset");
    pc->add_option("--count", pa.count, "records in the generated subset");
    pc->add_option("--chains", pa.chains, "chains per ensemble");
    pc->add_option("--m0", pa.m0, "repeat-unit mass");
    pc->add_option("--span-lo", pa.span_lo, "narrowest window, in sigmas");
    pc->add_option("--span-hi", pa.span_hi, "widest window, in sigmas");
    pc->add_option("--monomer", pa.monomer, "repeat-unit symbol");
    pc->add_option("--corpus", pa.corpus, "take the subset from this corpus instead");
    pc->add_option("--group-id", pa.group_id, "group to select from --corpus");
    pc->add_option("--repr", pa.repr, "polyset or baseline");

    std::string deg_corpus;
    CLI::App* deg = app.add_subcommand("degeneracy-report",
                                       "within-group spread of the tail averages");
    deg->fallthrough();
    deg->add_option("--corpus", deg_corpus, "corpus.jsonl path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        nlohmann::json cfg = load_config(config_path);
        cfg_get(cfg, "out_dir", app, "--out-dir", out_dir);
        bool seed_given = flag_or_key(cfg, "seed", app, "--seed");
        cfg_get(cfg, "seed", app, "--seed", seed);
        fs::create_directories(out_dir);

        if (app.got_subcommand(gen)) {
            bool rec_flag = gen_records->count() > 0;
            bool grp_flag = gen_groups->count() > 0;
            if (!rec_flag && !grp_flag) {
                if (cfg.contains("records") && cfg.contains("groups")) {
                    throw std::runtime_error("config sets both records and groups");
                }
                if (cfg.contains("records")) ga.records = cfg.at("records").get<double>();
                if (cfg.contains("groups")) ga.groups = cfg.at("groups").get<double>();
            }
            cfg_get(cfg, "variants", *gen, "--variants", ga.variants);
            cfg_get(cfg, "mn_lo", *gen, "--mn-lo", ga.mn_lo);
            cfg_get(cfg, "mn_hi", *gen, "--mn-hi", ga.mn_hi);
            cfg_get(cfg, "disp_lo", *gen, "--disp-lo", ga.disp_lo);
            cfg_get(cfg, "disp_hi", *gen, "--disp-hi", ga.disp_hi);
            cfg_get(cfg, "chains", *gen, "--chains", ga.chains);
            cfg_get(cfg, "m0", *gen, "--m0", ga.m0);
            cfg_get(cfg, "monomer", *gen, "--monomer", ga.monomer);
            cfg_get(cfg, "span", *gen, "--span", ga.span);
            cfg_get(cfg, "jitter_lo", *gen, "--jitter-lo", ga.jitter_lo);
            cfg_get(cfg, "jitter_hi", *gen, "--jitter-hi", ga.jitter_hi);
            return run_gen_dataset(ga, seed, out_dir);
        }
        if (app.got_subcommand(mom)) {
            cfg_get(cfg, "family", *mom, "--family", ma.family);
            cfg_get(cfg, "n", *mom, "--n", ma.n);
            cfg_get(cfg, "span", *mom, "--span", ma.span);
            cfg_get(cfg, "m0", *mom, "--m0", ma.m0);
            return run_moments(ma, out_dir);
        }
        if (app.got_subcommand(emb)) {
            cfg_get(cfg, "repr", *emb, "--repr", ea.repr);
            cfg_get(cfg, "rbf", *emb, "--rbf", ea.rbf);
            cfg_get(cfg, "center_lo", *emb, "--center-lo", ea.center_lo);
            cfg_get(cfg, "center_hi", *emb, "--center-hi", ea.center_hi);
            cfg_get(cfg, "bandwidth", *emb, "--bandwidth", ea.bandwidth);
            cfg_get(cfg, "no_raw", *emb, "--no-raw", ea.no_raw);
            return run_embed(ea, out_dir);
        }
        if (app.got_subcommand(tre)) {
            cfg_get(cfg, "repr", *tre, "--repr", ta.repr);
            cfg_get(cfg, "target", *tre, "--target", ta.target);
            cfg_get(cfg, "split_seed", *tre, "--split-seed", ta.split_seed);
            cfg_get(cfg, "epochs", *tre, "--epochs", ta.epochs);
            cfg_get(cfg, "batch", *tre, "--batch", ta.batch);
            cfg_get(cfg, "lr", *tre, "--lr", ta.lr);
            cfg_get(cfg, "patience", *tre, "--patience", ta.patience);
            cfg_get(cfg, "hidden", *tre, "--hidden", ta.hidden);
            cfg_get(cfg, "record_split", *tre, "--record-split", ta.record_split);
            if (cfg.contains("fractions")) {
                std::vector<double> f = cfg.at("fractions").get<std::vector<double>>();
                if (f.size() != 3) {
                    throw std::runtime_error("config key fractions must hold 3 numbers");
                }
                ta.fractions = {f[0], f[1], f[2]};
            }
            ta.train_seed = seed_given ? seed : 1;
            return run_train_eval(ta, out_dir);
        }
        if (app.got_subcommand(pc)) {
            cfg_get(cfg, "mn", *pc, "--mn", pa.mn);
            cfg_get(cfg, "disp", *pc, "--disp", pa.disp);
            cfg_get(cfg, "count", *pc, "--count", pa.count);
            cfg_get(cfg, "chains", *pc, "--chains", pa.chains);
            cfg_get(cfg, "m0", *pc, "--m0", pa.m0);
            cfg_get(cfg, "span_lo", *pc, "--span-lo", pa.span_lo);
            cfg_get(cfg, "span_hi", *pc, "--span-hi", pa.span_hi);
            cfg_get(cfg, "monomer", *pc, "--monomer", pa.monomer);
            cfg_get(cfg, "corpus", *pc, "--corpus", pa.corpus);
            cfg_get(cfg, "group_id", *pc, "--group-id", pa.group_id);
            cfg_get(cfg, "repr", *pc, "--repr", pa.repr);
            return run_pca(pa, out_dir);
        }
        if (app.got_subcommand(deg)) {
            return run_degeneracy(deg_corpus, out_dir);
        }
        throw std::logic_error("unreachable: no subcommand dispatched");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
