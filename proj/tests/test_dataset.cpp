#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyset/dataset.hpp"
#include "polyset/ensemble.hpp"
#include "polyset/rng.hpp"

using namespace polyset;

namespace {

// Split mechanics only need ids, so these skip the expensive moments.
std::vector<PolymerRecord> fake_records(int n_groups, int variants) {
    std::vector<PolymerRecord> out;
    for (int g = 0; g < n_groups; ++g) {
        for (int v = 0; v < variants; ++v) {
            PolymerRecord r;
            r.id = static_cast<std::int64_t>(g) * variants + v;
            r.group_id = g;
            out.push_back(r);
        }
    }
    return out;
}

std::set<std::int64_t> groups_of(const std::vector<std::int64_t>& ids, int variants) {
    std::set<std::int64_t> out;
    for (std::int64_t id : ids) out.insert(id / variants);
    return out;
}

}  // namespace

TEST_CASE("validate_config rejects each broken field") {
    DatasetConfig ok;
    CHECK_NOTHROW(validate_config(ok));

    DatasetConfig bad = ok;
    bad.n_groups = 0;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

    bad = ok;
    bad.dispersity_range = {1.0, 4.0};
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

    bad = ok;
    bad.mn_range = {1e6, 1e4};
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

    bad = ok;
    bad.chains_per_ensemble = 1;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

    bad = ok;
    bad.sampling_mode = SamplingMode::Iid;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

    bad = ok;
    bad.jitter_span_range = {0.0, 1.0};
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
}

TEST_CASE("make_group_records cycles the four shape variants") {
    DatasetConfig cfg;
    cfg.master_seed = 99;
    std::vector<PolymerRecord> recs = make_group_records(1e6, 3.0, 7, cfg);
    REQUIRE(recs.size() == 4);

    CHECK(recs[0].family() == Family::Lognormal);
    CHECK(recs[1].family() == Family::SchulzZimm);
    CHECK(recs[2].family() == Family::Weibull);
    CHECK(recs[3].family() == Family::Lognormal);

    for (int v = 0; v < 4; ++v) {
        const PolymerRecord& r = recs[v];
        CHECK(r.id == 7 * 4 + v);
        CHECK(r.group_id == 7);
        CHECK(r.spec.target_mn == 1e6);
        CHECK(r.spec.target_dispersity == 3.0);
        CHECK(r.sampling.n == cfg.chains_per_ensemble);
        CHECK(r.sampling.seed == mix_seed(99, 7, static_cast<std::uint64_t>(v)));
    }
    CHECK(recs[0].sampling.span_sigmas == 8.0);
    CHECK(recs[3].sampling.span_sigmas >= cfg.jitter_span_range.first);
    CHECK(recs[3].sampling.span_sigmas <= cfg.jitter_span_range.second);

    // The narrowed window genuinely changes the realized shape.
    CHECK(recs[3].dispersity < 0.9 * recs[0].dispersity);
    CHECK(recs[3].target_log10_mz1 < recs[0].target_log10_mz1);
}

TEST_CASE("record targets are self-consistent with the rebuilt ensemble") {
    DatasetConfig cfg;
    cfg.master_seed = 4;
    for (const PolymerRecord& r : make_group_records(2e5, 2.4, 3, cfg)) {
        MomentSet m = empirical_moments(ensemble_for_record(r));
        CHECK(r.mn == m.mn);
        CHECK(r.dispersity == m.dispersity);
        CHECK(r.target_log10_mz == std::log10(m.mz));
        CHECK(r.target_log10_mz1 == std::log10(m.mz1));
    }
}

TEST_CASE("make_group_records is a pure function of its inputs") {
    DatasetConfig cfg;
    cfg.master_seed = 31337;
    std::vector<PolymerRecord> a = make_group_records(5e4, 1.8, 12, cfg);
    std::vector<PolymerRecord> b = make_group_records(5e4, 1.8, 12, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].target_log10_mz1 == b[i].target_log10_mz1);
        CHECK(a[i].sampling.span_sigmas == b[i].sampling.span_sigmas);
        CHECK(a[i].mn == b[i].mn);
    }
}

TEST_CASE("generate_corpus draws inside the configured rectangle") {
    DatasetConfig cfg;
    cfg.n_groups = 12;
    cfg.chains_per_ensemble = 128;
    cfg.master_seed = 2024;
    std::vector<PolymerRecord> recs = generate_corpus(cfg);
    REQUIRE(recs.size() == 48);

    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(recs[i].id == static_cast<std::int64_t>(i));
        CHECK(recs[i].group_id == static_cast<std::int64_t>(i / 4));
        CHECK(recs[i].spec.target_mn >= cfg.mn_range.first);
        CHECK(recs[i].spec.target_mn <= cfg.mn_range.second);
        CHECK(recs[i].spec.target_dispersity >= cfg.dispersity_range.first);
        CHECK(recs[i].spec.target_dispersity <= cfg.dispersity_range.second);
    }

    std::vector<PolymerRecord> again = generate_corpus(cfg);
    REQUIRE(again.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(again[i].target_log10_mz1 == recs[i].target_log10_mz1);
    }

    cfg.master_seed = 2025;
    std::vector<PolymerRecord> other = generate_corpus(cfg);
    bool any_diff = false;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        if (other[i].target_log10_mz1 != recs[i].target_log10_mz1) any_diff = true;
    }
    CHECK(any_diff);
}

TEST_CASE("corpus JSONL round-trips bit-exactly, embeddings included") {
    DatasetConfig cfg;
    cfg.n_groups = 3;
    cfg.chains_per_ensemble = 64;
    cfg.master_seed = 77;
    std::vector<PolymerRecord> recs = generate_corpus(cfg);

    EncoderConfig enc;
    recs[0].embedding_polyset = record_polyset_embedding(recs[0], enc, cfg.monomer);
    recs[0].embedding_baseline = record_baseline_embedding(recs[0], enc, cfg.monomer);

    const std::string path = "tmp_corpus_roundtrip.jsonl";
    write_records(recs, cfg, path);
    CorpusFile loaded = read_records(path);

    CHECK(loaded.config.n_groups == cfg.n_groups);
    CHECK(loaded.config.master_seed == cfg.master_seed);
    CHECK(loaded.config.mn_range == cfg.mn_range);
    CHECK(loaded.config.jitter_span_range == cfg.jitter_span_range);
    REQUIRE(loaded.records.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const PolymerRecord& a = recs[i];
        const PolymerRecord& b = loaded.records[i];
        CHECK(a.id == b.id);
        CHECK(a.group_id == b.group_id);
        CHECK(a.family() == b.family());
        CHECK(a.spec.p1 == b.spec.p1);
        CHECK(a.spec.p2 == b.spec.p2);
        CHECK(a.mn == b.mn);
        CHECK(a.dispersity == b.dispersity);
        CHECK(a.target_log10_mz == b.target_log10_mz);
        CHECK(a.target_log10_mz1 == b.target_log10_mz1);
        CHECK(a.sampling.mode == b.sampling.mode);
        CHECK(a.sampling.n == b.sampling.n);
        CHECK(a.sampling.span_sigmas == b.sampling.span_sigmas);
        CHECK(a.sampling.seed == b.sampling.seed);
        CHECK(a.embedding_polyset.has_value() == b.embedding_polyset.has_value());
        CHECK(a.embedding_baseline.has_value() == b.embedding_baseline.has_value());
    }
    REQUIRE(loaded.records[0].embedding_polyset.has_value());
    const Embedding& ea = *recs[0].embedding_polyset;
    const Embedding& eb = *loaded.records[0].embedding_polyset;
    REQUIRE(ea.dim() == eb.dim());
    for (int i = 0; i < ea.dim(); ++i) CHECK(ea.values[i] == eb.values[i]);
}

TEST_CASE("read_records names the offending line") {
    DatasetConfig cfg;
    cfg.n_groups = 3;
    cfg.chains_per_ensemble = 64;
    std::vector<PolymerRecord> recs = generate_corpus(cfg);
    const std::string path = "tmp_corpus_corrupt.jsonl";
    write_records(recs, cfg, path);

    // Corrupt the third line (header + 2 records precede the damage).
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    in.close();
    lines[2] = "{broken";
    std::ofstream out(path, std::ios::binary);
    for (const std::string& l : lines) out << l << "\n";
    out.close();

    try {
        read_records(path);
        FAIL("expected a parse error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("an empty file is an empty corpus; junk headers are not") {
    const std::string path = "tmp_corpus_empty.jsonl";
    std::ofstream(path, std::ios::binary).close();
    CorpusFile empty = read_records(path);
    CHECK(empty.records.empty());

    std::ofstream f(path, std::ios::binary);
    f << "{\"schema\":\"something-else\",\"version\":1}\n";
    f.close();
    CHECK_THROWS(read_records(path));
    CHECK_THROWS(read_records("tmp_no_such_file.jsonl"));
}

TEST_CASE("group-aware split cuts 2500 groups into 1750/375/375") {
    std::vector<PolymerRecord> recs = fake_records(2500, 4);
    SplitAssignment s = split_records(recs, {0.7, 0.15, 0.15}, 1);
    CHECK(groups_of(s.train, 4).size() == 1750);
    CHECK(groups_of(s.val, 4).size() == 375);
    CHECK(groups_of(s.test, 4).size() == 375);
    CHECK(s.train.size() == 7000);
    CHECK(s.val.size() == 1500);
    CHECK(s.test.size() == 1500);
}

TEST_CASE("group-aware split cuts 500 groups into 350/75/75") {
    std::vector<PolymerRecord> recs = fake_records(500, 4);
    SplitAssignment s = split_records(recs, {0.7, 0.15, 0.15}, 1);
    CHECK(groups_of(s.train, 4).size() == 350);
    CHECK(groups_of(s.val, 4).size() == 75);
    CHECK(groups_of(s.test, 4).size() == 75);
}

TEST_CASE("splits partition the ids with no group leakage") {
    std::vector<PolymerRecord> recs = fake_records(40, 4);
    SplitAssignment s = split_records(recs, {0.7, 0.15, 0.15}, 9);

    std::set<std::int64_t> seen;
    for (const auto* part : {&s.train, &s.val, &s.test}) {
        for (std::int64_t id : *part) {
            CHECK(seen.insert(id).second);  // no duplicates across parts
        }
    }
    CHECK(seen.size() == recs.size());

    auto tg = groups_of(s.train, 4);
    auto vg = groups_of(s.val, 4);
    auto eg = groups_of(s.test, 4);
    for (std::int64_t g : tg) {
        CHECK(vg.count(g) == 0);
        CHECK(eg.count(g) == 0);
    }
    for (std::int64_t g : vg) CHECK(eg.count(g) == 0);

    // Every selected group contributes all four of its records.
    for (const auto* part : {&s.train, &s.val, &s.test}) {
        std::set<std::int64_t> ids(part->begin(), part->end());
        for (std::int64_t g : groups_of(*part, 4)) {
            for (int v = 0; v < 4; ++v) CHECK(ids.count(g * 4 + v) == 1);
        }
    }
}

TEST_CASE("splits are deterministic in the seed and sorted") {
    std::vector<PolymerRecord> recs = fake_records(50, 4);
    SplitAssignment a = split_records(recs, {0.7, 0.15, 0.15}, 5);
    SplitAssignment b = split_records(recs, {0.7, 0.15, 0.15}, 5);
    CHECK(a.train == b.train);
    CHECK(a.val == b.val);
    CHECK(a.test == b.test);
    CHECK(std::is_sorted(a.train.begin(), a.train.end()));
    CHECK(std::is_sorted(a.test.begin(), a.test.end()));

    SplitAssignment c = split_records(recs, {0.7, 0.15, 0.15}, 6);
    CHECK(a.train != c.train);
}

TEST_CASE("record-level split ignores group boundaries") {
    std::vector<PolymerRecord> recs = fake_records(50, 4);
    SplitAssignment s = split_records(recs, {0.7, 0.15, 0.15}, 5, false);
    CHECK(s.train.size() == 140);
    CHECK(s.val.size() == 30);
    CHECK(s.test.size() == 30);
    bool some_group_straddles = false;
    std::set<std::int64_t> train_ids(s.train.begin(), s.train.end());
    for (std::int64_t g = 0; g < 50; ++g) {
        int in_train = 0;
        for (int v = 0; v < 4; ++v) in_train += train_ids.count(g * 4 + v);
        if (in_train > 0 && in_train < 4) some_group_straddles = true;
    }
    CHECK(some_group_straddles);
}

TEST_CASE("split rejects bad fractions and tiny unit sets") {
    std::vector<PolymerRecord> recs = fake_records(10, 4);
    CHECK_THROWS_AS(split_records(recs, {0.5, 0.2, 0.2}, 1), std::invalid_argument);
    std::vector<PolymerRecord> two = fake_records(2, 4);
    CHECK_THROWS_AS(split_records(two, {0.7, 0.15, 0.15}, 1), std::invalid_argument);
}

TEST_CASE("split JSON round-trips") {
    std::vector<PolymerRecord> recs = fake_records(20, 4);
    SplitAssignment s = split_records(recs, {0.6, 0.2, 0.2}, 123);
    const std::string path = "tmp_split_roundtrip.json";
    write_split(s, path);
    SplitAssignment r = read_split(path);
    CHECK(r.train == s.train);
    CHECK(r.val == s.val);
    CHECK(r.test == s.test);
    CHECK(r.seed == s.seed);
    CHECK(r.fractions == s.fractions);
}

TEST_CASE("iso subset sweeps the truncation continuum with two families") {
    std::vector<PolymerRecord> recs = make_iso_subset(1e6, 3.0, 40, 128);
    REQUIRE(recs.size() == 40);
    for (int i = 0; i < 40; ++i) {
        CHECK(recs[i].id == i);
        CHECK(recs[i].group_id == 0);
        CHECK(recs[i].spec.target_mn == 1e6);
        CHECK(recs[i].spec.target_dispersity == 3.0);
        CHECK(recs[i].family() ==
              (i % 2 == 0 ? Family::SchulzZimm : Family::Weibull));
    }
    CHECK(recs[0].sampling.span_sigmas == 0.3);
    CHECK(recs[39].sampling.span_sigmas == 1.2);
    CHECK(recs[2].sampling.span_sigmas > recs[0].sampling.span_sigmas);
    // 20 distinct spans, each shared by the SZ/WB pair.
    std::set<double> spans;
    for (const PolymerRecord& r : recs) spans.insert(r.sampling.span_sigmas);
    CHECK(spans.size() == 20);
    CHECK(recs[0].sampling.span_sigmas == recs[1].sampling.span_sigmas);

    CHECK_THROWS_AS(make_iso_subset(1e6, 3.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(make_iso_subset(1e6, 3.0, 0), std::invalid_argument);
}

TEST_CASE("a generated corpus shows real within-group spread in log10 mz1") {
    // The truncated-lognormal variant separates the tail averages of records
    // whose nominal scalars are identical.
    DatasetConfig cfg;
    cfg.n_groups = 25;
    cfg.chains_per_ensemble = 128;
    cfg.master_seed = 808;
    std::vector<PolymerRecord> recs = generate_corpus(cfg);

    double mean_range = 0.0;
    for (int g = 0; g < cfg.n_groups; ++g) {
        double lo = 1e300, hi = -1e300;
        for (int v = 0; v < 4; ++v) {
            double t = recs[static_cast<std::size_t>(g) * 4 + v].target_log10_mz1;
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
        mean_range += hi - lo;
    }
    mean_range /= cfg.n_groups;
    CHECK(mean_range > 0.15);
}
