#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "polyset/analyze.hpp"
#include "polyset/dataset.hpp"
#include "polyset/rng.hpp"

using namespace polyset;

TEST_CASE("average_ranks shares the mean rank across ties") {
    std::vector<double> r = average_ranks({10.0, 20.0, 20.0, 30.0});
    CHECK(r == std::vector<double>{1.0, 2.5, 2.5, 4.0});
    CHECK(average_ranks({3.0, 2.0, 1.0}) == std::vector<double>{3.0, 2.0, 1.0});
    CHECK(average_ranks({7.0}) == std::vector<double>{1.0});
    CHECK(average_ranks({5.0, 5.0, 5.0}) == std::vector<double>{2.0, 2.0, 2.0});
}

TEST_CASE("spearman hits the textbook values") {
    CHECK(spearman({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == doctest::Approx(1.0));
    CHECK(spearman({1.0, 2.0, 3.0}, {3.0, 2.0, 1.0}) == doctest::Approx(-1.0));
    CHECK(spearman({1.0, 2.0, 3.0}, {3.0, 1.0, 2.0}) == doctest::Approx(-0.5));

    // Rank correlation only sees order, not scale.
    std::vector<double> x{0.1, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> fx;
    for (double v : x) fx.push_back(std::exp(3.0 * v) - 7.0);
    CHECK(spearman(x, fx) == doctest::Approx(1.0));

    CHECK(spearman({1.0, 1.0, 2.0, 3.0}, {2.0, 2.0, 4.0, 6.0}) == doctest::Approx(1.0));

    CHECK_THROWS_AS(spearman({1.0, 2.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(spearman({1.0, 2.0, 3.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(spearman({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}), std::domain_error);
}

TEST_CASE("pca recovers the diagonal of collinear data") {
    Eigen::MatrixXd data(5, 2);
    for (int i = 0; i < 5; ++i) {
        double t = i - 2.0;
        data(i, 0) = t;
        data(i, 1) = t;
    }
    PcaResult p = pca(data, 2);
    double s = 1.0 / std::sqrt(2.0);
    CHECK(p.components(0, 0) == doctest::Approx(s).epsilon(1e-12));
    CHECK(p.components(0, 1) == doctest::Approx(s).epsilon(1e-12));
    // Sample variance of t is 2.5, all of it along the diagonal.
    CHECK(p.explained_variance[0] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(p.explained_variance[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(p.explained_variance[1] >= 0.0);
    CHECK(p.projections(0, 0) == doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(p.mean[0] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("pca on axis-aligned data returns the axes in variance order") {
    Eigen::MatrixXd data(4, 2);
    data << -2.0, 0.5, -2.0, -0.5, 2.0, 0.5, 2.0, -0.5;
    PcaResult p = pca(data, 2);
    CHECK(p.components(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.components(0, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(p.components(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.explained_variance[0] == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
    CHECK(p.explained_variance[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("full-rank pca is an orthonormal reconstruction") {
    Rng rng(99);
    Eigen::MatrixXd data(50, 8);
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) {
            data(r, c) = rng.normal() * (1.0 + 0.3 * static_cast<double>(c));
        }
    }
    PcaResult p = pca(data, 8);

    Eigen::MatrixXd gram = p.components * p.components.transpose();
    CHECK((gram - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10);

    for (int k = 0; k + 1 < 8; ++k) {
        CHECK(p.explained_variance[k] >= p.explained_variance[k + 1]);
    }

    Eigen::MatrixXd centered = data.rowwise() - p.mean.transpose();
    Eigen::MatrixXd rebuilt = p.projections * p.components;
    CHECK((rebuilt - centered).norm() < 1e-8);
    CHECK((p.projections - centered * p.components.transpose()).cwiseAbs().maxCoeff() <
          1e-12);

    // Total variance is preserved by a full decomposition.
    double total = (centered.transpose() * centered / 49.0).trace();
    CHECK(p.explained_variance.sum() == doctest::Approx(total).epsilon(1e-10));
}

TEST_CASE("pca is invariant to translating the cloud") {
    Rng rng(7);
    Eigen::MatrixXd data(20, 3);
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) data(r, c) = rng.normal();
    }
    Eigen::MatrixXd shifted = data;
    shifted.col(0).array() += 100.0;
    shifted.col(2).array() -= 55.0;

    PcaResult a = pca(data, 2);
    PcaResult b = pca(shifted, 2);
    CHECK((a.components - b.components).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a.explained_variance - b.explained_variance).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a.projections - b.projections).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("pca rejects undersized or oversized requests") {
    Eigen::MatrixXd one(1, 3);
    one.setZero();
    CHECK_THROWS_AS(pca(one, 1), std::domain_error);
    Eigen::MatrixXd data(4, 3);
    data.setRandom();
    CHECK_THROWS_AS(pca(data, 0), std::domain_error);
    CHECK_THROWS_AS(pca(data, 4), std::domain_error);
}

TEST_CASE("degeneracy report computes per-group spread") {
    std::vector<PolymerRecord> recs;
    auto add = [&](std::int64_t gid, double mz1, double mz) {
        PolymerRecord r;
        r.id = static_cast<std::int64_t>(recs.size());
        r.group_id = gid;
        r.spec.target_mn = gid == 5 ? 1e6 : 2e4;
        r.spec.target_dispersity = gid == 5 ? 3.0 : 1.8;
        r.target_log10_mz1 = mz1;
        r.target_log10_mz = mz;
        recs.push_back(r);
    };
    add(5, 6.0, 4.0);
    add(2, 5.5, 3.5);  // singleton group, listed first by id
    add(5, 6.2, 4.1);
    add(5, 6.4, 4.2);

    DegeneracyReport rep = degeneracy_report(recs);
    REQUIRE(rep.groups.size() == 2);
    CHECK(rep.groups[0].group_id == 2);
    CHECK(rep.groups[0].count == 1);
    CHECK(rep.groups[0].std_log10_mz1 == 0.0);
    CHECK(rep.groups[0].min_log10_mz1 == 5.5);
    CHECK(rep.groups[0].max_log10_mz1 == 5.5);

    const GroupStats& g = rep.groups[1];
    CHECK(g.group_id == 5);
    CHECK(g.count == 3);
    CHECK(g.target_mn == 1e6);
    CHECK(g.target_dispersity == 3.0);
    CHECK(g.min_log10_mz1 == 6.0);
    CHECK(g.max_log10_mz1 == 6.4);
    CHECK(g.std_log10_mz1 == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(g.std_log10_mz == doctest::Approx(0.1).epsilon(1e-12));

    CHECK(rep.mean_within_group_std_mz1 == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(rep.mean_within_group_std_mz == doctest::Approx(0.05).epsilon(1e-12));

    DegeneracyReport empty = degeneracy_report({});
    CHECK(empty.groups.empty());
    CHECK(empty.mean_within_group_std_mz1 == 0.0);
}

TEST_CASE("variant cycling produces measurable within-group spread") {
    DatasetConfig cfg;
    cfg.chains_per_ensemble = 256;
    cfg.master_seed = 21;
    std::vector<PolymerRecord> recs = make_group_records(1e6, 3.0, 0, cfg);
    DegeneracyReport rep = degeneracy_report(recs);
    REQUIRE(rep.groups.size() == 1);
    CHECK(rep.groups[0].count == 4);
    CHECK(rep.groups[0].std_log10_mz1 > 0.05);
    CHECK(rep.groups[0].std_log10_mz1 >= rep.groups[0].std_log10_mz);

    // Identical preparations, by contrast, have zero spread.
    std::vector<PolymerRecord> same(4, recs[0]);
    for (int i = 0; i < 4; ++i) same[static_cast<std::size_t>(i)].id = i;
    DegeneracyReport flat = degeneracy_report(same);
    CHECK(flat.groups[0].std_log10_mz1 == 0.0);
}

TEST_CASE("the iso-scalar subset is ordered by a principal coordinate") {
    std::vector<PolymerRecord> recs = make_iso_subset(1e6, 3.0, 40);
    EncoderConfig enc;
    IsoCheckResult res = iso_subset_manifold_check(recs, enc, "A");
    CHECK(res.n_records == 40);
    CHECK(res.n_families == 2);
    CHECK(res.n_spans == 20);
    CHECK_FALSE(res.degenerate);
    CHECK_FALSE(res.low_diversity);
    CHECK(res.projections.rows() == 40);
    CHECK(res.projections.cols() == 2);
    CHECK(res.spearman_pc_vs_logmz1 >= 0.9);
    CHECK(res.spearman_pc_vs_logmz1 <= 1.0);
}

TEST_CASE("nominal-scalar embeddings come back flagged degenerate") {
    std::vector<PolymerRecord> recs = make_iso_subset(1e6, 3.0, 20, 128);
    EncoderConfig enc;
    IsoCheckResult res =
        iso_subset_manifold_check(recs, enc, "A", EmbeddingKind::Baseline);
    CHECK(res.degenerate);
    CHECK(res.spearman_pc_vs_logmz1 == 0.0);
    CHECK(res.projections.size() == 0);
    CHECK(res.n_records == 20);
}

TEST_CASE("iso check rejects subsets it cannot interpret") {
    EncoderConfig enc;
    std::vector<PolymerRecord> few = make_iso_subset(1e6, 3.0, 8, 64);
    CHECK_THROWS_AS(iso_subset_manifold_check(few, enc, "A"), std::invalid_argument);

    std::vector<PolymerRecord> mixed = make_iso_subset(1e6, 3.0, 12, 64);
    mixed[3].spec.target_mn = 2e6;
    CHECK_THROWS_AS(iso_subset_manifold_check(mixed, enc, "A"), std::invalid_argument);
}

TEST_CASE("identical records are low-diversity and degenerate") {
    std::vector<PolymerRecord> base = make_iso_subset(1e6, 3.0, 12, 64);
    std::vector<PolymerRecord> same(10, base[0]);
    for (int i = 0; i < 10; ++i) same[static_cast<std::size_t>(i)].id = i;
    EncoderConfig enc;
    IsoCheckResult res = iso_subset_manifold_check(same, enc, "A");
    CHECK(res.low_diversity);
    CHECK(res.degenerate);
    CHECK(res.n_families == 1);
    CHECK(res.n_spans == 1);
}
