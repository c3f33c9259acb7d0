#include "polyset/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace polyset {

PcaResult pca(const Eigen::MatrixXd& data, int n_components) {
    Eigen::Index n = data.rows();
    Eigen::Index d = data.cols();
    if (n < 2) throw std::domain_error("pca: need at least 2 samples");
    if (n_components < 1 || n_components > std::min(n, d)) {
        throw std::domain_error("pca: n_components must be in [1, min(samples, features)]");
    }

    PcaResult out;
    out.mean = data.colwise().mean().transpose();
    Eigen::MatrixXd centered = data.rowwise() - out.mean.transpose();
    Eigen::MatrixXd cov =
        (centered.transpose() * centered) / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("pca: eigendecomposition failed");
    }

    // Solver returns ascending eigenvalues; take the top ones in descending
    // order and clamp the tiny negatives roundoff produces.
    out.components.resize(n_components, d);
    out.explained_variance.resize(n_components);
    for (int k = 0; k < n_components; ++k) {
        Eigen::Index src = d - 1 - k;
        Eigen::VectorXd comp = solver.eigenvectors().col(src);
        Eigen::Index imax = 0;
        comp.cwiseAbs().maxCoeff(&imax);
        if (comp[imax] < 0.0) comp = -comp;
        out.components.row(k) = comp.transpose();
        out.explained_variance[k] = std::max(solver.eigenvalues()[src], 0.0);
    }
    out.projections = centered * out.components.transpose();
    return out;
}

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });

    std::vector<double> ranks(v.size(), 0.0);
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        double shared = 0.5 * static_cast<double>(i + j) + 1.0;  // mean of ranks i+1..j+1
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: size mismatch");
    if (x.size() < 3) throw std::invalid_argument("spearman: need at least 3 points");
    std::vector<double> rx = average_ranks(x);
    std::vector<double> ry = average_ranks(y);

    double n = static_cast<double>(x.size());
    double mean = (n + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = rx[i] - mean;
        double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        throw std::domain_error("spearman: constant input");
    }
    return sxy / std::sqrt(sxx * syy);
}

DegeneracyReport degeneracy_report(const std::vector<PolymerRecord>& records) {
    std::map<std::int64_t, std::vector<const PolymerRecord*>> groups;
    for (const PolymerRecord& r : records) groups[r.group_id].push_back(&r);

    auto sample_std = [](const std::vector<double>& v, double mean) {
        if (v.size() < 2) return 0.0;
        double acc = 0.0;
        for (double x : v) acc += (x - mean) * (x - mean);
        return std::sqrt(acc / static_cast<double>(v.size() - 1));
    };

    DegeneracyReport out;
    double acc_mz1 = 0.0, acc_mz = 0.0;
    for (const auto& [gid, members] : groups) {
        GroupStats g;
        g.group_id = gid;
        g.target_mn = members.front()->spec.target_mn;
        g.target_dispersity = members.front()->spec.target_dispersity;
        g.count = static_cast<int>(members.size());

        std::vector<double> mz1, mz;
        for (const PolymerRecord* r : members) {
            mz1.push_back(r->target_log10_mz1);
            mz.push_back(r->target_log10_mz);
        }
        auto fill = [&](const std::vector<double>& v, double& mn_out, double& mx_out,
                        double& sd_out) {
            mn_out = *std::min_element(v.begin(), v.end());
            mx_out = *std::max_element(v.begin(), v.end());
            double mean = std::accumulate(v.begin(), v.end(), 0.0) /
                          static_cast<double>(v.size());
            sd_out = sample_std(v, mean);
        };
        fill(mz1, g.min_log10_mz1, g.max_log10_mz1, g.std_log10_mz1);
        fill(mz, g.min_log10_mz, g.max_log10_mz, g.std_log10_mz);
        acc_mz1 += g.std_log10_mz1;
        acc_mz += g.std_log10_mz;
        out.groups.push_back(g);
    }
    if (!out.groups.empty()) {
        out.mean_within_group_std_mz1 = acc_mz1 / static_cast<double>(out.groups.size());
        out.mean_within_group_std_mz = acc_mz / static_cast<double>(out.groups.size());
    }
    return out;
}

IsoCheckResult iso_subset_manifold_check(const std::vector<PolymerRecord>& records,
                                         const EncoderConfig& encoder_cfg,
                                         const std::string& monomer, EmbeddingKind kind) {
    if (records.size() < 10) {
        throw std::invalid_argument("iso check: need at least 10 records");
    }
    double mn0 = records.front().spec.target_mn;
    double d0 = records.front().spec.target_dispersity;
    for (const PolymerRecord& r : records) {
        if (std::abs(r.spec.target_mn - mn0) > 1e-9 * mn0 ||
            std::abs(r.spec.target_dispersity - d0) > 1e-9 * d0) {
            throw std::invalid_argument(
                "iso check: records must share one nominal (mn, dispersity)");
        }
    }

    IsoCheckResult out;
    out.n_records = static_cast<int>(records.size());
    std::set<Family> families;
    std::set<double> spans;
    for (const PolymerRecord& r : records) {
        families.insert(r.family());
        spans.insert(r.sampling.span_sigmas);
    }
    out.n_families = static_cast<int>(families.size());
    out.n_spans = static_cast<int>(spans.size());
    out.low_diversity = out.n_families < 2 && out.n_spans < 2;

    Eigen::MatrixXd emb;
    std::vector<double> log_mz1;
    log_mz1.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        Embedding e = kind == EmbeddingKind::PolySet
                          ? record_polyset_embedding(records[i], encoder_cfg, monomer)
                          : record_baseline_embedding(records[i], encoder_cfg, monomer);
        if (i == 0) emb.resize(records.size(), e.dim());
        emb.row(static_cast<Eigen::Index>(i)) = e.values.transpose();
        log_mz1.push_back(records[i].target_log10_mz1);
    }

    Eigen::MatrixXd centered = emb.rowwise() - emb.colwise().mean();
    if (centered.cwiseAbs().maxCoeff() < 1e-14) {
        // Identical embeddings: nothing to project, nothing to order.
        out.degenerate = true;
        out.spearman_pc_vs_logmz1 = 0.0;
        return out;
    }

    PcaResult p = pca(emb, 2);
    out.projections = p.projections;
    double best = 0.0;
    bool any_usable = false;
    for (int k = 0; k < 2; ++k) {
        std::vector<double> coord(p.projections.rows());
        for (Eigen::Index i = 0; i < p.projections.rows(); ++i) {
            coord[static_cast<std::size_t>(i)] = p.projections(i, k);
        }
        double lo = *std::min_element(coord.begin(), coord.end());
        double hi = *std::max_element(coord.begin(), coord.end());
        if (!(hi > lo)) continue;  // flat coordinate cannot order anything
        best = std::max(best, std::abs(spearman(coord, log_mz1)));
        any_usable = true;
    }
    out.degenerate = !any_usable;
    out.spearman_pc_vs_logmz1 = best;
    return out;
}

}  // namespace polyset
