#pragma once

// Embedding-space diagnostics: PCA projections, rank correlation, per-group
// degeneracy statistics, and the iso-scalar manifold check that asks whether
// a top principal coordinate orders the high-mass tail.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "polyset/dataset.hpp"
#include "polyset/encode.hpp"

namespace polyset {

struct PcaResult {
    Eigen::MatrixXd components;          // rows, orthonormal
    Eigen::VectorXd explained_variance;  // descending, >= 0
    Eigen::MatrixXd projections;         // samples x n_components
    Eigen::VectorXd mean;
};

// Top eigenpairs of the sample covariance (centered, 1/(n-1)). Each
// component's largest-magnitude entry is made positive so reports are
// reproducible up to that convention.
PcaResult pca(const Eigen::MatrixXd& data, int n_components);

// Pearson correlation of average ranks (ties share the mean rank).
// Constant input is a domain error.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// 1-based ranks; tied values all get the mean of the ranks they occupy.
std::vector<double> average_ranks(const std::vector<double>& v);

struct GroupStats {
    std::int64_t group_id = 0;
    double target_mn = 0.0;
    double target_dispersity = 0.0;
    int count = 0;
    double min_log10_mz1 = 0.0, max_log10_mz1 = 0.0, std_log10_mz1 = 0.0;
    double min_log10_mz = 0.0, max_log10_mz = 0.0, std_log10_mz = 0.0;
};

struct DegeneracyReport {
    std::vector<GroupStats> groups;  // ordered by group_id
    double mean_within_group_std_mz1 = 0.0;
    double mean_within_group_std_mz = 0.0;
};

// Sample standard deviations (n-1); singleton groups report 0.
DegeneracyReport degeneracy_report(const std::vector<PolymerRecord>& records);

struct IsoCheckResult {
    double spearman_pc_vs_logmz1 = 0.0;  // max |spearman| over the top 2 PCs
    bool degenerate = false;             // embeddings carry no variance
    bool low_diversity = false;          // single family and single span
    int n_records = 0;
    int n_families = 0;
    int n_spans = 0;
    Eigen::MatrixXd projections;  // records x 2 in input order; empty if degenerate
};

// Embeds records sharing one nominal (Mn, dispersity), projects to two
// principal components, and reports how well the better component orders
// log10 Mz+1. Baseline embeddings are bit-identical across such a subset, so
// they come back flagged degenerate with correlation 0 rather than erroring.
IsoCheckResult iso_subset_manifold_check(const std::vector<PolymerRecord>& records,
                                         const EncoderConfig& encoder_cfg,
                                         const std::string& monomer,
                                         EmbeddingKind kind = EmbeddingKind::PolySet);

}  // namespace polyset
