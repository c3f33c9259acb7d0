#pragma once

// Finite weighted chain ensembles: a list of (degree of polymerization,
// molar mass, number-fraction weight) triples materialized from a fitted
// distribution, and their empirical mass averages.

#include <cstdint>
#include <string>
#include <vector>

#include "polyset/mwd.hpp"

namespace polyset {

struct Chain {
    std::int64_t x;  // repeat-unit count, >= 1
    double m;        // x * m0 exactly
};

enum class SamplingMode { Grid, Iid, LiteralEq8, PointMass };

std::string sampling_mode_name(SamplingMode m);
SamplingMode sampling_mode_from_name(const std::string& name);

struct PolySetEnsemble {
    std::vector<Chain> chains;
    std::vector<double> weights;  // sum to 1 within 1e-12, each >= 0
    double m0 = 0.0;
    SamplingMode mode = SamplingMode::Grid;
    std::uint64_t seed = 0;        // 0 for deterministic modes
    double span_sigmas = 0.0;      // grid mode only

    std::size_t size() const { return chains.size(); }
};

// x = max(1, round half away from zero of m / m0); chain mass snaps to x*m0.
Chain quantize_chain(double m, double m0);

// Deterministic log-space quadrature: n mass points at midpoints of a uniform
// grid in ln M over the spec's span_sigmas bracket, raw weight p(M)*M (the
// log-uniform proposal Jacobian), normalized. This keeps the weights
// proportional to the density while converging to the intended distribution.
// Rejects point-mass specs (use point_mass_ensemble).
PolySetEnsemble sample_grid(const MwdSpec& spec, int n, double span_sigmas = 8.0);

// n i.i.d. draws from p with uniform weights 1/n; the statistically unbiased
// variant. Lognormal only.
PolySetEnsemble sample_iid(const MwdSpec& spec, int n, std::uint64_t seed);

// Draws from p weighted by p(M_i) and normalized. Deliberately biased: the
// weighted empirical law converges to p^2 / integral(p^2), not p; retained
// for fidelity studies. Lognormal only.
PolySetEnsemble sample_literal_eq8(const MwdSpec& spec, int n, std::uint64_t seed);

// The dispersity-1 path: a single chain at the quantized target mass.
PolySetEnsemble point_mass_ensemble(const MwdSpec& spec);

// Mn = sum w_i M_i and the higher averages as ratios of consecutive weighted
// power sums. Pairs are sorted by (mass, weight) and accumulated with
// compensated summation, so the result is bit-stable under permutation;
// powers are computed on M_i / M_max to keep M^4 well scaled.
MomentSet empirical_moments(const PolySetEnsemble& e);

// Debug serialization: {"m0":..., "mode":..., "seed":..., "chains":[[x,w],...]}.
// Weights are re-normalized on load.
std::string ensemble_to_json(const PolySetEnsemble& e);
PolySetEnsemble ensemble_from_json(const std::string& text);

}  // namespace polyset
