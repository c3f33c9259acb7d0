#include "polyset/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "polyset/rng.hpp"
#include "polyset/serialization.hpp"

namespace polyset {

std::string sampling_mode_name(SamplingMode m) {
    switch (m) {
        case SamplingMode::Grid: return "grid";
        case SamplingMode::Iid: return "iid";
        case SamplingMode::LiteralEq8: return "literal-eq8";
        case SamplingMode::PointMass: return "point-mass";
    }
    throw std::logic_error("sampling_mode_name: unknown mode");
}

SamplingMode sampling_mode_from_name(const std::string& name) {
    if (name == "grid") return SamplingMode::Grid;
    if (name == "iid") return SamplingMode::Iid;
    if (name == "literal-eq8") return SamplingMode::LiteralEq8;
    if (name == "point-mass") return SamplingMode::PointMass;
    throw std::invalid_argument("unknown sampling mode: " + name);
}

namespace {

// Neumaier compensated summation; deterministic for a fixed term order.
class CompensatedSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void normalize_weights(std::vector<double>& w) {
    CompensatedSum s;
    for (double v : w) s.add(v);
    double total = s.value();
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw std::runtime_error("ensemble weights do not sum to a positive finite value");
    }
    for (double& v : w) v /= total;
}

void require_lognormal(const MwdSpec& spec, const char* op) {
    if (spec.family != Family::Lognormal) {
        throw std::invalid_argument(std::string(op) +
                                    ": only the lognormal family supports i.i.d. draws; "
                                    "use grid sampling for " +
                                    family_name(spec.family));
    }
}

}  // namespace

Chain quantize_chain(double m, double m0) {
    if (!(m > 0.0) || !(m0 > 0.0)) {
        throw std::domain_error("quantize_chain: m and m0 must be > 0");
    }
    // llround rounds half away from zero, the stated rule.
    std::int64_t x = std::max<std::int64_t>(1, std::llround(m / m0));
    return {x, static_cast<double>(x) * m0};
}

PolySetEnsemble sample_grid(const MwdSpec& spec, int n, double span_sigmas) {
    if (n < 2) {
        throw std::domain_error("sample_grid: n must be >= 2");
    }
    if (spec.is_point_mass()) {
        throw std::invalid_argument(
            "sample_grid: spec is a point mass; use point_mass_ensemble");
    }
    LogMassBracket br = support_bracket(spec, span_sigmas);

    PolySetEnsemble e;
    e.m0 = spec.m0;
    e.mode = SamplingMode::Grid;
    e.seed = 0;
    e.span_sigmas = span_sigmas;
    e.chains.reserve(n);
    e.weights.reserve(n);

    double step = (br.ln_hi - br.ln_lo) / n;
    for (int i = 0; i < n; ++i) {
        double y = br.ln_lo + (i + 0.5) * step;
        double m = std::exp(y);
        // Raw weight p(M) * M: the 1/M Jacobian of the log-uniform proposal.
        e.weights.push_back(std::exp(log_pdf(spec, m) + y));
        e.chains.push_back(quantize_chain(m, spec.m0));
    }
    normalize_weights(e.weights);
    return e;
}

PolySetEnsemble sample_iid(const MwdSpec& spec, int n, std::uint64_t seed) {
    require_lognormal(spec, "sample_iid");
    if (n < 1) {
        throw std::domain_error("sample_iid: n must be >= 1");
    }
    Rng rng(seed);
    PolySetEnsemble e;
    e.m0 = spec.m0;
    e.mode = SamplingMode::Iid;
    e.seed = seed;
    e.chains.reserve(n);
    double w = 1.0 / n;
    e.weights.assign(n, w);
    for (int i = 0; i < n; ++i) {
        double m = std::exp(spec.p1 + spec.p2 * rng.normal());
        e.chains.push_back(quantize_chain(m, spec.m0));
    }
    return e;
}

PolySetEnsemble sample_literal_eq8(const MwdSpec& spec, int n, std::uint64_t seed) {
    require_lognormal(spec, "sample_literal_eq8");
    if (spec.is_point_mass()) {
        throw std::invalid_argument(
            "sample_literal_eq8: spec is a point mass; use point_mass_ensemble");
    }
    if (n < 1) {
        throw std::domain_error("sample_literal_eq8: n must be >= 1");
    }
    Rng rng(seed);
    PolySetEnsemble e;
    e.m0 = spec.m0;
    e.mode = SamplingMode::LiteralEq8;
    e.seed = seed;
    e.chains.reserve(n);
    e.weights.reserve(n);
    for (int i = 0; i < n; ++i) {
        double m = std::exp(spec.p1 + spec.p2 * rng.normal());
        // Weight by the density at the drawn mass, as written; this
        // double-counts p and the weighted law converges to p^2 / int(p^2).
        e.weights.push_back(pdf(spec, m));
        e.chains.push_back(quantize_chain(m, spec.m0));
    }
    normalize_weights(e.weights);
    return e;
}

PolySetEnsemble point_mass_ensemble(const MwdSpec& spec) {
    PolySetEnsemble e;
    e.m0 = spec.m0;
    e.mode = SamplingMode::PointMass;
    e.seed = 0;
    e.chains.push_back(quantize_chain(spec.target_mn, spec.m0));
    e.weights.push_back(1.0);
    return e;
}

MomentSet empirical_moments(const PolySetEnsemble& e) {
    if (e.chains.empty() || e.chains.size() != e.weights.size()) {
        throw std::domain_error("empirical_moments: empty or inconsistent ensemble");
    }
    std::size_t n = e.chains.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (e.chains[a].m != e.chains[b].m) return e.chains[a].m < e.chains[b].m;
        return e.weights[a] < e.weights[b];
    });

    double m_max = e.chains[order.back()].m;
    CompensatedSum s[5];
    for (std::size_t idx : order) {
        double w = e.weights[idx];
        double r = e.chains[idx].m / m_max;
        double p = w;
        s[0].add(p);
        for (int k = 1; k < 5; ++k) {
            p *= r;
            s[k].add(p);
        }
    }
    double v0 = s[0].value(), v1 = s[1].value(), v2 = s[2].value();
    double v3 = s[3].value(), v4 = s[4].value();

    MomentSet out;
    out.mn = v1 / v0 * m_max;
    out.mw = v2 / v1 * m_max;
    out.mz = v3 / v2 * m_max;
    out.mz1 = v4 / v3 * m_max;
    out.dispersity = out.mw / out.mn;
    return out;
}

std::string ensemble_to_json(const PolySetEnsemble& e) {
    std::string out = "{\"m0\":" + num17(e.m0) + ",\"mode\":\"" +
                      sampling_mode_name(e.mode) +
                      "\",\"seed\":" + std::to_string(e.seed) + ",\"chains\":[";
    for (std::size_t i = 0; i < e.chains.size(); ++i) {
        if (i) out += ',';
        out += '[' + std::to_string(e.chains[i].x) + ',' + num17(e.weights[i]) + ']';
    }
    out += "]}";
    return out;
}

PolySetEnsemble ensemble_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PolySetEnsemble e;
    e.m0 = j.at("m0").get<double>();
    e.mode = sampling_mode_from_name(j.at("mode").get<std::string>());
    e.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& pair : j.at("chains")) {
        std::int64_t x = pair.at(0).get<std::int64_t>();
        if (x < 1) throw std::runtime_error("ensemble_from_json: chain with x < 1");
        e.chains.push_back({x, static_cast<double>(x) * e.m0});
        e.weights.push_back(pair.at(1).get<double>());
    }
    if (e.chains.empty()) {
        throw std::runtime_error("ensemble_from_json: empty chain list");
    }
    normalize_weights(e.weights);
    return e;
}

}  // namespace polyset
