#include "polyset/mwd.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "polyset/serialization.hpp"
#include "polyset/special.hpp"

namespace polyset {

std::string family_name(Family f) {
    switch (f) {
        case Family::Lognormal: return "lognormal";
        case Family::SchulzZimm: return "schulz-zimm";
        case Family::Weibull: return "weibull";
    }
    throw std::logic_error("family_name: unknown family");
}

Family family_from_name(const std::string& name) {
    if (name == "lognormal") return Family::Lognormal;
    if (name == "schulz-zimm") return Family::SchulzZimm;
    if (name == "weibull") return Family::Weibull;
    throw std::invalid_argument("unknown family name: " + name);
}

namespace {

void check_fit_inputs(const char* op, double mn, double dispersity, double m0) {
    if (!std::isfinite(mn) || !(mn > 0.0)) {
        throw std::domain_error(std::string(op) + ": mn must be finite and > 0");
    }
    if (!std::isfinite(dispersity) || !(dispersity >= 1.0)) {
        throw std::domain_error(std::string(op) + ": dispersity must be finite and >= 1");
    }
    if (!std::isfinite(m0) || !(m0 > 0.0)) {
        throw std::domain_error(std::string(op) + ": m0 must be finite and > 0");
    }
}

// Gamma(1 + 2/a) / Gamma(1 + 1/a)^2, the Weibull dispersity as a function of
// shape. Strictly decreasing in a.
double weibull_dispersity(double a) {
    return std::exp(ln_gamma(1.0 + 2.0 / a) - 2.0 * ln_gamma(1.0 + 1.0 / a));
}

}  // namespace

MwdSpec fit_lognormal(double mn, double dispersity, double m0) {
    check_fit_inputs("fit_lognormal", mn, dispersity, m0);
    double sigma2 = std::log(dispersity);
    MwdSpec s;
    s.family = Family::Lognormal;
    s.p1 = std::log(mn) - sigma2 / 2.0;
    s.p2 = std::sqrt(sigma2);
    s.target_mn = mn;
    s.target_dispersity = dispersity;
    s.m0 = m0;
    return s;
}

MwdSpec fit_schulz_zimm(double mn, double dispersity, double m0) {
    check_fit_inputs("fit_schulz_zimm", mn, dispersity, m0);
    if (!(dispersity > 1.0)) {
        throw std::domain_error("fit_schulz_zimm: dispersity must be > 1");
    }
    MwdSpec s;
    s.family = Family::SchulzZimm;
    s.p1 = 1.0 / (dispersity - 1.0);
    s.p2 = mn * (dispersity - 1.0);
    s.target_mn = mn;
    s.target_dispersity = dispersity;
    s.m0 = m0;
    return s;
}

MwdSpec fit_weibull(double mn, double dispersity, double m0, double tol) {
    check_fit_inputs("fit_weibull", mn, dispersity, m0);
    if (!(dispersity >= 1.05 && dispersity <= 20.0)) {
        throw std::domain_error("fit_weibull: dispersity must be in [1.05, 20]");
    }
    if (!(tol > 0.0)) {
        throw std::domain_error("fit_weibull: tol must be > 0");
    }
    double lo = 0.05, hi = 50.0;
    double f_lo = weibull_dispersity(lo) - dispersity;
    double f_hi = weibull_dispersity(hi) - dispersity;
    if (!(f_lo > 0.0 && f_hi < 0.0)) {
        throw std::runtime_error(
            "fit_weibull: no sign change on shape bracket [0.05, 50] for dispersity " +
            std::to_string(dispersity));
    }
    while (hi - lo > tol * hi) {
        double mid = 0.5 * (lo + hi);
        if (weibull_dispersity(mid) - dispersity > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double a = 0.5 * (lo + hi);
    MwdSpec s;
    s.family = Family::Weibull;
    s.p1 = a;
    s.p2 = mn / std::exp(ln_gamma(1.0 + 1.0 / a));
    s.target_mn = mn;
    s.target_dispersity = dispersity;
    s.m0 = m0;
    return s;
}

MwdSpec fit_family(Family family, double mn, double dispersity, double m0) {
    if (dispersity == 1.0) return fit_lognormal(mn, 1.0, m0);
    switch (family) {
        case Family::Lognormal:
            return fit_lognormal(mn, dispersity, m0);
        case Family::SchulzZimm:
            return fit_schulz_zimm(mn, dispersity, m0);
        case Family::Weibull:
            return fit_weibull(mn, dispersity, m0);
    }
    throw std::logic_error("fit_family: unknown family");
}

double log_pdf(const MwdSpec& spec, double m) {
    if (!(m > 0.0)) {
        throw std::domain_error("pdf: m must be > 0");
    }
    switch (spec.family) {
        case Family::Lognormal: {
            double mu = spec.p1, sigma = spec.p2;
            if (sigma == 0.0) {
                throw std::domain_error(
                    "pdf: point-mass spec has no density; use the point-mass path");
            }
            double t = std::log(m);
            double z = (t - mu) / sigma;
            return -0.5 * z * z - t - std::log(sigma) -
                   0.91893853320467274178032973640562;  // ln sqrt(2 pi)
        }
        case Family::SchulzZimm: {
            double k = spec.p1, theta = spec.p2;
            return (k - 1.0) * std::log(m) - m / theta - k * std::log(theta) - ln_gamma(k);
        }
        case Family::Weibull: {
            double a = spec.p1, lambda = spec.p2;
            return std::log(a / lambda) + (a - 1.0) * std::log(m / lambda) -
                   std::pow(m / lambda, a);
        }
    }
    throw std::logic_error("log_pdf: unknown family");
}

double pdf(const MwdSpec& spec, double m) {
    return std::exp(log_pdf(spec, m));
}

MomentSet analytic_moments(const MwdSpec& spec) {
    MomentSet out;
    switch (spec.family) {
        case Family::Lognormal: {
            // E[M^r] = exp(r mu + r^2 sigma^2 / 2), so consecutive moment
            // ratios are Mn * D^(r-1).
            double mn = spec.target_mn, d = spec.target_dispersity;
            out.mn = mn;
            out.mw = mn * d;
            out.mz = mn * d * d;
            out.mz1 = mn * d * d * d;
            break;
        }
        case Family::SchulzZimm: {
            double k = spec.p1, theta = spec.p2;
            out.mn = k * theta;
            out.mw = (k + 1.0) * theta;
            out.mz = (k + 2.0) * theta;
            out.mz1 = (k + 3.0) * theta;
            break;
        }
        case Family::Weibull: {
            // E[M^r] = lambda^r Gamma(1 + r/a); ratios reduce to
            // lambda * Gamma(1 + r/a) / Gamma(1 + (r-1)/a).
            double a = spec.p1, lambda = spec.p2;
            auto lg = [a](double r) { return ln_gamma(1.0 + r / a); };
            out.mn = lambda * std::exp(lg(1.0));
            out.mw = lambda * std::exp(lg(2.0) - lg(1.0));
            out.mz = lambda * std::exp(lg(3.0) - lg(2.0));
            out.mz1 = lambda * std::exp(lg(4.0) - lg(3.0));
            break;
        }
    }
    out.dispersity = out.mw / out.mn;
    return out;
}

LogMassBracket support_bracket(const MwdSpec& spec, double span_sigmas) {
    if (!(span_sigmas > 0.0)) {
        throw std::domain_error("support_bracket: span_sigmas must be > 0");
    }
    switch (spec.family) {
        case Family::Lognormal: {
            if (spec.is_point_mass()) {
                throw std::domain_error(
                    "support_bracket: point-mass spec has no bracket");
            }
            double mu = spec.p1, sigma = spec.p2;
            return {mu - span_sigmas * sigma, mu + span_sigmas * sigma};
        }
        case Family::SchulzZimm: {
            double eps = std::max(norm_cdf(-span_sigmas), 1e-9);
            double k = spec.p1, theta = spec.p2;
            return {std::log(gamma_quantile(k, eps) * theta),
                    std::log(gamma_quantile(k, 1.0 - eps) * theta)};
        }
        case Family::Weibull: {
            double eps = std::max(norm_cdf(-span_sigmas), 1e-9);
            double a = spec.p1, lambda = spec.p2;
            // Weibull quantile: q(p) = lambda * (-ln(1 - p))^(1/a).
            double lo = lambda * std::pow(-std::log1p(-eps), 1.0 / a);
            double hi = lambda * std::pow(-std::log(eps), 1.0 / a);
            return {std::log(lo), std::log(hi)};
        }
    }
    throw std::logic_error("support_bracket: unknown family");
}

namespace {

std::pair<const char*, const char*> param_names(Family f) {
    switch (f) {
        case Family::Lognormal: return {"mu", "sigma"};
        case Family::SchulzZimm: return {"k", "theta"};
        case Family::Weibull: return {"a", "lambda"};
    }
    throw std::logic_error("param_names: unknown family");
}

}  // namespace

std::string mwd_spec_to_json(const MwdSpec& spec) {
    auto [n1, n2] = param_names(spec.family);
    std::string out = "{\"family\":\"" + family_name(spec.family) + "\",";
    out += "\"params\":{\"" + std::string(n1) + "\":" + num17(spec.p1) + ",\"" +
           std::string(n2) + "\":" + num17(spec.p2) + "},";
    out += "\"target_mn\":" + num17(spec.target_mn) + ",";
    out += "\"target_dispersity\":" + num17(spec.target_dispersity) + ",";
    out += "\"m0\":" + num17(spec.m0) + "}";
    return out;
}

MwdSpec mwd_spec_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    MwdSpec s;
    s.family = family_from_name(j.at("family").get<std::string>());
    auto [n1, n2] = param_names(s.family);
    const auto& p = j.at("params");
    s.p1 = p.at(n1).get<double>();
    s.p2 = p.at(n2).get<double>();
    s.target_mn = j.at("target_mn").get<double>();
    s.target_dispersity = j.at("target_dispersity").get<double>();
    s.m0 = j.at("m0").get<double>();
    return s;
}

}  // namespace polyset
