#pragma once

// Continuous molar-mass distributions p(M) fitted so that their first two
// averages match a prescribed (Mn, dispersity), plus their analytic
// higher-order averages. p(M) is a number-fraction density: Mn is its plain
// mean, and the weight/z/z+1 averages are ratios of consecutive raw moments.

#include <string>

namespace polyset {

enum class Family { Lognormal, SchulzZimm, Weibull };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// The five standard averages. mw/mn = dispersity by construction.
struct MomentSet {
    double mn = 0.0;
    double mw = 0.0;
    double dispersity = 0.0;
    double mz = 0.0;
    double mz1 = 0.0;
};

// A fitted distribution. Parameter meaning depends on the family:
//   Lognormal:  p1 = mu, p2 = sigma      (of ln M; sigma = 0 is the explicit
//                                         point mass used for dispersity 1)
//   SchulzZimm: p1 = k (shape), p2 = theta (scale), gamma density over M
//   Weibull:    p1 = a (shape), p2 = lambda (scale)
struct MwdSpec {
    Family family = Family::Lognormal;
    double p1 = 0.0;
    double p2 = 0.0;
    double target_mn = 0.0;
    double target_dispersity = 1.0;
    double m0 = 0.0;

    bool is_point_mass() const {
        return family == Family::Lognormal && p2 == 0.0;
    }
};

// sigma^2 = ln(dispersity), mu = ln(mn) - sigma^2 / 2.
// dispersity = 1 yields the explicit point mass (sigma = 0).
MwdSpec fit_lognormal(double mn, double dispersity, double m0);

// k = 1 / (dispersity - 1), theta = mn / k. Requires dispersity > 1.
MwdSpec fit_schulz_zimm(double mn, double dispersity, double m0);

// Shape a solves Gamma(1 + 2/a) / Gamma(1 + 1/a)^2 = dispersity by bisection
// on a in [0.05, 50]; lambda = mn / Gamma(1 + 1/a).
// Requires dispersity in [1.05, 20]. tol is the relative tolerance on a.
MwdSpec fit_weibull(double mn, double dispersity, double m0, double tol = 1e-12);

// Dispatch on family. dispersity = 1 routes to the lognormal point mass
// regardless of the requested family.
MwdSpec fit_family(Family family, double mn, double dispersity, double m0);

// Number-fraction density at m > 0. Rejects point-mass specs: callers handle
// dispersity 1 without evaluating a density.
double pdf(const MwdSpec& spec, double m);

// ln pdf, for tail evaluation without underflow. Same domain as pdf.
double log_pdf(const MwdSpec& spec, double m);

// Closed-form averages of the fitted continuous distribution.
MomentSet analytic_moments(const MwdSpec& spec);

// Grid support [ln m_lo, ln m_hi] covering span_sigmas standard deviations:
// mu +/- span*sigma for the lognormal; quantile bracket [q(eps), q(1 - eps)]
// with eps = max(Phi(-span), 1e-9) for the gamma and Weibull families, so the
// default span 8 reaches the stated 1e-9 tail mass and small spans give
// deliberately truncated windows.
struct LogMassBracket {
    double ln_lo;
    double ln_hi;
};
LogMassBracket support_bracket(const MwdSpec& spec, double span_sigmas);

// Self-describing JSON object {family, params: {..}, target_mn,
// target_dispersity, m0}. Params are named per family (mu/sigma, k/theta,
// a/lambda). Numbers carry 17 significant digits; round-trips are exact.
std::string mwd_spec_to_json(const MwdSpec& spec);
MwdSpec mwd_spec_from_json(const std::string& text);

}  // namespace polyset
