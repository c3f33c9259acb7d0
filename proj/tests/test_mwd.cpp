#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "polyset/mwd.hpp"
#include "polyset/special.hpp"

using namespace polyset;

TEST_CASE("family names round-trip") {
    for (Family f : {Family::Lognormal, Family::SchulzZimm, Family::Weibull}) {
        CHECK(family_from_name(family_name(f)) == f);
    }
    CHECK_THROWS_AS(family_from_name("gauss"), std::invalid_argument);
}

TEST_CASE("fit_lognormal reproduces the closed-form parameters") {
    MwdSpec s = fit_lognormal(1e5, 2.0, 100.0);
    CHECK(s.family == Family::Lognormal);
    CHECK(s.p1 == doctest::Approx(oracle::ln_1e5_d2_mu).epsilon(1e-14));
    CHECK(s.p2 == doctest::Approx(oracle::ln_1e5_d2_sigma).epsilon(1e-14));
    CHECK(s.target_mn == 1e5);
    CHECK(s.target_dispersity == 2.0);
    CHECK(s.m0 == 100.0);
    CHECK_FALSE(s.is_point_mass());

    MwdSpec t = fit_lognormal(1e6, 3.0, 100.0);
    CHECK(t.p1 == doctest::Approx(oracle::ln_1e6_d3_mu).epsilon(1e-14));
    CHECK(t.p2 * t.p2 == doctest::Approx(oracle::ln_1e6_d3_sigma2).epsilon(1e-14));

    MwdSpec u = fit_lognormal(1e4, 1.5, 100.0);
    CHECK(u.p1 == doctest::Approx(oracle::ln_1e4_d15_mu).epsilon(1e-14));
    CHECK(u.p2 == doctest::Approx(oracle::ln_1e4_d15_sigma).epsilon(1e-14));
}

TEST_CASE("dispersity 1 is the explicit point mass") {
    MwdSpec s = fit_lognormal(1e5, 1.0, 100.0);
    CHECK(s.is_point_mass());
    CHECK(s.p2 == 0.0);
    CHECK(s.p1 == doctest::Approx(std::log(1e5)).epsilon(1e-15));
    CHECK_THROWS_AS(pdf(s, 1e5), std::domain_error);
    CHECK_THROWS_AS(support_bracket(s, 8.0), std::domain_error);

    MomentSet m = analytic_moments(s);
    CHECK(m.mn == doctest::Approx(1e5).epsilon(1e-14));
    CHECK(m.mz1 == doctest::Approx(1e5).epsilon(1e-14));
    CHECK(m.dispersity == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("fit_schulz_zimm reproduces the closed-form parameters") {
    MwdSpec s = fit_schulz_zimm(1e5, 2.0, 100.0);
    CHECK(s.p1 == doctest::Approx(1.0).epsilon(1e-14));   // k
    CHECK(s.p2 == doctest::Approx(1e5).epsilon(1e-14));   // theta
    MwdSpec t = fit_schulz_zimm(1e6, 3.0, 100.0);
    CHECK(t.p1 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t.p2 == doctest::Approx(2e6).epsilon(1e-14));
    CHECK_THROWS_AS(fit_schulz_zimm(1e5, 1.0, 100.0), std::domain_error);
}

TEST_CASE("fit_weibull shapes match the reference solutions") {
    CHECK(fit_weibull(1e5, 1.1, 100.0).p1 ==
          doctest::Approx(oracle::wb_shape_d11).epsilon(1e-9));
    CHECK(fit_weibull(1e5, 1.5, 100.0).p1 ==
          doctest::Approx(oracle::wb_shape_d15).epsilon(1e-9));
    CHECK(fit_weibull(1e5, 2.0, 100.0).p1 ==
          doctest::Approx(oracle::wb_shape_d2).epsilon(1e-9));
    CHECK(fit_weibull(1e5, 3.0, 100.0).p1 ==
          doctest::Approx(oracle::wb_shape_d3).epsilon(1e-9));
    CHECK(fit_weibull(1e5, 4.0, 100.0).p1 ==
          doctest::Approx(oracle::wb_shape_d4).epsilon(1e-9));
    CHECK(fit_weibull(1e6, 3.0, 100.0).p2 ==
          doctest::Approx(oracle::wb_1e6_d3_lambda).epsilon(1e-9));
    CHECK_THROWS_AS(fit_weibull(1e5, 1.04, 100.0), std::domain_error);
    CHECK_THROWS_AS(fit_weibull(1e5, 21.0, 100.0), std::domain_error);
}

TEST_CASE("fit_family dispatches and routes dispersity 1 to the point mass") {
    CHECK(fit_family(Family::Lognormal, 1e5, 2.0, 100.0).family == Family::Lognormal);
    CHECK(fit_family(Family::SchulzZimm, 1e5, 2.0, 100.0).family == Family::SchulzZimm);
    CHECK(fit_family(Family::Weibull, 1e5, 2.0, 100.0).family == Family::Weibull);
    MwdSpec s = fit_family(Family::Weibull, 1e5, 1.0, 100.0);
    CHECK(s.is_point_mass());
}

TEST_CASE("fits reject bad inputs") {
    CHECK_THROWS_AS(fit_lognormal(0.0, 2.0, 100.0), std::domain_error);
    CHECK_THROWS_AS(fit_lognormal(1e5, 0.9, 100.0), std::domain_error);
    CHECK_THROWS_AS(fit_lognormal(1e5, 2.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(fit_lognormal(std::nan(""), 2.0, 100.0), std::domain_error);
}

TEST_CASE("analytic moments: lognormal ratios are powers of the dispersity") {
    MwdSpec s = fit_lognormal(1e6, 3.0, 100.0);
    MomentSet m = analytic_moments(s);
    CHECK(m.mn == doctest::Approx(1e6).epsilon(1e-12));
    CHECK(m.mw == doctest::Approx(3e6).epsilon(1e-12));
    CHECK(m.mz == doctest::Approx(9e6).epsilon(1e-12));
    CHECK(m.mz1 == doctest::Approx(27e6).epsilon(1e-12));
    CHECK(m.dispersity == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("analytic moments: Schulz-Zimm spacing is arithmetic in theta") {
    // Mz = Mn (2d - 1), Mz+1 = Mn (3d - 2).
    MwdSpec s = fit_schulz_zimm(1e6, 3.0, 100.0);
    MomentSet m = analytic_moments(s);
    CHECK(m.mn == doctest::Approx(1e6).epsilon(1e-12));
    CHECK(m.mw == doctest::Approx(3e6).epsilon(1e-12));
    CHECK(m.mz == doctest::Approx(5e6).epsilon(1e-12));
    CHECK(m.mz1 == doctest::Approx(7e6).epsilon(1e-12));
}

TEST_CASE("analytic moments: Weibull tail averages match the references") {
    MwdSpec s = fit_weibull(1e6, 3.0, 100.0);
    MomentSet m = analytic_moments(s);
    CHECK(m.mn == doctest::Approx(1e6).epsilon(1e-10));
    CHECK(m.dispersity == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(m.mz == doctest::Approx(oracle::wb_1e6_d3_mz).epsilon(1e-9));
    CHECK(m.mz1 == doctest::Approx(oracle::wb_1e6_d3_mz1).epsilon(1e-9));
}

TEST_CASE("moment ordering mn < mw < mz < mz1 whenever dispersity > 1") {
    for (double mn : {1e4, 1e5, 1e6}) {
        for (double d : {1.2, 1.5, 2.0, 3.0, 4.0}) {
            for (Family f : {Family::Lognormal, Family::SchulzZimm, Family::Weibull}) {
                MomentSet m = analytic_moments(fit_family(f, mn, d, 100.0));
                CHECK(m.mn < m.mw);
                CHECK(m.mw < m.mz);
                CHECK(m.mz < m.mz1);
                CHECK(m.mn == doctest::Approx(mn).epsilon(1e-9));
                CHECK(m.dispersity == doctest::Approx(d).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("densities integrate to 1 over a wide log-mass window") {
    // Simpson in t = ln m with the log-space Jacobian p(e^t) e^t.
    auto integral = [](const MwdSpec& spec) {
        LogMassBracket b = support_bracket(spec, 12.0);
        const int n = 20000;
        double h = (b.ln_hi - b.ln_lo) / n;
        double sum = 0.0;
        for (int i = 0; i <= n; ++i) {
            double t = b.ln_lo + i * h;
            double f = std::exp(log_pdf(spec, std::exp(t)) + t);
            double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            sum += w * f;
        }
        return sum * h / 3.0;
    };
    CHECK(integral(fit_lognormal(1e5, 2.0, 100.0)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(integral(fit_schulz_zimm(1e6, 3.0, 100.0)) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(integral(fit_weibull(1e4, 1.5, 100.0)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("pdf agrees with exp(log_pdf) and the gamma reference value") {
    MwdSpec s = fit_schulz_zimm(1e5, 2.0, 100.0);  // k = 1, theta = 1e5
    CHECK(pdf(s, 1e5) == doctest::Approx(oracle::gamma_pdf_k1_t1e5_at_1e5).epsilon(1e-12));
    for (double m : {1e3, 5e4, 2e5, 3e6}) {
        CHECK(pdf(s, m) == doctest::Approx(std::exp(log_pdf(s, m))).epsilon(1e-14));
    }
    CHECK_THROWS_AS(pdf(s, 0.0), std::domain_error);
    CHECK_THROWS_AS(pdf(s, -1.0), std::domain_error);
}

TEST_CASE("support_bracket: lognormal window is mu +/- span sigma") {
    MwdSpec s = fit_lognormal(1e5, 2.0, 100.0);
    LogMassBracket b = support_bracket(s, 3.0);
    CHECK(b.ln_lo == doctest::Approx(s.p1 - 3.0 * s.p2).epsilon(1e-14));
    CHECK(b.ln_hi == doctest::Approx(s.p1 + 3.0 * s.p2).epsilon(1e-14));
    CHECK_THROWS_AS(support_bracket(s, 0.0), std::domain_error);
}

TEST_CASE("support_bracket: quantile windows hold the right tail mass") {
    // For span s the window should cut tails of mass max(Phi(-s), 1e-9).
    MwdSpec sz = fit_schulz_zimm(1e5, 2.0, 100.0);  // k=1: P(1, x) = 1 - e^-x
    LogMassBracket b = support_bracket(sz, 0.5);
    double eps = norm_cdf(-0.5);
    CHECK(1.0 - std::exp(-std::exp(b.ln_lo) / sz.p2) == doctest::Approx(eps).epsilon(1e-9));
    CHECK(1.0 - std::exp(-std::exp(b.ln_hi) / sz.p2) ==
          doctest::Approx(1.0 - eps).epsilon(1e-9));

    // Span 8 saturates at the 1e-9 floor.
    LogMassBracket wide = support_bracket(sz, 8.0);
    CHECK(1.0 - std::exp(-std::exp(wide.ln_lo) / sz.p2) ==
          doctest::Approx(1e-9).epsilon(1e-6));

    MwdSpec wb = fit_weibull(1e5, 2.0, 100.0);  // a = 1: exponential again
    LogMassBracket wbb = support_bracket(wb, 0.5);
    CHECK(1.0 - std::exp(-std::exp(wbb.ln_lo) / wb.p2) ==
          doctest::Approx(eps).epsilon(1e-9));

    // Wider spans strictly widen the window.
    double prev_lo = wbb.ln_lo, prev_hi = wbb.ln_hi;
    for (double span : {1.0, 2.0, 4.0, 6.0}) {
        LogMassBracket w = support_bracket(wb, span);
        CHECK(w.ln_lo < prev_lo);
        CHECK(w.ln_hi > prev_hi);
        prev_lo = w.ln_lo;
        prev_hi = w.ln_hi;
    }
}

TEST_CASE("spec JSON round-trips bit-exactly") {
    for (const MwdSpec& s :
         {fit_lognormal(1e5, 2.0, 100.0), fit_schulz_zimm(12345.678, 2.71, 50.0),
          fit_weibull(987654.321, 3.3, 14.0), fit_lognormal(1e4, 1.0, 100.0)}) {
        MwdSpec r = mwd_spec_from_json(mwd_spec_to_json(s));
        CHECK(r.family == s.family);
        CHECK(r.p1 == s.p1);
        CHECK(r.p2 == s.p2);
        CHECK(r.target_mn == s.target_mn);
        CHECK(r.target_dispersity == s.target_dispersity);
        CHECK(r.m0 == s.m0);
    }
    CHECK(mwd_spec_to_json(fit_lognormal(1e5, 2.0, 100.0)).find("\"mu\"") !=
          std::string::npos);
    CHECK(mwd_spec_to_json(fit_weibull(1e5, 2.0, 100.0)).find("\"lambda\"") !=
          std::string::npos);
    CHECK_THROWS(mwd_spec_from_json("{\"family\":\"lognormal\"}"));
    CHECK_THROWS(mwd_spec_from_json("not json"));
}
