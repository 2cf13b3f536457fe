#include "holoquench/errors.hpp"
#include "holoquench/fitting.hpp"
#include "holoquench/holography.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace holo;

namespace {

constexpr double kPi = std::numbers::pi;

EntropyCurve cft_curve(double c, double eps, std::size_t L) {
    EntropyCurve curve;
    curve.ring_size = L;
    for(std::size_t l = 1; l < L; ++l) {
        curve.ell.push_back(static_cast<double>(l));
        curve.entropy.push_back(cft_ground_state_entropy({c, eps, static_cast<double>(L)}, static_cast<double>(l)));
    }
    return curve;
}

EntropyCurve btz_curve(const BtzEntropyModel &m) {
    EntropyCurve curve;
    curve.ring_size = static_cast<std::size_t>(m.L);
    for(std::size_t l = 1; l < curve.ring_size; ++l) {
        curve.ell.push_back(static_cast<double>(l));
        curve.entropy.push_back(btz_one_sided_entropy(m, static_cast<double>(l)));
    }
    return curve;
}

EntropyCurve two_sided_curve(const BtzEntropyModel &m, double plateau) {
    EntropyCurve curve = btz_curve(m);
    curve.meta.kind    = "two_sided";
    for(std::size_t i = 0; i < curve.ell.size(); ++i) {
        const double l   = std::min(curve.ell[i], m.L - curve.ell[i]);
        curve.entropy[i] = btz_two_sided_entropy(m, l, plateau);
    }
    return curve;
}

CorrelationCurve power_curve(double delta, double amp, std::size_t L) {
    CorrelationCurve curve;
    curve.ring_size = L;
    for(std::size_t d = 1; d < L; ++d) {
        curve.separation.push_back(static_cast<double>(d));
        const double v = amp * std::pow(std::sin(kPi * d / L), -2 * delta);
        curve.covariance.push_back(v);
        curve.correlation.push_back(v);
    }
    return curve;
}

void add_noise(std::vector<double> &v, std::mt19937_64 &rng, double sigma) {
    std::normal_distribution<double> g(0.0, sigma);
    for(auto &x : v) x += g(rng);
}

bool within(const FitResult &f, const char *name, double truth, double k = 3.0) {
    return std::abs(f.value(name) - truth) <= k * f.error(name);
}

} // namespace

TEST(CftFit, ExactRecovery) {
    const auto f = fit_cft_entropy(cft_curve(6.5, 5.36, 64));
    EXPECT_NEAR(f.value("c"), 6.5, 1e-10);
    EXPECT_NEAR(f.value("eps"), 5.36, 1e-10);
    EXPECT_LT(f.residual_norm, 1e-10);
    EXPECT_EQ(f.model, ModelId::cft_disk);
    EXPECT_EQ(f.domain.size(), 63u);
    for(const auto &p : f.params) EXPECT_GE(p.std_error, 0.0);
}

TEST(CftFit, MarginRestrictsDomain) {
    const auto f = fit_cft_entropy(cft_curve(1.0, 2.0, 16), 2);
    EXPECT_EQ(f.domain.front(), 3.0);
    EXPECT_EQ(f.domain.back(), 13.0);
}

TEST(CftFit, SingularDesignIsDegenerate) {
    EntropyCurve curve;
    curve.ring_size = 16;
    curve.ell       = {8, 8, 8, 8, 8};
    curve.entropy   = {1, 2, 1, 2, 1};
    EXPECT_THROW(fit_cft_entropy(curve), DegenerateFitError);
}

TEST(CftFit, NoiseRobustness) {
    std::mt19937_64 rng(1);
    int             hits_c = 0, hits_eps = 0;
    for(int trial = 0; trial < 100; ++trial) {
        auto curve = cft_curve(6.5, 5.36, 32);
        add_noise(curve.entropy, rng, 0.01);
        const auto f = fit_cft_entropy(curve);
        hits_c += within(f, "c", 6.5);
        hits_eps += within(f, "eps", 5.36);
    }
    EXPECT_GE(hits_c, 95);
    EXPECT_GE(hits_eps, 95);
}

TEST(BtzFit, ExactRecovery) {
    const BtzEntropyModel m{5.8, 2.1, 29.0, 64};
    const auto            f = fit_btz_entropy(btz_curve(m));
    EXPECT_NEAR(f.value("c"), 5.8, 1e-8);
    EXPECT_NEAR(f.value("eps"), 2.1, 1e-8);
    EXPECT_NEAR(f.value("beta"), 29.0, 1e-8);
    EXPECT_LT(f.residual_norm, 1e-8);
    EXPECT_EQ(f.model, ModelId::btz_one_sided);
}

TEST(BtzFit, ExactRecoveryAcrossTemperatures) {
    for(double beta : {6.0, 12.0, 40.0, 90.0}) {
        const BtzEntropyModel m{3.0, 1.0, beta, 64};
        const auto            f = fit_btz_entropy(btz_curve(m));
        EXPECT_NEAR(f.value("beta"), beta, 1e-8 * beta) << beta;
        EXPECT_NEAR(f.value("c"), 3.0, 1e-8) << beta;
    }
}

TEST(BtzFit, PlateauCoFit) {
    const BtzEntropyModel m{5.8, 2.1, 29.0, 64};
    const double          plateau = btz_default_plateau(m) + 0.3;
    const auto            two     = two_sided_curve(m, plateau);
    BtzFitOptions         opt;
    opt.fit_plateau = true;
    const auto f    = fit_btz_entropy(btz_curve(m), &two, opt);
    EXPECT_EQ(f.model, ModelId::btz_two_sided);
    EXPECT_NEAR(f.value("plateau"), plateau, 1e-8);
    EXPECT_LT(f.residual_norm, 1e-8);
    EXPECT_THROW(fit_btz_entropy(btz_curve(m), nullptr, opt), std::invalid_argument);
}

TEST(BtzFit, NonConvergenceReportsBestIterate) {
    const BtzEntropyModel m{5.8, 2.1, 29.0, 64};
    auto                  curve = btz_curve(m);
    std::mt19937_64       rng(3);
    add_noise(curve.entropy, rng, 0.05);
    BtzFitOptions opt;
    opt.max_iterations = 1;
    try {
        fit_btz_entropy(curve, nullptr, opt);
        FAIL() << "expected FitFailure";
    } catch(const FitFailure &e) {
        EXPECT_EQ(e.best().params.size(), 3u);
        EXPECT_TRUE(std::isfinite(e.best().value("beta")));
    }
}

TEST(BtzFit, NoiseRobustness) {
    const BtzEntropyModel m{5.8, 2.1, 29.0, 64};
    std::mt19937_64       rng(2);
    int                   hits_c = 0, hits_eps = 0, hits_beta = 0;
    for(int trial = 0; trial < 100; ++trial) {
        auto curve = btz_curve(m);
        add_noise(curve.entropy, rng, 0.01);
        const auto f = fit_btz_entropy(curve);
        hits_c += within(f, "c", 5.8);
        hits_eps += within(f, "eps", 2.1);
        hits_beta += within(f, "beta", 29.0);
    }
    EXPECT_GE(hits_c, 95);
    EXPECT_GE(hits_eps, 95);
    EXPECT_GE(hits_beta, 95);
}

TEST(BtzFit, Deterministic) {
    const BtzEntropyModel m{5.8, 2.1, 29.0, 64};
    auto                  curve = btz_curve(m);
    std::mt19937_64       rng(4);
    add_noise(curve.entropy, rng, 0.02);
    const auto a = fit_btz_entropy(curve), b = fit_btz_entropy(curve);
    ASSERT_EQ(a.params.size(), b.params.size());
    for(std::size_t i = 0; i < a.params.size(); ++i) {
        EXPECT_EQ(a.params[i].value, b.params[i].value);
        EXPECT_EQ(a.params[i].std_error, b.params[i].std_error);
    }
    EXPECT_EQ(a.residuals, b.residuals);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(PowerLawFit, DomainSelection) {
    EXPECT_EQ(power_law_domain(16), (std::vector<double>{8, 7, 9, 6, 10})); // largest sin(pi d / L) first
    EXPECT_EQ(power_law_domain(64).size(), 21u);
    EXPECT_THROW(power_law_domain(3), std::invalid_argument);
}

TEST(PowerLawFit, ExactRecovery) {
    for(double delta : {1.0, 0.87, 0.0103}) {
        const auto f = fit_power_law(power_curve(delta, 0.3, 64));
        EXPECT_NEAR(f.value("Delta"), delta, 1e-10);
        EXPECT_NEAR(f.value("amplitude"), 0.3, 1e-10);
        EXPECT_LT(f.residual_norm, 1e-10);
    }
}

TEST(PowerLawFit, NegativeValuesKeepSign) {
    const auto f = fit_power_law(power_curve(0.5, -0.2, 32));
    EXPECT_NEAR(f.value("Delta"), 0.5, 1e-10);
    EXPECT_NEAR(f.value("amplitude"), -0.2, 1e-10);
}

TEST(PowerLawFit, MixedSignsNameSeparations) {
    auto curve = power_curve(1.0, 1.0, 16);
    curve.covariance[5] *= -1; // d = 6
    try {
        fit_power_law(curve);
        FAIL() << "expected FitFailure";
    } catch(const FitFailure &e) {
        EXPECT_NE(std::string(e.what()).find("6"), std::string::npos) << e.what();
    }
    curve.covariance[5] = 0.0;
    EXPECT_THROW(fit_power_law(curve), FitFailure);
}

TEST(PowerLawFit, NoiseRobustness) {
    std::mt19937_64 rng(5);
    int             hits = 0;
    for(int trial = 0; trial < 100; ++trial) {
        auto curve = power_curve(1.0, 1.0, 64);
        add_noise(curve.covariance, rng, 0.01);
        hits += within(fit_power_law(curve), "Delta", 1.0);
    }
    EXPECT_GE(hits, 95);
}

TEST(FitResultType, Accessors) {
    const auto f = fit_cft_entropy(cft_curve(1.0, 0.0, 16));
    EXPECT_THROW(f.value("beta"), std::out_of_range);
    EXPECT_EQ(parse_model_id("btz_two_sided"), ModelId::btz_two_sided);
    EXPECT_EQ(to_string(ModelId::power_law), "power_law");
    EXPECT_THROW(parse_model_id("gaussian"), std::invalid_argument);
}
