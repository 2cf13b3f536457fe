#include "holoquench/errors.hpp"
#include "holoquench/pipelines.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace holo;

namespace {

ExperimentConfig config(const std::string &geometry, double mu, TaskKind task) {
    ExperimentConfig c;
    c.geometry = GeometrySpec::parse(geometry);
    c.mu       = mu;
    c.task     = task;
    return c;
}

double max_nu_deviation(const GaussianState &s) {
    double dev = 0.0;
    for(double nu : williamson_eigenvalues(s.covariance())) dev = std::max(dev, std::abs(nu - 0.5));
    return dev;
}

} // namespace

TEST(GeometrySpecType, ParseAndPrint) {
    EXPECT_EQ(GeometrySpec::parse("disk(5)").str(), "disk(5)");
    EXPECT_EQ(GeometrySpec::parse("wormhole(6,4)").str(), "wormhole(6,4,ring-bridge)");
    EXPECT_EQ(GeometrySpec::parse(" wormhole( 6 , 4 , identify )").interior, WormholeInterior::identify);
    EXPECT_EQ(GeometrySpec::parse("decorated_disk(5)").kind, GeometryKind::decorated_disk);
    EXPECT_THROW(GeometrySpec::parse("torus(3)"), std::invalid_argument);
    EXPECT_THROW(GeometrySpec::parse("disk(x)"), std::invalid_argument);
    EXPECT_THROW(GeometrySpec::parse("disk(3,4)"), std::invalid_argument);
}

TEST(Protocol, DiskDepth3IsPure) {
    const auto s = run_protocol(build_disk_graph({3}), 1.0);
    EXPECT_EQ(s.num_modes(), 8u);
    EXPECT_LT(max_nu_deviation(s), 1e-8);
}

TEST(Protocol, ChainMatchesHandConditioning) {
    CouplingGraph g;
    g.add_node(ModeRole::boundary);
    g.add_node(ModeRole::bulk);
    g.add_node(ModeRole::boundary);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    const auto   s = run_protocol(g, 1.0);
    const Matrix v = apply_quench(make_initial_state(3, 1.0), g.coupling_matrix(), 1.0).covariance();
    const Matrix want = oracle::precision_conditioning(v, {1});
    EXPECT_LT((s.covariance() - want).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(s.covariance()(0, 1), -1.0 / 6.0, 1e-14);
}

TEST(Protocol, NoCouplingLeavesProductState) {
    CouplingGraph g;
    for(int k = 0; k < 4; ++k) g.add_node(ModeRole::boundary);
    g.add_node(ModeRole::bulk);
    g.set_boundary_rings({{0, 1, 2, 3}});
    const auto bs = run_boundary(g, 0.3);
    const auto c  = region_entropy_curve(bs);
    for(double s : c.entropy) EXPECT_NEAR(s, 0.0, 1e-12);
    const auto init = make_initial_state(4, 0.3);
    EXPECT_LT((bs.state.covariance() - init.covariance()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Protocol, StrongSqueezingStaysPure) {
    // the measured momentum block is badly conditioned here (cond ~ 1e5)
    for(double mu : {0.01, 0.005}) {
        const auto s = run_protocol(build_decorated_disk(5), mu);
        EXPECT_LT(max_nu_deviation(s), 1e-10) << mu;
    }
}

TEST(Protocol, RejectsGraphsWithoutBulkOrBoundary) {
    CouplingGraph g;
    g.add_node(ModeRole::boundary);
    EXPECT_THROW(run_protocol(g, 1.0), std::invalid_argument);
}

TEST(EntropyScan, DiskProducesCurveAndFit) {
    const auto r = run_entropy_scan(config("disk(4)", 0.2, TaskKind::entropy_scan));
    EXPECT_EQ(r.curve.ell.size(), 15u);
    EXPECT_EQ(r.fit.model, ModelId::cft_disk);
    EXPECT_NEAR(r.fit.value("c"), 6.46, 0.01);
    EXPECT_NEAR(r.fit.value("eps"), 5.361, 0.001);
    EXPECT_NEAR(r.full_boundary_entropy, 0.0, 1e-8);
    EXPECT_FALSE(r.two_sided);
    EXPECT_EQ(r.curve.meta.graph, "disk(4)");
    EXPECT_EQ(r.curve.meta.mu, 0.2);
}

TEST(EntropyScan, DecoratedFit) {
    const auto r = run_entropy_scan(config("decorated_disk(5)", 0.05, TaskKind::entropy_scan));
    EXPECT_NEAR(r.fit.value("c"), 1.004, 0.009);
    EXPECT_NEAR(r.fit.value("eps"), 1.954, 0.002);
}

TEST(EntropyScan, WormholeFitsBothCurves) {
    const auto r = run_entropy_scan(config("wormhole(6,4)", 0.2, TaskKind::entropy_scan));
    ASSERT_TRUE(r.two_sided);
    EXPECT_EQ(r.fit.model, ModelId::btz_two_sided);
    EXPECT_EQ(r.curve.ring_size, 64u);
    EXPECT_NEAR(r.full_boundary_entropy, 0.0, 1e-8);
    ASSERT_TRUE(r.predicted_crossover && r.empirical_crossover);
    EXPECT_NEAR(*r.predicted_crossover, r.fit.value("beta") / M_PI * std::asinh(1.0), 1e-12);
    // one side alone is thermal, so its curve is not complement-symmetric
    EXPECT_GT(std::abs(r.curve.entropy[3] - r.curve.entropy[r.curve.entropy.size() - 4]), 0.1);
}

TEST(Crossover, SyntheticKinkIsLocated) {
    const BtzEntropyModel m{5.8, 2.1, 29.0, 64};
    EntropyCurve          c;
    c.ring_size = 64;
    for(int l = 1; l < 64; ++l) {
        c.ell.push_back(l);
        c.entropy.push_back(btz_two_sided_entropy(m, std::min(l, 64 - l)));
    }
    const double lstar = btz_two_sided_crossover(m);
    EXPECT_LE(std::abs(empirical_crossover(c) - lstar), 1.0);
    EXPECT_LT(plateau_flatness(c, lstar), 1e-12);
}

TEST(RenyiScan, RatiosDecreaseAndAlphaOneIsExact) {
    auto cfg   = config("disk(4)", 0.2, TaskKind::renyi_scan);
    cfg.alphas = {0.5, 1.0, 2.0, 3.0};
    cfg.mus    = {0.05, 0.2, 1.0};
    const auto t = run_renyi_scan(cfg);
    ASSERT_EQ(t.ratio.size(), 3u);
    for(const auto &row : t.ratio) {
        ASSERT_EQ(row.size(), 4u);
        EXPECT_EQ(row[1], 1.0);
        for(std::size_t a = 1; a < row.size(); ++a) EXPECT_LT(row[a], row[a - 1]);
    }
    EXPECT_EQ(t.cft_reference.size(), 4u);
    EXPECT_NEAR(t.cft_reference[2], 0.75, 1e-15);
}

TEST(SqueezeSweep, UndecoratedCentralChargeFallsWithMu) {
    auto cfg = config("disk(4)", 0.2, TaskKind::squeeze_sweep);
    cfg.mus  = {0.02, 0.05, 0.1, 0.2, 0.5, 0.2};
    const auto r = run_squeeze_sweep(cfg);
    ASSERT_EQ(r.fits.size(), 6u);
    for(std::size_t k = 1; k < 5; ++k) EXPECT_LT(r.fits[k].value("c"), r.fits[k - 1].value("c"));
    EXPECT_EQ(r.fits[3].value("c"), r.fits[5].value("c"));
    ASSERT_TRUE(r.log_fit);
    EXPECT_GT(r.log_fit->a, 0.0);
}

TEST(SqueezeSweep, DecoratedHasNoLogFit) {
    auto cfg = config("decorated_disk(4)", 0.2, TaskKind::squeeze_sweep);
    cfg.mus  = {0.05, 0.1, 0.5};
    EXPECT_FALSE(run_squeeze_sweep(cfg).log_fit);
}

TEST(CorrelationScan, DecoratedPowerLaws) {
    const auto r = run_correlation_scan(config("decorated_disk(5)", 0.05, TaskKind::correlation_scan));
    ASSERT_TRUE(r.fit_x.fit) << r.fit_x.failure;
    ASSERT_TRUE(r.fit_p.fit) << r.fit_p.failure;
    EXPECT_NEAR(r.fit_x.fit->value("Delta"), 0.87, 0.04);
    EXPECT_NEAR(r.fit_p.fit->value("Delta"), 0.0103, 0.001);
    EXPECT_LT(r.fit_x.fit->value("amplitude"), 0.0);
    EXPECT_EQ(r.x.ring_size, 16u);
}

TEST(MiScan, BoundsHoldOnDisk) {
    const auto r = run_mi_scan(config("disk(4)", 0.2, TaskKind::mi_scan));
    EXPECT_EQ(r.bounds.size(), 16u * 15u / 2u);
    for(const auto &b : r.bounds) EXPECT_TRUE(b.report.satisfied_x && b.report.satisfied_p) << b.i << "," << b.j;
}

TEST(ProbeMap, PresetRegions) {
    EXPECT_EQ(probe_preset_region(ProbePreset::small, 32).size(), 8u);
    EXPECT_EQ(probe_preset_region(ProbePreset::large, 32).size(), 20u);
    EXPECT_EQ(probe_preset_region(ProbePreset::two_disconnected, 32).intervals.size(), 2u);
    EXPECT_EQ(probe_preset_region(ProbePreset::full, 32).size(), 32u);
    EXPECT_THROW(probe_preset_region(ProbePreset::small, 8), std::invalid_argument);
    const auto spec = ProbeRegionSpec::parse("0:4/8:2");
    EXPECT_EQ(spec.resolve(16).size(), 6u);
    EXPECT_THROW(ProbeRegionSpec::parse("0-4"), std::invalid_argument);
}

TEST(ProbeMap, DiskDepth4) {
    auto cfg          = config("disk(4)", 1.0, TaskKind::probe_map);
    cfg.probe_regions = default_probe_regions();
    const auto r      = run_probe_map(cfg);
    ASSERT_EQ(r.maps.size(), 5u);
    for(const auto &map : r.maps) {
        EXPECT_EQ(map.entries.size(), 15u) << map.name; // one row per bulk node
        for(const auto &e : map.entries) {
            ASSERT_TRUE(e.normalized_mi);
            EXPECT_GE(*e.normalized_mi, -1e-9);
            EXPECT_LE(*e.normalized_mi, 2.0 + 1e-9);
            EXPECT_LE(e.mutual_information, 2 * e.probe_entropy + 1e-9);
        }
    }
    for(const auto &e : r.maps.back().entries) EXPECT_NEAR(*e.normalized_mi, 2.0, 1e-6);
    EXPECT_THROW(run_probe_map(config("decorated_disk(4)", 1.0, TaskKind::probe_map)), std::invalid_argument);
}

TEST(Experiment, DeterministicAndSampling) {
    auto cfg            = config("disk(3)", 0.2, TaskKind::entropy_scan);
    cfg.sample_outcomes = true;
    cfg.seed            = 9;
    const auto a = run_experiment(cfg), b = run_experiment(cfg);
    ASSERT_TRUE(a.entropy && b.entropy);
    EXPECT_EQ(a.entropy->curve.entropy, b.entropy->curve.entropy);
    ASSERT_TRUE(a.samples && b.samples);
    EXPECT_EQ(a.samples->outcomes, b.samples->outcomes);
    EXPECT_EQ(a.samples->outcomes.size(), 7);
    cfg.seed = 10;
    const auto c = run_experiment(cfg);
    EXPECT_EQ(c.entropy->curve.entropy, a.entropy->curve.entropy); // seed never reaches reported quantities
    EXPECT_NE(c.samples->outcomes, a.samples->outcomes);
}
