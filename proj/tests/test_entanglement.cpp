#include "holoquench/entanglement.hpp"
#include "holoquench/pipelines.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace holo;

namespace {

BoundaryState chain_boundary(int j12, int j23, double mu = 1.0) {
    CouplingGraph g;
    g.add_node(ModeRole::boundary);
    g.add_node(ModeRole::bulk);
    g.add_node(ModeRole::boundary);
    g.add_edge(0, 1, j12);
    g.add_edge(1, 2, j23);
    g.set_boundary_rings({{0, 2}});
    return run_boundary(g, mu);
}

BoundaryState product_boundary(std::size_t n, double mu) {
    std::vector<std::size_t> ring(n);
    for(std::size_t k = 0; k < n; ++k) ring[k] = k;
    return BoundaryState{make_initial_state(n, mu), {ring}, std::nullopt};
}

} // namespace

TEST(Spectrum, EntropyClosedForms) {
    EXPECT_EQ(von_neumann_entropy({{0.5}}), 0.0);
    EXPECT_NEAR(von_neumann_entropy({{1.5}}), 2.0 * std::numbers::ln2, 1e-15);
    EXPECT_NEAR(von_neumann_entropy({{1.5}}), 1.38629, 1e-5);
    EXPECT_NEAR(von_neumann_entropy({{0.5 - 5e-10}}), 0.0, 1e-15);
    EXPECT_THROW(von_neumann_entropy({{0.4}}), std::invalid_argument);
}

TEST(Spectrum, MatchesThermalLadderOracle) {
    std::mt19937_64 rng(3);
    for(int trial = 0; trial < 10; ++trial) {
        const Matrix      v         = oracle::random_pure_covariance(3, rng);
        const std::size_t mode[]    = {0};
        const Matrix      sub       = v(quadrature_indices(mode, 3), quadrature_indices(mode, 3));
        const double      nu        = std::sqrt(sub.determinant());
        const double      s         = von_neumann_entropy(symplectic_spectrum(sub));
        EXPECT_NEAR(s, oracle::thermal_ladder_entropy(nu), 1e-10 * std::max(1.0, s));
    }
}

TEST(Spectrum, RenyiTwoClosedForm) {
    for(double nu : {0.5, 0.7, 1.5, 12.0}) EXPECT_NEAR(renyi_entropy({{nu}}, 2.0), std::log(2 * nu), 1e-13);
    EXPECT_NEAR(renyi_entropy({{0.5}}, 2.0), 0.0, 1e-15);
    EXPECT_NEAR(renyi_entropy({{1.5, 0.9}}, 2.0), std::log(3.0) + std::log(1.8), 1e-13);
}

TEST(Spectrum, RenyiApproachesVonNeumann) {
    const double lo = renyi_entropy({{1.5}}, 1.0 - 1e-4), hi = renyi_entropy({{1.5}}, 1.0 + 1e-4);
    EXPECT_NEAR(0.5 * (lo + hi), 2.0 * std::numbers::ln2, 1e-6);
    EXPECT_EQ(renyi_entropy({{1.5}}, 1.0), von_neumann_entropy({{1.5}}));
}

TEST(Spectrum, RenyiLargeIndexIsFinite) {
    const double s = renyi_entropy({{40.0}}, 500.0);
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_NEAR(s, 500.0 / 499.0 * std::log(40.5) + std::log1p(-std::pow(39.5 / 40.5, 500.0)) / 499.0, 1e-12);
}

TEST(Spectrum, RenyiRejectsBadIndex) {
    EXPECT_THROW(renyi_entropy({{1.0}}, 0.0), std::invalid_argument);
    EXPECT_THROW(renyi_entropy({{1.0}}, -2.0), std::invalid_argument);
}

TEST(Spectrum, SymplecticSpectrumRejectsIndefinite) {
    EXPECT_THROW(symplectic_spectrum(-Matrix::Identity(2, 2)), std::invalid_argument);
}

TEST(RegionType, Validation) {
    EXPECT_EQ((Region{Side::single, {{6, 4}}}.positions(8)), (std::vector<std::size_t>{6, 7, 0, 1}));
    EXPECT_THROW((Region{Side::single, {{0, 3}, {2, 2}}}.positions(8)), std::invalid_argument);
    EXPECT_THROW((Region{Side::single, {{0, 0}}}.positions(8)), std::invalid_argument);
    EXPECT_THROW((Region{Side::single, {}}.positions(8)), std::invalid_argument);
    EXPECT_EQ((Region{Side::single, {{0, 8}}}.positions(8).size()), 8u);
}

TEST(RegionEntropy, ComplementSymmetryOnDisk) {
    const auto bs = run_boundary(build_disk_graph({4}), 0.2);
    const auto L  = bs.ring(Side::single).size();
    for(std::size_t l = 1; l < L; ++l) {
        const Region a{Side::single, {{3, l}}};
        const Region b{Side::single, {{3 + l, L - l}}};
        EXPECT_NEAR(region_entropy(bs, a), region_entropy(bs, b), 1e-8) << l;
    }
}

TEST(RegionEntropy, FullBoundaryIsPure) {
    const auto bs = run_boundary(build_disk_graph({4}), 0.2);
    EXPECT_NEAR(region_entropy(bs, Region{Side::single, {{0, 16}}}), 0.0, 1e-8);
}

TEST(RegionEntropy, CurveShapeAndOffsets) {
    const auto bs = run_boundary(build_disk_graph({3}), 0.2);
    const auto c  = region_entropy_curve(bs);
    ASSERT_EQ(c.ell.size(), 7u);
    for(std::size_t k = 0; k < c.ell.size(); ++k) {
        EXPECT_EQ(c.ell[k], static_cast<double>(k + 1));
        EXPECT_GE(c.entropy[k], -1e-9);
        EXPECT_NEAR(c.entropy[k], c.entropy[c.ell.size() - 1 - k], 1e-8);
    }
    const auto avg = region_entropy_curve(bs, 1.0, OffsetMode::averaged);
    double     manual = 0.0;
    for(std::size_t o = 0; o < 8; ++o) manual += region_entropy(bs, Region{Side::single, {{o, 3}}});
    EXPECT_NEAR(avg.entropy[2], manual / 8.0, 1e-13);
    EXPECT_EQ(avg.meta.offsets, OffsetMode::averaged);
}

TEST(MutualInformation, ComplementIsTwiceEntropy) {
    const auto   bs = run_boundary(build_disk_graph({3}), 0.2);
    const Region a{Side::single, {{0, 3}}}, b{Side::single, {{3, 5}}};
    EXPECT_NEAR(mutual_information(bs, a, b), 2.0 * region_entropy(bs, a), 1e-8);
}

TEST(MutualInformation, ProductStateIsZero) {
    const auto   bs = product_boundary(4, 0.3);
    const Region a{Side::single, {{0, 2}}}, b{Side::single, {{2, 2}}};
    EXPECT_NEAR(mutual_information(bs, a, b), 0.0, 1e-14);
}

TEST(MutualInformation, ProbeSaturatesAgainstWholeBoundary) {
    const auto g  = attach_probe(build_disk_graph({3}), 4);
    const auto bs = run_boundary(g, 1.0);
    ASSERT_TRUE(bs.probe);
    const std::size_t b[] = {*bs.probe};
    const auto       &ring = bs.ring(Side::single);
    EXPECT_NEAR(mutual_information(bs.state, ring, b), 2.0 * subsystem_entropy(bs.state, b), 1e-8);
}

TEST(MutualInformation, RejectsOverlap) {
    const auto   bs = product_boundary(4, 0.3);
    const Region a{Side::single, {{0, 2}}}, b{Side::single, {{1, 2}}};
    EXPECT_THROW(mutual_information(bs, a, b), std::invalid_argument);
}

TEST(Correlation, ChainCovariance) {
    for(int s : {-1, 1}) {
        const auto bs = chain_boundary(1, s);
        const auto c  = correlation_curve(bs, Quadrature::x);
        ASSERT_EQ(c.covariance.size(), 1u);
        EXPECT_NEAR(c.covariance[0], -s / 6.0, 1e-14);
    }
}

TEST(Correlation, ReflectionSymmetryAfterAveraging) {
    const auto bs = run_boundary(build_disk_graph({4}), 0.2);
    for(auto q : {Quadrature::x, Quadrature::p}) {
        const auto c = correlation_curve(bs, q);
        const auto L = c.ring_size;
        for(std::size_t d = 1; d < L; ++d) EXPECT_NEAR(c.covariance[d - 1], c.covariance[L - d - 1], 1e-12) << d;
    }
}

TEST(Correlation, DecoratedSignsAreUniform) {
    // Every x-x covariance has one sign at all separations (no alternation). The
    // sign itself is negative; see README for the derivation.
    const auto bs = run_boundary(build_decorated_disk(5), 0.05);
    const auto cx = correlation_curve(bs, Quadrature::x);
    for(double v : cx.covariance) EXPECT_LT(v, 0.0);
    const auto cp = correlation_curve(bs, Quadrature::p);
    for(double v : cp.covariance) EXPECT_GT(v, 0.0);
}

TEST(MiBounds, ProductStateIsTight) {
    const auto r = mi_bound_report(make_initial_state(2, 0.4), 0, 1);
    EXPECT_NEAR(r.mutual_information, 0.0, 1e-14);
    EXPECT_NEAR(r.corr_sq_x, 0.0, 1e-14);
    EXPECT_NEAR(r.one_minus_exp, 0.0, 1e-14);
    EXPECT_TRUE(r.satisfied_x);
    EXPECT_TRUE(r.satisfied_p);
}

TEST(MiBounds, HoldOnDiskDepth3) {
    const auto bs = run_boundary(build_disk_graph({3}), 0.2);
    for(std::size_t i = 0; i < 8; ++i)
        for(std::size_t j = i + 1; j < 8; ++j) {
            const auto r = mi_bound_report(bs.state, i, j);
            EXPECT_TRUE(r.satisfied_x && r.satisfied_p) << i << "," << j;
            EXPECT_GE(r.mutual_information, 0.0);
        }
    EXPECT_THROW(mi_bound_report(bs.state, 1, 1), std::invalid_argument);
}

TEST(BoundaryStateType, RingsFollowGraph) {
    const auto g  = build_wormhole_graph({4, 2, WormholeInterior::ring_bridge});
    const auto bs = run_boundary(g, 0.2);
    EXPECT_EQ(bs.ring(Side::left).size(), 16u);
    EXPECT_EQ(bs.ring(Side::right).size(), 16u);
    for(std::size_t k = 0; k < 16; ++k) {
        EXPECT_EQ(bs.state.layout().label(bs.ring(Side::left)[k]), g.boundary_rings()[0][k]);
        EXPECT_EQ(bs.state.layout().label(bs.ring(Side::right)[k]), g.boundary_rings()[1][k]);
    }
    const auto disk = run_boundary(build_disk_graph({3}), 0.2);
    EXPECT_THROW(disk.ring(Side::right), std::invalid_argument);
}

TEST(TwoSided, WormholeJointStateIsPureAndOneSideIsMixed) {
    const auto bs = run_boundary(build_wormhole_graph({5, 3, WormholeInterior::ring_bridge}), 0.2);
    std::vector<std::size_t> all = bs.ring(Side::left);
    all.insert(all.end(), bs.ring(Side::right).begin(), bs.ring(Side::right).end());
    EXPECT_NEAR(subsystem_entropy(bs.state, all), 0.0, 1e-8);
    EXPECT_GT(subsystem_entropy(bs.state, bs.ring(Side::left)), 0.1);
    const auto two = two_sided_entropy_curve(bs);
    EXPECT_EQ(two.meta.kind, "two_sided");
    const auto L = bs.ring(Side::left).size();
    for(std::size_t l : {std::size_t{3}, L / 2}) {
        std::vector<std::size_t> rest;
        for(std::size_t k = l; k < L; ++k) {
            rest.push_back(bs.ring(Side::left)[k]);
            rest.push_back(bs.ring(Side::right)[k]);
        }
        EXPECT_NEAR(two.entropy[l - 1], subsystem_entropy(bs.state, rest), 1e-8); // joint state is pure
    }
}
