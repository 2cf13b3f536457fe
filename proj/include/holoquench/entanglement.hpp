#pragma once

#include "holoquench/graph.hpp"
#include "holoquench/phase_space.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace holo {

/// Williamson eigenvalues of a subsystem, sorted descending, all >= 1/2 - 1e-9.
struct SymplecticSpectrum {
    std::vector<double> values;
};

SymplecticSpectrum symplectic_spectrum(const Matrix &cov_sub);

/// Entropies in nats. Eigenvalues within 1e-9 below 1/2 are clamped; anything lower throws.
double von_neumann_entropy(const SymplecticSpectrum &spectrum);
/// Requires alpha > 0; alpha within 1e-6 of 1 falls back to von Neumann.
double renyi_entropy(const SymplecticSpectrum &spectrum, double alpha);

enum class Side { single, left, right };
enum class OffsetMode { single, averaged };
enum class Quadrature { x, p };

std::string_view to_string(Side side);
std::string_view to_string(OffsetMode mode);
OffsetMode       parse_offset_mode(std::string_view text);
std::string_view to_string(Quadrature q);

struct Interval {
    std::size_t start  = 0;
    std::size_t length = 1;
};

/// Union of intervals on one boundary ring. Intervals wrap around the ring and must
/// not overlap; the full ring is allowed.
struct Region {
    Side                  side = Side::single;
    std::vector<Interval> intervals;

    std::size_t              size() const;
    std::vector<std::size_t> positions(std::size_t ring_size) const;
};

/// Boundary state plus the ring structure needed to address regions. Ring entries
/// and the probe are mode indices into `state`.
struct BoundaryState {
    GaussianState                         state;
    std::vector<std::vector<std::size_t>> rings;
    std::optional<std::size_t>            probe;

    /// Maps graph node ids (rings, optional probe) to modes of a protocol output.
    static BoundaryState from_graph(GaussianState state, const CouplingGraph &graph);

    const std::vector<std::size_t> &ring(Side side) const;
    std::vector<std::size_t>        modes(const Region &region) const;
};

double subsystem_entropy(const GaussianState &state, std::span<const std::size_t> modes, double alpha = 1.0);
double region_entropy(const BoundaryState &bs, const Region &region, double alpha = 1.0);

struct CurveMetadata {
    std::string graph;
    double      mu      = 0.0;
    double      t       = 1.0;
    double      alpha   = 1.0;
    OffsetMode  offsets = OffsetMode::single;
    std::string kind    = "one_sided";
};

struct EntropyCurve {
    std::vector<double> ell;
    std::vector<double> entropy;
    std::size_t         ring_size = 0;
    CurveMetadata       meta;
};

/// S(l) for contiguous regions l = 1..L-1 on one ring, starting at ring index 0 or
/// averaged over all L starting offsets.
EntropyCurve region_entropy_curve(const BoundaryState &bs, double alpha = 1.0, OffsetMode offsets = OffsetMode::single,
                                  Side side = Side::single);

/// Same for the angle-aligned pair of intervals on the two wormhole rings.
EntropyCurve two_sided_entropy_curve(const BoundaryState &bs, double alpha = 1.0,
                                     OffsetMode offsets = OffsetMode::single);

double mutual_information(const GaussianState &state, std::span<const std::size_t> a, std::span<const std::size_t> b);
double mutual_information(const BoundaryState &bs, const Region &a, const Region &b);

struct CorrelationCurve {
    std::vector<double> separation;
    std::vector<double> covariance;  ///< Cov(phi_i, phi_{i+d}) averaged over i
    std::vector<double> correlation; ///< Cov / sqrt(Var Var) averaged over i
    std::size_t         ring_size  = 0;
    Quadrature          quadrature = Quadrature::x;
    CurveMetadata       meta;
};

CorrelationCurve correlation_curve(const BoundaryState &bs, Quadrature q, Side side = Side::single);

/// I({i}:{i+d}) averaged over i, d = 1..L-1, stored in the covariance column.
CorrelationCurve mutual_information_curve(const BoundaryState &bs, Side side = Side::single);

struct MiBoundReport {
    double mutual_information = 0.0;
    double corr_sq_x          = 0.0;
    double corr_sq_p          = 0.0;
    double one_minus_exp      = 0.0; ///< 1 - exp(-2I)
    double two_i              = 0.0;
    bool   satisfied_x        = false; ///< corr_x^2 <= 1 - exp(-2I) <= 2I
    bool   satisfied_p        = false;
};

/// Checks Corr(phi_i, phi_j)^2 <= 1 - e^{-2I} <= 2I for single modes i != j.
MiBoundReport mi_bound_report(const GaussianState &state, std::size_t i, std::size_t j);

} // namespace holo
