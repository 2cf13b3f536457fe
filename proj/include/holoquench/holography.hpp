#pragma once

#include "holoquench/entanglement.hpp"

#include <optional>
#include <vector>

// Closed-form holographic entropy models, in boundary-site units (angle 2 pi l / L).

namespace holo {

/// Point of the (2+2)-signature embedding space, -T1^2 - T2^2 + X1^2 + X2^2 = -ell^2.
struct EmbeddingPoint {
    double t1 = 0.0, t2 = 0.0, x1 = 0.0, x2 = 0.0;

    double hyperboloid_residual(double ell) const;

    /// Constant-time slice of global AdS3 at radius r, angle theta.
    static EmbeddingPoint ads3(double r, double theta, double ell);
    /// t = 0 slice of the non-rotating BTZ exterior (r >= r_plus). `side` = +1 or -1
    /// selects the exterior region; phi is the (unwrapped) angle.
    static EmbeddingPoint btz(double r, double phi, double r_plus, double ell, int side = +1);
};

/// ell * arccosh(-P.Q / ell^2); the argument is clamped to 1 within 1e-9. Points must
/// be on the hyperboloid to 1e-9 relative to max(ell^2, |P|^2).
double geodesic_distance(const EmbeddingPoint &p, const EmbeddingPoint &q, double ell);

struct CftEntropyModel {
    double c   = 1.0;
    double eps = 0.0;
    double L   = 1.0;
};

/// (c/3) ln sin(pi l / L) + eps, for 0 < l < L.
double cft_ground_state_entropy(const CftEntropyModel &model, double ell);

struct BtzEntropyModel {
    double c    = 1.0;
    double eps  = 0.0;
    double beta = 1.0;
    double L    = 1.0;
};

/// ln sinh(x) for x > 0, stable for small and large x.
double log_sinh(double x);

/// Connected branch (c/3) ln[(beta/pi) sinh(pi l / beta)] + eps.
double btz_connected_branch(const BtzEntropyModel &m, double ell);
/// Horizon-wrapping branch S_th + (c/3) ln[(beta/pi) sinh(pi (L - l) / beta)] + eps.
double btz_wrapping_branch(const BtzEntropyModel &m, double ell);
/// Thermal entropy of one side, pi c L / (3 beta).
double btz_thermal_entropy(const BtzEntropyModel &m);

/// min of the two branches, for 0 < l < L.
double btz_one_sided_entropy(const BtzEntropyModel &m, double ell);
/// Region size where the two branches meet: (beta / 2pi) ln((1 + e^{2 pi L / beta}) / 2).
double btz_one_sided_crossover(const BtzEntropyModel &m);

/// l* = (beta / pi) asinh(1), where the two-sided candidates exchange.
double btz_two_sided_crossover(const BtzEntropyModel &m);
/// Connected branch at l*, i.e. (c/3) ln(beta / pi) + eps.
double btz_default_plateau(const BtzEntropyModel &m);
/// 2 min(S_connected(l), plateau); plateau defaults to btz_default_plateau.
double btz_two_sided_entropy(const BtzEntropyModel &m, double ell, std::optional<double> plateau = std::nullopt);

struct Point2 {
    double x = 0.0, y = 0.0;
};

/// Geodesic of the Poincare disk between boundary angles `from` and `to`: a circle
/// orthogonal to the unit circle, or a diameter for antipodal endpoints.
struct GeodesicArc {
    double from     = 0.0;
    double to       = 0.0;
    bool   diameter = false;
    Point2 center;
    double radius = 0.0;

    Point2              start() const;
    Point2              end() const;
    std::vector<Point2> polyline(int points = 65) const;
};

GeodesicArc rt_geodesic_arc(double from, double to);

/// Boundary angles (a, b), counter-clockwise from a to b, for each interval of a
/// region on a ring of L sites. Site s covers angles ((s - 1/2), (s + 1/2)) * 2 pi / L.
std::vector<std::pair<double, double>> region_angles(const Region &region, std::size_t L);

/// RT candidates for a one- or two-interval region. For one interval both lists are
/// the same single arc. `log_length_*` is the cutoff-independent part of the summed
/// hyperbolic lengths (sum of 2 ln sin(w/2) over arcs).
struct RtCandidateSet {
    std::vector<GeodesicArc> disconnected;
    std::vector<GeodesicArc> connected;
    double                   log_length_disconnected = 0.0;
    double                   log_length_connected    = 0.0;
    bool                     connected_minimal       = false;

    const std::vector<GeodesicArc> &minimal() const { return connected_minimal ? connected : disconnected; }
};

RtCandidateSet rt_candidates(const Region &region, std::size_t L);

enum class WedgeSide { inside, on_surface, outside };

/// Position of a disk point relative to the entanglement wedge of the region's
/// minimal RT surface. Points within 1e-12 of the surface are `on_surface`.
WedgeSide entanglement_wedge_side(const Region &region, std::size_t L, Point2 p);

} // namespace holo
