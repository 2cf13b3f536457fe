#include "holoquench/holography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace holo {

namespace {

constexpr double kPi     = std::numbers::pi;
constexpr double kTwoPi  = 2.0 * std::numbers::pi;
constexpr double kOnArc  = 1e-12;
constexpr double kClampA = 1e-9;

void check_cft(const CftEntropyModel &m, double ell) {
    if(!(m.c > 0.0)) throw std::invalid_argument("central charge must be positive");
    if(!(m.L > 0.0)) throw std::invalid_argument("boundary size must be positive");
    if(!(ell > 0.0 && ell < m.L)) throw std::invalid_argument("region size must lie in (0, L)");
}

void check_btz(const BtzEntropyModel &m) {
    if(!(m.c > 0.0)) throw std::invalid_argument("central charge must be positive");
    if(!(m.beta > 0.0)) throw std::invalid_argument("inverse temperature must be positive");
    if(!(m.L > 0.0)) throw std::invalid_argument("boundary size must be positive");
}

void check_btz(const BtzEntropyModel &m, double ell) {
    check_btz(m);
    if(!(ell > 0.0 && ell < m.L)) throw std::invalid_argument("region size must lie in (0, L)");
}

double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    return r < 0 ? r + kTwoPi : r;
}

Point2 on_circle(double a) { return {std::cos(a), std::sin(a)}; }

double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Boundary interval in sites: covers ring cells start .. start+len-1.
struct SiteInterval {
    std::size_t start, len;
};

double angle_of_cell_edge(double s, std::size_t L) { return wrap_angle((s - 0.5) * kTwoPi / static_cast<double>(L)); }

GeodesicArc arc_over(const SiteInterval &iv, std::size_t L) {
    return rt_geodesic_arc(angle_of_cell_edge(static_cast<double>(iv.start), L),
                           angle_of_cell_edge(static_cast<double>(iv.start + iv.len), L));
}

double log_length(std::size_t len, std::size_t L) {
    return 2.0 * std::log(std::sin(kPi * static_cast<double>(len) / static_cast<double>(L)));
}

// Positive inside the wedge of a single boundary interval, negative outside.
double interval_wedge(const SiteInterval &iv, std::size_t L, Point2 p) {
    if(iv.len == 0) return -std::numeric_limits<double>::infinity();
    if(iv.len >= L) return std::numeric_limits<double>::infinity();
    const double w   = kTwoPi * static_cast<double>(iv.len) / static_cast<double>(L);
    const auto   arc = arc_over(iv, L);
    if(arc.diameter) {
        const Point2 mid = on_circle(arc.from + 0.5 * w);
        return p.x * mid.x + p.y * mid.y;
    }
    const double d = dist(p, arc.center) - arc.radius;
    return w < kPi ? -d : d;
}

std::vector<SiteInterval> site_intervals(const Region &region, std::size_t L) {
    region.positions(L); // validates overlap and sizes
    std::vector<SiteInterval> out;
    for(const auto &iv : region.intervals) out.push_back({iv.start % L, iv.length});
    return out;
}

// The two gaps between a pair of disjoint intervals, as intervals in sites.
std::pair<SiteInterval, SiteInterval> gaps(const SiteInterval &a, const SiteInterval &b, std::size_t L) {
    const std::size_t end_a = (a.start + a.len) % L, end_b = (b.start + b.len) % L;
    return {{end_a, (b.start + L - end_a) % L}, {end_b, (a.start + L - end_b) % L}};
}

} // namespace

double EmbeddingPoint::hyperboloid_residual(double ell) const {
    return std::abs(-t1 * t1 - t2 * t2 + x1 * x1 + x2 * x2 + ell * ell);
}

EmbeddingPoint EmbeddingPoint::ads3(double r, double theta, double ell) {
    if(!(ell > 0.0) || r < 0.0) throw std::invalid_argument("need ell > 0 and r >= 0");
    return {std::sqrt(ell * ell + r * r), 0.0, r * std::cos(theta), r * std::sin(theta)};
}

EmbeddingPoint EmbeddingPoint::btz(double r, double phi, double r_plus, double ell, int side) {
    if(!(ell > 0.0) || !(r_plus > 0.0)) throw std::invalid_argument("need ell > 0 and r_plus > 0");
    if(r < r_plus) throw std::invalid_argument("BTZ embedding covers r >= r_plus only");
    if(side != 1 && side != -1) throw std::invalid_argument("side must be +1 or -1");
    const double a = ell * r / r_plus;
    const double k = r_plus * phi / ell;
    const double h = ell * std::sqrt(std::max(r * r / (r_plus * r_plus) - 1.0, 0.0));
    return {a * std::cosh(k), 0.0, a * std::sinh(k), side * h};
}

double geodesic_distance(const EmbeddingPoint &p, const EmbeddingPoint &q, double ell) {
    if(!(ell > 0.0)) throw std::invalid_argument("AdS radius must be positive");
    // residual tolerance scales with the coordinates, which cancel to -ell^2
    auto tol = [&](const EmbeddingPoint &e) {
        return 1e-9 * std::max(ell * ell, e.t1 * e.t1 + e.t2 * e.t2 + e.x1 * e.x1 + e.x2 * e.x2);
    };
    if(p.hyperboloid_residual(ell) > tol(p) || q.hyperboloid_residual(ell) > tol(q))
        throw std::invalid_argument("embedding point is off the hyperboloid");
    const double arg = (p.t1 * q.t1 + p.t2 * q.t2 - p.x1 * q.x1 - p.x2 * q.x2) / (ell * ell);
    if(arg < 1.0 - kClampA) throw std::invalid_argument("points are not joined by a spacelike geodesic");
    if(arg > 2.0) return ell * std::acosh(arg);
    // near-coincident points: cosh d - 1 = (P - Q)^2 / (2 ell^2), so d = 2 ell asinh(|P - Q| / (2 ell))
    const double dt1 = p.t1 - q.t1, dt2 = p.t2 - q.t2, dx1 = p.x1 - q.x1, dx2 = p.x2 - q.x2;
    const double sep = -dt1 * dt1 - dt2 * dt2 + dx1 * dx1 + dx2 * dx2;
    return 2.0 * ell * std::asinh(std::sqrt(std::max(sep, 0.0)) / (2.0 * ell));
}

double cft_ground_state_entropy(const CftEntropyModel &m, double ell) {
    check_cft(m, ell);
    // fold onto l <= L/2 so that S(l) = S(L - l) holds bit for bit
    return m.c / 3.0 * std::log(std::sin(kPi * std::min(ell, m.L - ell) / m.L)) + m.eps;
}

double log_sinh(double x) {
    if(!(x > 0.0)) throw std::invalid_argument("log_sinh needs x > 0");
    if(x > 20.0) return x - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * x));
    return std::log(std::sinh(x));
}

double btz_connected_branch(const BtzEntropyModel &m, double ell) {
    check_btz(m, ell);
    return m.c / 3.0 * (std::log(m.beta / kPi) + log_sinh(kPi * ell / m.beta)) + m.eps;
}

double btz_thermal_entropy(const BtzEntropyModel &m) {
    check_btz(m);
    return kPi * m.c * m.L / (3.0 * m.beta);
}

double btz_wrapping_branch(const BtzEntropyModel &m, double ell) {
    check_btz(m, ell);
    return btz_thermal_entropy(m) + m.c / 3.0 * (std::log(m.beta / kPi) + log_sinh(kPi * (m.L - ell) / m.beta)) +
           m.eps;
}

double btz_one_sided_entropy(const BtzEntropyModel &m, double ell) {
    return std::min(btz_connected_branch(m, ell), btz_wrapping_branch(m, ell));
}

double btz_one_sided_crossover(const BtzEntropyModel &m) {
    check_btz(m);
    const double a2 = kTwoPi * m.L / m.beta; // ln((1 + e^{a2}) / 2) without overflow
    return m.beta / kTwoPi * (a2 + std::log1p(std::exp(-a2)) - std::numbers::ln2);
}

double btz_two_sided_crossover(const BtzEntropyModel &m) {
    check_btz(m);
    return m.beta / kPi * std::asinh(1.0);
}

double btz_default_plateau(const BtzEntropyModel &m) {
    check_btz(m);
    return m.c / 3.0 * std::log(m.beta / kPi) + m.eps;
}

double btz_two_sided_entropy(const BtzEntropyModel &m, double ell, std::optional<double> plateau) {
    const double p = plateau ? *plateau : btz_default_plateau(m);
    return 2.0 * std::min(btz_connected_branch(m, ell), p);
}

Point2 GeodesicArc::start() const { return on_circle(from); }
Point2 GeodesicArc::end() const { return on_circle(to); }

std::vector<Point2> GeodesicArc::polyline(int points) const {
    if(points < 2) throw std::invalid_argument("polyline needs at least 2 points");
    std::vector<Point2> out;
    const Point2        s = start(), e = end();
    if(diameter) {
        for(int k = 0; k < points; ++k) {
            const double u = static_cast<double>(k) / (points - 1);
            out.push_back({s.x + u * (e.x - s.x), s.y + u * (e.y - s.y)});
        }
        return out;
    }
    const double ps = std::atan2(s.y - center.y, s.x - center.x);
    const double pe = std::atan2(e.y - center.y, e.x - center.x);
    const double dp = std::remainder(pe - ps, kTwoPi);
    for(int k = 0; k < points; ++k) {
        const double a = ps + dp * static_cast<double>(k) / (points - 1);
        out.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    out.front() = s;
    out.back()  = e;
    return out;
}

GeodesicArc rt_geodesic_arc(double from, double to) {
    GeodesicArc arc;
    arc.from       = wrap_angle(from);
    arc.to         = wrap_angle(to);
    const double w = wrap_angle(arc.to - arc.from);
    if(w < kOnArc || w > kTwoPi - kOnArc) throw std::invalid_argument("arc endpoints coincide");
    if(std::abs(w - kPi) < kOnArc) {
        arc.diameter = true;
        return arc;
    }
    // circle through the endpoints, centred on the bisector of the shorter side
    const double minor = std::min(w, kTwoPi - w);
    const double mid   = w < kPi ? arc.from + 0.5 * w : arc.to + 0.5 * minor;
    const double sec   = 1.0 / std::cos(0.5 * minor);
    arc.center         = {sec * std::cos(mid), sec * std::sin(mid)};
    arc.radius         = std::tan(0.5 * minor);
    return arc;
}

std::vector<std::pair<double, double>> region_angles(const Region &region, std::size_t L) {
    std::vector<std::pair<double, double>> out;
    for(const auto &iv : site_intervals(region, L))
        out.emplace_back(angle_of_cell_edge(static_cast<double>(iv.start), L),
                         angle_of_cell_edge(static_cast<double>(iv.start + iv.len), L));
    return out;
}

RtCandidateSet rt_candidates(const Region &region, std::size_t L) {
    const auto ivs = site_intervals(region, L);
    if(ivs.size() > 2) throw std::invalid_argument("RT candidates support one or two intervals");
    RtCandidateSet set;
    if(ivs.size() == 1) {
        if(ivs[0].len < L) {
            set.disconnected.push_back(arc_over(ivs[0], L));
            set.log_length_disconnected = log_length(ivs[0].len, L);
        }
        set.connected            = set.disconnected;
        set.log_length_connected = set.log_length_disconnected;
        return set;
    }
    const auto [g1, g2] = gaps(ivs[0], ivs[1], L);
    for(const auto &iv : ivs) {
        set.disconnected.push_back(arc_over(iv, L));
        set.log_length_disconnected += log_length(iv.len, L);
    }
    for(const auto &g : {g1, g2})
        if(g.len > 0) {
            set.connected.push_back(arc_over(g, L));
            set.log_length_connected += log_length(g.len, L);
        }
    // a zero gap merges the intervals, which always favours the connected surface
    const bool merged     = g1.len == 0 || g2.len == 0;
    set.connected_minimal = merged || set.log_length_connected <= set.log_length_disconnected;
    return set;
}

WedgeSide entanglement_wedge_side(const Region &region, std::size_t L, Point2 p) {
    const auto ivs = site_intervals(region, L);
    if(ivs.size() > 2) throw std::invalid_argument("entanglement wedge supports one or two intervals");
    double f = 0.0;
    if(ivs.size() == 1) {
        f = interval_wedge(ivs[0], L, p);
    } else if(!rt_candidates(region, L).connected_minimal) {
        f = std::max(interval_wedge(ivs[0], L, p), interval_wedge(ivs[1], L, p));
    } else {
        const auto [g1, g2] = gaps(ivs[0], ivs[1], L);
        f                   = -std::max(interval_wedge(g1, L, p), interval_wedge(g2, L, p));
    }
    if(f > kOnArc) return WedgeSide::inside;
    if(f < -kOnArc) return WedgeSide::outside;
    return WedgeSide::on_surface;
}

} // namespace holo
