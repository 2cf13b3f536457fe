#include "holoquench/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace holo {

namespace {

constexpr double kClamp      = 1e-9;
constexpr double kRenyiOne   = 1e-6;
constexpr double kBoundSlack = 1e-10;

double checked_nu(double nu) {
    if(nu < 0.5 - kClamp) throw std::invalid_argument("symplectic eigenvalue " + std::to_string(nu) + " below 1/2");
    return std::max(nu, 0.5);
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

std::vector<std::size_t> contiguous(const std::vector<std::size_t> &ring, std::size_t start, std::size_t len) {
    std::vector<std::size_t> out;
    out.reserve(len);
    for(std::size_t j = 0; j < len; ++j) out.push_back(ring[(start + j) % ring.size()]);
    return out;
}

} // namespace

SymplecticSpectrum symplectic_spectrum(const Matrix &cov_sub) {
    SymplecticSpectrum s{williamson_eigenvalues(cov_sub)};
    for(double nu : s.values) checked_nu(nu);
    return s;
}

double von_neumann_entropy(const SymplecticSpectrum &spectrum) {
    double s = 0.0;
    for(double raw : spectrum.values) {
        const double nu = checked_nu(raw);
        s += xlogx(nu + 0.5) - xlogx(nu - 0.5);
    }
    return s;
}

double renyi_entropy(const SymplecticSpectrum &spectrum, double alpha) {
    if(!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("Renyi index must be positive and finite");
    if(std::abs(alpha - 1.0) < kRenyiOne) return von_neumann_entropy(spectrum);
    double s = 0.0;
    for(double raw : spectrum.values) {
        const double nu = checked_nu(raw);
        // ln[(nu+1/2)^a - (nu-1/2)^a] without overflow for large a
        const double ratio = (nu - 0.5) / (nu + 0.5);
        s += alpha * std::log(nu + 0.5) + std::log1p(-std::pow(ratio, alpha));
    }
    return s / (alpha - 1.0);
}

std::string_view to_string(Side side) {
    switch(side) {
        case Side::single: return "single";
        case Side::left: return "left";
        case Side::right: return "right";
    }
    return "single";
}

std::string_view to_string(OffsetMode mode) { return mode == OffsetMode::averaged ? "averaged" : "single"; }

OffsetMode parse_offset_mode(std::string_view text) {
    if(text == "single") return OffsetMode::single;
    if(text == "averaged") return OffsetMode::averaged;
    throw std::invalid_argument("unknown offset mode '" + std::string(text) + "'");
}

std::string_view to_string(Quadrature q) { return q == Quadrature::x ? "x" : "p"; }

std::size_t Region::size() const {
    std::size_t n = 0;
    for(const auto &iv : intervals) n += iv.length;
    return n;
}

std::vector<std::size_t> Region::positions(std::size_t ring_size) const {
    if(ring_size == 0) throw std::invalid_argument("empty boundary ring");
    if(intervals.empty()) throw std::invalid_argument("region has no intervals");
    std::vector<bool>        used(ring_size, false);
    std::vector<std::size_t> out;
    for(const auto &iv : intervals) {
        if(iv.length == 0) throw std::invalid_argument("region interval of length 0");
        if(iv.length > ring_size) throw std::invalid_argument("region interval longer than the ring");
        for(std::size_t j = 0; j < iv.length; ++j) {
            const auto pos = (iv.start + j) % ring_size;
            if(used[pos]) throw std::invalid_argument("region intervals overlap at site " + std::to_string(pos));
            used[pos] = true;
            out.push_back(pos);
        }
    }
    return out;
}

BoundaryState BoundaryState::from_graph(GaussianState state, const CouplingGraph &graph) {
    BoundaryState bs{std::move(state), {}, std::nullopt};
    const auto   &layout = bs.state.layout();
    auto          mode_of = [&](NodeId id) {
        const auto m = layout.mode_of_label(id);
        if(!m) throw std::invalid_argument("node " + std::to_string(id) + " is not part of the boundary state");
        return *m;
    };
    for(const auto &ring : graph.boundary_rings()) {
        std::vector<std::size_t> modes;
        for(auto id : ring) modes.push_back(mode_of(id));
        bs.rings.push_back(std::move(modes));
    }
    const auto probes = graph.nodes_with_role(ModeRole::probe);
    if(probes.size() > 1) throw std::invalid_argument("at most one probe supported");
    if(!probes.empty()) bs.probe = mode_of(probes.front());
    return bs;
}

const std::vector<std::size_t> &BoundaryState::ring(Side side) const {
    const std::size_t idx = side == Side::right ? 1 : 0;
    if(idx >= rings.size()) throw std::invalid_argument("boundary has no " + std::string(to_string(side)) + " ring");
    return rings[idx];
}

std::vector<std::size_t> BoundaryState::modes(const Region &region) const {
    const auto              &r = ring(region.side);
    std::vector<std::size_t> out;
    for(auto pos : region.positions(r.size())) out.push_back(r[pos]);
    return out;
}

double subsystem_entropy(const GaussianState &state, std::span<const std::size_t> modes, double alpha) {
    if(modes.empty()) return 0.0;
    const auto spec = symplectic_spectrum(state.sub_covariance(modes));
    return renyi_entropy(spec, alpha);
}

double region_entropy(const BoundaryState &bs, const Region &region, double alpha) {
    return subsystem_entropy(bs.state, bs.modes(region), alpha);
}

EntropyCurve region_entropy_curve(const BoundaryState &bs, double alpha, OffsetMode offsets, Side side) {
    const auto &ring = bs.ring(side);
    const auto  L    = ring.size();
    if(L < 2) throw std::invalid_argument("ring too small for an entropy curve");
    EntropyCurve curve;
    curve.ring_size     = L;
    curve.meta.alpha    = alpha;
    curve.meta.offsets  = offsets;
    curve.meta.kind     = "one_sided";
    const std::size_t n_off = offsets == OffsetMode::averaged ? L : 1;
    for(std::size_t l = 1; l < L; ++l) {
        double acc = 0.0;
        for(std::size_t o = 0; o < n_off; ++o) acc += subsystem_entropy(bs.state, contiguous(ring, o, l), alpha);
        curve.ell.push_back(static_cast<double>(l));
        curve.entropy.push_back(acc / static_cast<double>(n_off));
    }
    return curve;
}

EntropyCurve two_sided_entropy_curve(const BoundaryState &bs, double alpha, OffsetMode offsets) {
    const auto &left  = bs.ring(Side::left);
    const auto &right = bs.ring(Side::right);
    if(left.size() != right.size()) throw std::invalid_argument("two-sided curve needs rings of equal size");
    const auto L = left.size();
    if(L < 2) throw std::invalid_argument("ring too small for an entropy curve");
    EntropyCurve curve;
    curve.ring_size    = L;
    curve.meta.alpha   = alpha;
    curve.meta.offsets = offsets;
    curve.meta.kind    = "two_sided";
    const std::size_t n_off = offsets == OffsetMode::averaged ? L : 1;
    for(std::size_t l = 1; l < L; ++l) {
        double acc = 0.0;
        for(std::size_t o = 0; o < n_off; ++o) {
            auto modes = contiguous(left, o, l);
            auto other = contiguous(right, o, l);
            modes.insert(modes.end(), other.begin(), other.end());
            acc += subsystem_entropy(bs.state, modes, alpha);
        }
        curve.ell.push_back(static_cast<double>(l));
        curve.entropy.push_back(acc / static_cast<double>(n_off));
    }
    return curve;
}

double mutual_information(const GaussianState &state, std::span<const std::size_t> a, std::span<const std::size_t> b) {
    if(a.empty() || b.empty()) throw std::invalid_argument("mutual information needs two non-empty subsystems");
    std::set<std::size_t> seen(a.begin(), a.end());
    for(auto m : b)
        if(seen.count(m)) throw std::invalid_argument("subsystems overlap at mode " + std::to_string(m));
    std::vector<std::size_t> ab(a.begin(), a.end());
    ab.insert(ab.end(), b.begin(), b.end());
    return subsystem_entropy(state, a) + subsystem_entropy(state, b) - subsystem_entropy(state, ab);
}

double mutual_information(const BoundaryState &bs, const Region &a, const Region &b) {
    return mutual_information(bs.state, bs.modes(a), bs.modes(b));
}

CorrelationCurve correlation_curve(const BoundaryState &bs, Quadrature q, Side side) {
    const auto &ring = bs.ring(side);
    const auto  L    = ring.size();
    const auto  n    = bs.state.num_modes();
    const auto &v    = bs.state.covariance();
    const auto  off  = q == Quadrature::x ? 0 : n;

    CorrelationCurve c;
    c.ring_size  = L;
    c.quadrature = q;
    for(std::size_t d = 1; d < L; ++d) {
        double cov = 0.0, corr = 0.0;
        for(std::size_t i = 0; i < L; ++i) {
            const auto a   = static_cast<Eigen::Index>(off + ring[i]);
            const auto b   = static_cast<Eigen::Index>(off + ring[(i + d) % L]);
            cov += v(a, b);
            corr += v(a, b) / std::sqrt(v(a, a) * v(b, b));
        }
        c.separation.push_back(static_cast<double>(d));
        c.covariance.push_back(cov / static_cast<double>(L));
        c.correlation.push_back(corr / static_cast<double>(L));
    }
    return c;
}

CorrelationCurve mutual_information_curve(const BoundaryState &bs, Side side) {
    const auto &ring = bs.ring(side);
    const auto  L    = ring.size();
    std::vector<double> single(L);
    for(std::size_t i = 0; i < L; ++i) single[i] = subsystem_entropy(bs.state, std::span(&ring[i], 1));

    CorrelationCurve c;
    c.ring_size = L;
    for(std::size_t d = 1; d < L; ++d) {
        double acc = 0.0;
        for(std::size_t i = 0; i < L; ++i) {
            const std::size_t pair[2] = {ring[i], ring[(i + d) % L]};
            acc += single[i] + single[(i + d) % L] - subsystem_entropy(bs.state, pair);
        }
        c.separation.push_back(static_cast<double>(d));
        c.covariance.push_back(acc / static_cast<double>(L));
        c.correlation.push_back(acc / static_cast<double>(L));
    }
    return c;
}

MiBoundReport mi_bound_report(const GaussianState &state, std::size_t i, std::size_t j) {
    if(i == j) throw std::invalid_argument("mutual-information bound needs two distinct sites");
    const auto n = state.num_modes();
    if(i >= n || j >= n) throw std::invalid_argument("site out of range");
    const auto &v     = state.covariance();
    auto        corr2 = [&](std::size_t a, std::size_t b) {
        const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
        return v(ia, ib) * v(ia, ib) / (v(ia, ia) * v(ib, ib));
    };
    const std::size_t a[1] = {i}, b[1] = {j};

    MiBoundReport r;
    r.mutual_information = mutual_information(state, a, b);
    r.corr_sq_x          = corr2(i, j);
    r.corr_sq_p          = corr2(n + i, n + j);
    r.one_minus_exp      = -std::expm1(-2.0 * r.mutual_information);
    r.two_i              = 2.0 * r.mutual_information;
    const bool upper     = r.one_minus_exp <= r.two_i + kBoundSlack;
    r.satisfied_x        = upper && r.corr_sq_x <= r.one_minus_exp + kBoundSlack;
    r.satisfied_p        = upper && r.corr_sq_p <= r.one_minus_exp + kBoundSlack;
    return r;
}

} // namespace holo
