#include "holoquench/pipelines.hpp"

#include "holoquench/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace holo {

namespace {

constexpr double kPurityTol    = 1e-8;
constexpr double kDecoupledTol = 1e-12;

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while(a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while(b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t              pos = 0;
    while(true) {
        const auto next = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if(next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

int parse_int(const std::string &s) {
    std::size_t used = 0;
    int         v    = 0;
    try {
        v = std::stoi(s, &used);
    } catch(const std::exception &) {
        throw std::invalid_argument("expected an integer, got '" + s + "'");
    }
    if(used != s.size()) throw std::invalid_argument("expected an integer, got '" + s + "'");
    return v;
}

CurveMetadata metadata(const CouplingGraph &g, const ExperimentConfig &cfg, double alpha, const std::string &kind) {
    return CurveMetadata{g.descriptor(), cfg.mu, cfg.t, alpha, cfg.offsets, kind};
}

std::vector<std::size_t> all_ring_modes(const BoundaryState &bs) {
    std::vector<std::size_t> out;
    for(const auto &r : bs.rings) out.insert(out.end(), r.begin(), r.end());
    return out;
}

std::map<long long, double> by_ell(const EntropyCurve &c) {
    std::map<long long, double> m;
    for(std::size_t i = 0; i < c.ell.size(); ++i) m[std::llround(c.ell[i])] = c.entropy[i];
    return m;
}

PowerLawOutcome try_power_law(const CorrelationCurve &c) {
    PowerLawOutcome out;
    try {
        out.fit = fit_power_law(c);
    } catch(const FitFailure &e) {
        out.failure = e.what();
    } catch(const std::invalid_argument &e) { // ring too small for the fit domain
        out.failure = e.what();
    }
    return out;
}

double normalized_probe_mi(double mi, double s_probe, NodeId node) {
    if(s_probe < kDecoupledTol) throw ProbeDecoupledError("probe on node " + std::to_string(node) + " is decoupled");
    return mi / s_probe;
}

std::optional<double> mean_where(const std::vector<ProbeEntry> &entries, WedgeSide side) {
    double      acc = 0.0;
    std::size_t n   = 0;
    for(const auto &e : entries)
        if(e.wedge == side && e.normalized_mi) {
            acc += *e.normalized_mi;
            ++n;
        }
    if(n == 0) return std::nullopt;
    return acc / static_cast<double>(n);
}

} // namespace

std::string GeometrySpec::str() const {
    switch(kind) {
        case GeometryKind::disk: return "disk(" + std::to_string(depth) + ")";
        case GeometryKind::decorated_disk: return "decorated_disk(" + std::to_string(depth) + ")";
        case GeometryKind::wormhole:
            return "wormhole(" + std::to_string(depth) + "," + std::to_string(throat_depth) + "," +
                   std::string(to_string(interior)) + ")";
    }
    return "";
}

GeometrySpec GeometrySpec::parse(std::string_view text) {
    const std::string s    = trim(text);
    const auto        open = s.find('(');
    if(open == std::string::npos || s.back() != ')')
        throw std::invalid_argument("geometry must look like disk(5), wormhole(6,4,ring-bridge) or decorated_disk(5)");
    const std::string name = trim(s.substr(0, open));
    const auto        args = split(std::string_view(s).substr(open + 1, s.size() - open - 2), ',');

    GeometrySpec g;
    if(name == "disk" || name == "decorated_disk") {
        if(args.size() != 1) throw std::invalid_argument(name + " takes one argument (depth)");
        g.kind  = name == "disk" ? GeometryKind::disk : GeometryKind::decorated_disk;
        g.depth = parse_int(args[0]);
    } else if(name == "wormhole") {
        if(args.size() < 2 || args.size() > 3)
            throw std::invalid_argument("wormhole takes (depth, throat_depth[, interior])");
        g.kind         = GeometryKind::wormhole;
        g.depth        = parse_int(args[0]);
        g.throat_depth = parse_int(args[1]);
        if(args.size() == 3) g.interior = parse_wormhole_interior(args[2]);
    } else {
        throw std::invalid_argument("unknown geometry '" + name + "'");
    }
    return g;
}

CouplingGraph build_graph(const GeometrySpec &spec) {
    switch(spec.kind) {
        case GeometryKind::disk: return build_disk_graph(DiskSpec{spec.depth});
        case GeometryKind::decorated_disk: return build_decorated_disk(spec.depth);
        case GeometryKind::wormhole:
            return build_wormhole_graph(WormholeSpec{spec.depth, spec.throat_depth, spec.interior});
    }
    throw std::invalid_argument("unknown geometry");
}

std::string_view to_string(TaskKind task) {
    switch(task) {
        case TaskKind::entropy_scan: return "entropy_scan";
        case TaskKind::renyi_scan: return "renyi_scan";
        case TaskKind::correlation_scan: return "correlation_scan";
        case TaskKind::mi_scan: return "mi_scan";
        case TaskKind::probe_map: return "probe_map";
        case TaskKind::squeeze_sweep: return "squeeze_sweep";
    }
    return "unknown";
}

TaskKind parse_task(std::string_view text) {
    for(auto t : {TaskKind::entropy_scan, TaskKind::renyi_scan, TaskKind::correlation_scan, TaskKind::mi_scan,
                  TaskKind::probe_map, TaskKind::squeeze_sweep})
        if(text == to_string(t)) return t;
    throw std::invalid_argument("unknown task '" + std::string(text) + "'");
}

std::string_view to_string(ProbePreset preset) {
    switch(preset) {
        case ProbePreset::small: return "small";
        case ProbePreset::large: return "large";
        case ProbePreset::two_disconnected: return "two_disconnected";
        case ProbePreset::two_connected: return "two_connected";
        case ProbePreset::full: return "full";
    }
    return "unknown";
}

ProbePreset parse_probe_preset(std::string_view text) {
    for(auto p : {ProbePreset::small, ProbePreset::large, ProbePreset::two_disconnected, ProbePreset::two_connected,
                  ProbePreset::full})
        if(text == to_string(p)) return p;
    throw std::invalid_argument("unknown probe region preset '" + std::string(text) + "'");
}

Region probe_preset_region(ProbePreset preset, std::size_t L) {
    if(L < 16) throw std::invalid_argument("probe region presets need a ring of at least 16 sites");
    auto frac = [L](std::size_t num, std::size_t den) { return std::max<std::size_t>(1, L * num / den); };
    Region r;
    switch(preset) {
        case ProbePreset::small: r.intervals = {{0, frac(1, 4)}}; break;
        case ProbePreset::large: r.intervals = {{0, frac(5, 8)}}; break;
        case ProbePreset::two_disconnected: r.intervals = {{0, frac(1, 8)}, {L / 2, frac(3, 16)}}; break;
        case ProbePreset::two_connected: r.intervals = {{0, frac(3, 8)}, {L * 7 / 16, frac(7, 16)}}; break;
        case ProbePreset::full: r.intervals = {{0, L}}; break;
    }
    return r;
}

Region ProbeRegionSpec::resolve(std::size_t L) const {
    if(preset) return probe_preset_region(*preset, L);
    region.positions(L);
    return region;
}

ProbeRegionSpec ProbeRegionSpec::parse(std::string_view text) {
    ProbeRegionSpec spec;
    spec.name = trim(text);
    if(spec.name.empty()) throw std::invalid_argument("empty probe region");
    if(spec.name.find(':') == std::string::npos) {
        spec.preset = parse_probe_preset(spec.name);
        return spec;
    }
    for(const auto &part : split(spec.name, '/')) {
        const auto se = split(part, ':');
        if(se.size() != 2) throw std::invalid_argument("probe interval must be start:length, got '" + part + "'");
        const int start = parse_int(se[0]), len = parse_int(se[1]);
        if(start < 0 || len <= 0) throw std::invalid_argument("probe interval needs start >= 0 and length > 0");
        spec.region.intervals.push_back({static_cast<std::size_t>(start), static_cast<std::size_t>(len)});
    }
    return spec;
}

std::vector<ProbeRegionSpec> default_probe_regions() {
    std::vector<ProbeRegionSpec> out;
    for(auto p : {ProbePreset::small, ProbePreset::large, ProbePreset::two_disconnected, ProbePreset::two_connected,
                  ProbePreset::full})
        out.push_back(ProbeRegionSpec::parse(to_string(p)));
    return out;
}

std::optional<double> ProbeMap::mean_inside() const { return mean_where(entries, WedgeSide::inside); }
std::optional<double> ProbeMap::mean_outside() const { return mean_where(entries, WedgeSide::outside); }

GaussianState run_protocol(const CouplingGraph &graph, double mu, double t) {
    const auto measured = graph.measured_nodes();
    if(graph.nodes_with_role(ModeRole::boundary).empty()) throw std::invalid_argument("graph has no boundary nodes");
    if(measured.empty()) throw std::invalid_argument("graph has no bulk nodes to measure");

    const auto initial  = make_initial_state(graph.layout(), mu);
    const auto quenched = apply_quench(initial, graph.coupling_matrix(), t);
    auto       boundary = condition_on_momentum_measurement(quenched, measured);

    const auto nu    = williamson_eigenvalues(boundary.covariance());
    const auto worst = std::max(std::abs(nu.front() - 0.5), std::abs(nu.back() - 0.5));
    if(worst > kPurityTol)
        throw ProtocolError("boundary state of " + graph.descriptor() + " is not pure (max |nu - 1/2| = " +
                            std::to_string(worst) + ")");
    return boundary;
}

BoundaryState run_boundary(const CouplingGraph &graph, double mu, double t) {
    return BoundaryState::from_graph(run_protocol(graph, mu, t), graph);
}

double empirical_crossover(const EntropyCurve &curve) {
    const auto        s = by_ell(curve);
    const std::size_t L = curve.ring_size;
    double            best_l = std::numeric_limits<double>::quiet_NaN();
    double            best_k = -std::numeric_limits<double>::infinity();
    for(long long l = 2; l <= static_cast<long long>(L / 2); ++l) {
        if(!s.count(l - 1) || !s.count(l) || !s.count(l + 1)) continue;
        const double d1 = 0.5 * (s.at(l + 1) - s.at(l - 1));
        const double d2 = s.at(l + 1) - 2.0 * s.at(l) + s.at(l - 1);
        const double k  = -d2 / std::pow(1.0 + d1 * d1, 1.5);
        if(k > best_k) {
            best_k = k;
            best_l = static_cast<double>(l);
        }
    }
    if(std::isnan(best_l)) throw std::invalid_argument("curve too short to locate a crossover");
    return best_l;
}

double plateau_flatness(const EntropyCurve &curve, double lstar) {
    const auto      s    = by_ell(curve);
    const long long half = static_cast<long long>(curve.ring_size / 2);
    const long long k    = static_cast<long long>(std::ceil(2.0 * lstar));
    if(k >= half || !s.count(k) || !s.count(half) || !s.count(1)) return std::numeric_limits<double>::quiet_NaN();
    const double rise = s.at(k) - s.at(1);
    if(!(rise > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::abs(s.at(half) - s.at(k)) / rise;
}

EntropyScanResult run_entropy_scan(const ExperimentConfig &cfg) {
    const auto   graph = build_graph(cfg.geometry);
    const auto   bs    = run_boundary(graph, cfg.mu, cfg.t);
    const double alpha = cfg.alphas.empty() ? 1.0 : cfg.alphas.front();

    EntropyScanResult out;
    out.full_boundary_entropy = subsystem_entropy(bs.state, all_ring_modes(bs), alpha);

    if(cfg.geometry.kind == GeometryKind::wormhole) {
        out.curve      = region_entropy_curve(bs, alpha, cfg.offsets, Side::left);
        out.curve.meta = metadata(graph, cfg, alpha, "one_sided");
        out.two_sided  = two_sided_entropy_curve(bs, alpha, cfg.offsets);
        out.two_sided->meta = metadata(graph, cfg, alpha, "two_sided");

        BtzFitOptions opt;
        opt.margin      = cfg.fit_margin;
        opt.fit_plateau = cfg.fit_plateau;
        out.fit         = fit_btz_entropy(out.curve, &*out.two_sided, opt);

        const BtzEntropyModel m{out.fit.value("c"), out.fit.value("eps"), out.fit.value("beta"),
                                static_cast<double>(out.curve.ring_size)};
        out.predicted_crossover = btz_two_sided_crossover(m);
        out.empirical_crossover = empirical_crossover(*out.two_sided);
        out.plateau_flatness    = plateau_flatness(*out.two_sided, *out.predicted_crossover);
    } else {
        out.curve      = region_entropy_curve(bs, alpha, cfg.offsets, Side::single);
        out.curve.meta = metadata(graph, cfg, alpha, "one_sided");
        out.fit        = fit_cft_entropy(out.curve, cfg.fit_margin);
    }
    return out;
}

RenyiTable run_renyi_scan(const ExperimentConfig &cfg) {
    const auto graph = build_graph(cfg.geometry);
    RenyiTable table;
    table.alphas = cfg.alphas;
    table.mus    = cfg.mus.empty() ? std::vector<double>{cfg.mu} : cfg.mus;
    table.ell    = cfg.renyi_ell;
    for(double a : table.alphas) table.cft_reference.push_back(0.5 * (1.0 + 1.0 / a));

    for(double mu : table.mus) {
        const auto  bs   = run_boundary(graph, mu, cfg.t);
        const auto &ring = bs.ring(Side::single);
        const auto  L    = ring.size();
        if(table.ell < 1 || table.ell >= L) throw std::invalid_argument("renyi_ell must lie in [1, L-1]");
        const std::size_t n_off = cfg.offsets == OffsetMode::averaged ? L : 1;

        std::vector<SymplecticSpectrum> spectra;
        for(std::size_t o = 0; o < n_off; ++o) {
            Region r{Side::single, {{o, table.ell}}};
            spectra.push_back(symplectic_spectrum(bs.state.sub_covariance(bs.modes(r))));
        }
        auto mean_entropy = [&](double a) {
            double acc = 0.0;
            for(const auto &sp : spectra) acc += renyi_entropy(sp, a);
            return acc / static_cast<double>(spectra.size());
        };
        const double s1 = mean_entropy(1.0);
        if(!(s1 > 0.0)) throw std::invalid_argument("region is unentangled; Renyi ratios undefined");
        std::vector<double> row;
        for(double a : table.alphas) row.push_back(mean_entropy(a) / s1);
        table.ratio.push_back(std::move(row));
    }
    return table;
}

SqueezeSweepResult run_squeeze_sweep(const ExperimentConfig &cfg) {
    SqueezeSweepResult out;
    out.mus = cfg.mus.empty() ? std::vector<double>{cfg.mu} : cfg.mus;
    for(double mu : out.mus) {
        ExperimentConfig one = cfg;
        one.mu               = mu;
        one.task             = TaskKind::entropy_scan;
        out.fits.push_back(run_entropy_scan(one).fit);
    }
    if(cfg.geometry.kind == GeometryKind::decorated_disk) return out;

    std::vector<std::size_t> order(out.mus.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return out.mus[a] < out.mus[b]; });
    const std::size_t half = (order.size() + 1) / 2;
    if(half < 2) return out;

    const auto n = static_cast<Eigen::Index>(half);
    Matrix     x(n, 2);
    Vector     y(n);
    for(Eigen::Index i = 0; i < n; ++i) {
        x(i, 0) = std::log(1.0 / out.mus[order[i]]);
        x(i, 1) = 1.0;
        y(i)    = out.fits[order[i]].value("c");
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(x);
    if(qr.rank() < 2) return out; // all small-mu entries equal
    const Vector b = qr.solve(y);

    LogFit lf;
    lf.a      = b(0);
    lf.b      = b(1);
    lf.points = half;
    if(half > 2) {
        const double s2  = (y - x * b).squaredNorm() / static_cast<double>(half - 2);
        const Matrix cov = s2 * (x.transpose() * x).inverse();
        lf.a_err         = std::sqrt(std::max(cov(0, 0), 0.0));
        lf.b_err         = std::sqrt(std::max(cov(1, 1), 0.0));
    } else {
        lf.a_err = lf.b_err = std::numeric_limits<double>::quiet_NaN();
    }
    out.log_fit = lf;
    return out;
}

CorrelationScanResult run_correlation_scan(const ExperimentConfig &cfg) {
    const auto graph = build_graph(cfg.geometry);
    const auto bs    = run_boundary(graph, cfg.mu, cfg.t);
    const Side side  = bs.rings.size() > 1 ? Side::left : Side::single;

    CorrelationScanResult out;
    out.x       = correlation_curve(bs, Quadrature::x, side);
    out.p       = correlation_curve(bs, Quadrature::p, side);
    out.mi      = mutual_information_curve(bs, side);
    for(auto *c : {&out.x, &out.p, &out.mi}) c->meta = metadata(graph, cfg, 1.0, "correlation");
    out.fit_x  = try_power_law(out.x);
    out.fit_p  = try_power_law(out.p);
    out.fit_mi = try_power_law(out.mi);
    return out;
}

MiScanResult run_mi_scan(const ExperimentConfig &cfg) {
    const auto  graph = build_graph(cfg.geometry);
    const auto  bs    = run_boundary(graph, cfg.mu, cfg.t);
    const Side  side  = bs.rings.size() > 1 ? Side::left : Side::single;
    const auto &ring  = bs.ring(side);

    MiScanResult out;
    out.mi      = mutual_information_curve(bs, side);
    out.mi.meta = metadata(graph, cfg, 1.0, "mutual_information");
    out.fit_mi  = try_power_law(out.mi);
    for(std::size_t i = 0; i < ring.size(); ++i)
        for(std::size_t j = i + 1; j < ring.size(); ++j)
            out.bounds.push_back({i, j, mi_bound_report(bs.state, ring[i], ring[j])});
    return out;
}

ProbeMapResult run_probe_map(const ExperimentConfig &cfg) {
    if(cfg.geometry.kind != GeometryKind::disk) throw std::invalid_argument("probe maps need an undecorated disk geometry");
    const auto base    = build_graph(cfg.geometry);
    const auto coords  = poincare_coordinates(base);
    const auto L       = base.boundary_rings().front().size();
    const auto regions = cfg.probe_regions.empty() ? default_probe_regions() : cfg.probe_regions;

    ProbeMapResult out;
    for(const auto &spec : regions) {
        ProbeMap map;
        map.name   = spec.name;
        map.region = spec.resolve(L);
        if(map.region.intervals.size() <= 2) map.arcs = rt_candidates(map.region, L);
        out.maps.push_back(std::move(map));
    }

    for(NodeId v : base.nodes_with_role(ModeRole::bulk)) {
        const auto   graph  = attach_probe(base, v);
        const auto   bs     = run_boundary(graph, cfg.mu, cfg.t);
        const size_t probe[1] = {*bs.probe};
        const double s_b    = subsystem_entropy(bs.state, probe);
        for(auto &map : out.maps) {
            ProbeEntry e;
            e.node               = v;
            e.coords             = *base.node(v).coords;
            e.point              = coords.at(v);
            e.wedge              = entanglement_wedge_side(map.region, L, Point2{e.point.x, e.point.y});
            e.probe_entropy      = s_b;
            e.mutual_information = mutual_information(bs.state, bs.modes(map.region), probe);
            try {
                e.normalized_mi = normalized_probe_mi(e.mutual_information, s_b, v);
            } catch(const ProbeDecoupledError &) {
                e.normalized_mi.reset();
            }
            map.entries.push_back(e);
        }
    }
    return out;
}

RunResult run_experiment(const ExperimentConfig &cfg) {
    RunResult r{cfg, build_graph(cfg.geometry), {}, {}, {}, {}, {}, {}, {}};
    switch(cfg.task) {
        case TaskKind::entropy_scan: r.entropy = run_entropy_scan(cfg); break;
        case TaskKind::renyi_scan: r.renyi = run_renyi_scan(cfg); break;
        case TaskKind::squeeze_sweep: r.squeeze = run_squeeze_sweep(cfg); break;
        case TaskKind::correlation_scan: r.correlation = run_correlation_scan(cfg); break;
        case TaskKind::mi_scan: r.mi = run_mi_scan(cfg); break;
        case TaskKind::probe_map: r.probe = run_probe_map(cfg); break;
    }
    if(cfg.sample_outcomes) {
        const auto state = apply_quench(make_initial_state(r.graph.layout(), cfg.mu), r.graph.coupling_matrix(), cfg.t);
        r.samples        = sample_measurement(state, r.graph.measured_nodes(), cfg.seed);
    }
    return r;
}

} // namespace holo
