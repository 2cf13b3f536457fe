#pragma once

#include "holoquench/entanglement.hpp"
#include "holoquench/fitting.hpp"
#include "holoquench/graph.hpp"
#include "holoquench/holography.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace holo {

enum class GeometryKind { disk, wormhole, decorated_disk };

struct GeometrySpec {
    GeometryKind     kind         = GeometryKind::disk;
    int              depth        = 5;
    int              throat_depth = 4;
    WormholeInterior interior     = WormholeInterior::ring_bridge;

    /// disk(5), wormhole(6,4,ring-bridge), decorated_disk(5)
    std::string         str() const;
    static GeometrySpec parse(std::string_view text);
    bool                operator==(const GeometrySpec &) const = default;
};

CouplingGraph build_graph(const GeometrySpec &spec);

enum class TaskKind { entropy_scan, renyi_scan, correlation_scan, mi_scan, probe_map, squeeze_sweep };

std::string_view to_string(TaskKind task);
TaskKind         parse_task(std::string_view text);

enum class ProbePreset { small, large, two_disconnected, two_connected, full };

std::string_view to_string(ProbePreset preset);
ProbePreset      parse_probe_preset(std::string_view text);

/// small = [0, L/4); large = [0, 5L/8); two_disconnected = [0, L/8) + [L/2, L/2 + 3L/16);
/// two_connected = [0, 3L/8) + [7L/16, 7L/8); full = the whole ring.
Region probe_preset_region(ProbePreset preset, std::size_t L);

/// A probe region given by preset name or by explicit intervals ("0:8/16:6").
struct ProbeRegionSpec {
    std::string name;
    Region      region; ///< explicit intervals; empty for presets (resolved per ring size)
    std::optional<ProbePreset> preset;

    Region                 resolve(std::size_t L) const;
    static ProbeRegionSpec parse(std::string_view text);
    bool                   operator==(const ProbeRegionSpec &o) const { return name == o.name; }
};

struct ExperimentConfig {
    GeometrySpec                 geometry;
    double                       mu   = 0.2;
    double                       t    = 1.0;
    TaskKind                     task = TaskKind::entropy_scan;
    std::vector<double>          alphas{1.0};
    std::vector<double>          mus; ///< renyi_scan and squeeze_sweep; empty means {mu}
    std::size_t                  renyi_ell   = 4;
    OffsetMode                   offsets     = OffsetMode::single;
    std::size_t                  fit_margin  = 0;
    bool                         fit_plateau = true;
    std::vector<ProbeRegionSpec> probe_regions;
    bool                         sample_outcomes = false;
    std::uint64_t                seed            = 0;
    std::string                  output          = "out";

    bool operator==(const ExperimentConfig &) const = default;
};

/// Default probe regions: the four panel presets plus the full boundary.
std::vector<ProbeRegionSpec> default_probe_regions();

/// Boundary (and probe) state after quench and momentum measurement of every bulk
/// and split node. Throws ProtocolError unless every Williamson eigenvalue is 1/2 within 1e-8.
GaussianState run_protocol(const CouplingGraph &graph, double mu, double t = 1.0);
BoundaryState run_boundary(const CouplingGraph &graph, double mu, double t = 1.0);

/// argmax over l in [2, L/2] of -S'' / (1 + S'^2)^{3/2} with central differences.
double empirical_crossover(const EntropyCurve &curve);
/// |S(L/2) - S(ceil(2 l*))| / (S(ceil(2 l*)) - S(1)); below 0.1 counts as a plateau.
double plateau_flatness(const EntropyCurve &curve, double lstar);

struct EntropyScanResult {
    EntropyCurve                curve;
    FitResult                   fit;
    std::optional<EntropyCurve> two_sided;
    double                      full_boundary_entropy = 0.0; ///< S of all boundary rings together
    std::optional<double>       predicted_crossover;         ///< (beta / pi) asinh(1)
    std::optional<double>       empirical_crossover;
    std::optional<double>       plateau_flatness;
};

struct RenyiTable {
    std::vector<double>              alphas;
    std::vector<double>              mus;
    std::vector<std::vector<double>> ratio; ///< [mu][alpha] S_alpha / S
    std::vector<double>              cft_reference;
    std::size_t                      ell = 4;
};

struct LogFit {
    double      a = 0.0, b = 0.0; ///< c = a ln(1/mu) + b
    double      a_err = 0.0, b_err = 0.0;
    std::size_t points = 0;
};

struct SqueezeSweepResult {
    std::vector<double>    mus;
    std::vector<FitResult> fits;
    std::optional<LogFit>  log_fit;
};

struct PowerLawOutcome {
    std::optional<FitResult> fit;
    std::string              failure; ///< message when the fit was rejected
};

struct CorrelationScanResult {
    CorrelationCurve x, p, mi;
    PowerLawOutcome  fit_x, fit_p, fit_mi;
};

struct MiBoundEntry {
    std::size_t   i = 0, j = 0;
    MiBoundReport report;
};

struct MiScanResult {
    CorrelationCurve          mi;
    PowerLawOutcome           fit_mi;
    std::vector<MiBoundEntry> bounds;
};

struct ProbeEntry {
    NodeId                node = 0;
    DiskCoordinates       coords;
    PoincarePoint         point;
    WedgeSide             wedge = WedgeSide::outside;
    double                probe_entropy = 0.0;
    double                mutual_information = 0.0;
    std::optional<double> normalized_mi; ///< missing when the probe is decoupled
};

struct ProbeMap {
    std::string             name;
    Region                  region;
    RtCandidateSet          arcs;
    std::vector<ProbeEntry> entries;

    /// Mean normalized MI over nodes strictly inside / outside the wedge (nullopt if none).
    std::optional<double> mean_inside() const;
    std::optional<double> mean_outside() const;
};

struct ProbeMapResult {
    std::vector<ProbeMap> maps;
};

struct RunResult {
    ExperimentConfig                     config;
    CouplingGraph                        graph;
    std::optional<EntropyScanResult>     entropy;
    std::optional<RenyiTable>            renyi;
    std::optional<SqueezeSweepResult>    squeeze;
    std::optional<CorrelationScanResult> correlation;
    std::optional<MiScanResult>          mi;
    std::optional<ProbeMapResult>        probe;
    std::optional<MeasurementRecord>     samples;
};

EntropyScanResult     run_entropy_scan(const ExperimentConfig &config);
RenyiTable            run_renyi_scan(const ExperimentConfig &config);
SqueezeSweepResult    run_squeeze_sweep(const ExperimentConfig &config);
CorrelationScanResult run_correlation_scan(const ExperimentConfig &config);
MiScanResult          run_mi_scan(const ExperimentConfig &config);
ProbeMapResult        run_probe_map(const ExperimentConfig &config);

/// Dispatches on config.task.
RunResult run_experiment(const ExperimentConfig &config);

} // namespace holo
