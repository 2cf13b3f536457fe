// holoquench: quench-and-measure simulations of holographic boundary states.
//
//   holoquench run <config> [--output DIR]
//   holoquench build-graph <geometry> [--probe NODE] [--output FILE]
//   holoquench fit <curve.csv> --model <id> [--two-sided CSV] [--column NAME] [--margin N]
//   holoquench probe-map <config> [--output DIR]

#include "holoquench/config.hpp"
#include "holoquench/errors.hpp"
#include "holoquench/output.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

using namespace holo;

namespace {

enum Exit { ok = 0, generic = 1, config = 2, io = 3, protocol = 4, fit = 5, argument = 6 };

void summarize(const RunResult &r, const RunManifest &m, const std::string &dir) {
    fmt::print("{} {} -> {} ({} files)\n", to_string(r.config.task), r.graph.descriptor(), dir, m.files.size());
    if(r.entropy) {
        for(const auto &p : r.entropy->fit.params) fmt::print("  {} = {:.6g} +- {:.2g}\n", p.name, p.value, p.std_error);
        fmt::print("  rms residual = {:.4g}\n", r.entropy->fit.rms());
        if(r.entropy->empirical_crossover)
            fmt::print("  crossover: empirical {} vs predicted {:.4g}\n", *r.entropy->empirical_crossover,
                       *r.entropy->predicted_crossover);
    }
    if(r.probe)
        for(const auto &map : r.probe->maps)
            fmt::print("  {}: mean inside {:.4g}, outside {:.4g}\n", map.name, map.mean_inside().value_or(std::nan("")),
                       map.mean_outside().value_or(std::nan("")));
}

ExperimentConfig load_probe_config(const std::string &path) {
    std::ifstream in(path);
    if(!in) throw ConfigError("cannot open config file '" + path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ExperimentConfig  cfg;
    try {
        cfg = parse_config_string(text);
    } catch(const ConfigError &e) {
        if(e.key() != "task" || e.line() != 0) throw;
        cfg = parse_config_string(text + "\ntask = probe_map\n");
    }
    if(cfg.task != TaskKind::probe_map) throw ConfigError("probe-map needs task = probe_map", 0, "task");
    return cfg;
}

int execute(const ExperimentConfig &cfg, const std::string &override_dir) {
    const std::string dir = override_dir.empty() ? cfg.output : override_dir;
    const auto        r   = run_experiment(cfg);
    const auto        m   = write_outputs(r, dir);
    summarize(r, m, dir);
    return Exit::ok;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Gaussian quench-and-measure simulator for holographic boundary states"};
    app.require_subcommand(1);

    std::string run_config, run_output;
    auto       *run = app.add_subcommand("run", "Run an experiment described by a config file");
    run->add_option("config", run_config, "Config file (key = value lines)")->required();
    run->add_option("-o,--output", run_output, "Output directory (overrides the config's output key)");

    std::string geometry, graph_output;
    long        probe_node = -1;
    auto       *build      = app.add_subcommand("build-graph", "Write the coupling graph of a geometry as an edge list");
    build->add_option("geometry", geometry, "disk(D), wormhole(D,R,ring-bridge|identify) or decorated_disk(D)")
        ->required();
    build->add_option("--probe", probe_node, "Attach a probe to this bulk node id");
    build->add_option("-o,--output", graph_output, "Output file (default: stdout)");

    std::string curve_path, model_name, two_sided_path, column = "cov_x";
    std::size_t margin = 0;
    auto       *fitcmd = app.add_subcommand("fit", "Fit a model to a curve CSV");
    fitcmd->add_option("curve", curve_path, "Curve CSV (ell,S or d,... columns)")->required();
    fitcmd->add_option("-m,--model", model_name, "cft_disk | btz_one_sided | btz_two_sided | power_law")->required();
    fitcmd->add_option("--two-sided", two_sided_path, "Two-sided curve CSV (btz_two_sided only)");
    fitcmd->add_option("--column", column, "Value column for power_law fits");
    fitcmd->add_option("--margin", margin, "Exclude l <= margin and l >= L - margin from entropy fits");

    std::string probe_config, probe_output;
    auto       *probe = app.add_subcommand("probe-map", "Probe-based reconstruction map for a disk config");
    probe->add_option("config", probe_config, "Config file; task may be omitted")->required();
    probe->add_option("-o,--output", probe_output, "Output directory (overrides the config's output key)");

    try {
        app.parse(argc, argv);
    } catch(const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if(*run) return execute(parse_config(run_config), run_output);
        if(*probe) return execute(load_probe_config(probe_config), probe_output);
        if(*build) {
            auto g = build_graph(GeometrySpec::parse(geometry));
            if(probe_node >= 0) g = attach_probe(g, static_cast<NodeId>(probe_node));
            if(graph_output.empty()) {
                write_edge_list(std::cout, g);
            } else {
                std::ofstream out(graph_output, std::ios::binary);
                if(!out) throw IoError("cannot write '" + graph_output + "'");
                write_edge_list(out, g);
            }
            return Exit::ok;
        }
        if(*fitcmd) {
            const ModelId model = parse_model_id(model_name);
            FitResult     result;
            if(model == ModelId::power_law) {
                result = fit_power_law(read_correlation_column(curve_path, column));
            } else if(model == ModelId::cft_disk) {
                result = fit_cft_entropy(read_entropy_curve(curve_path), margin);
            } else {
                BtzFitOptions opt;
                opt.margin = margin;
                if(model == ModelId::btz_two_sided) {
                    if(two_sided_path.empty()) throw std::invalid_argument("btz_two_sided needs --two-sided <csv>");
                    opt.fit_plateau = true;
                    const auto two  = read_entropy_curve(two_sided_path);
                    result          = fit_btz_entropy(read_entropy_curve(curve_path), &two, opt);
                } else {
                    result = fit_btz_entropy(read_entropy_curve(curve_path), nullptr, opt);
                }
            }
            fmt::print("{}", fit_record(result));
            return Exit::ok;
        }
    } catch(const ConfigError &e) {
        fmt::print(stderr, "holoquench: {}\n", e.what());
        return Exit::config;
    } catch(const IoError &e) {
        fmt::print(stderr, "holoquench: io error: {}\n", e.what());
        return Exit::io;
    } catch(const ProtocolError &e) {
        fmt::print(stderr, "holoquench: protocol error: {}\n", e.what());
        return Exit::protocol;
    } catch(const FitFailure &e) {
        fmt::print(stderr, "holoquench: fit failure: {}\n", e.what());
        return Exit::fit;
    } catch(const DegenerateFitError &e) {
        fmt::print(stderr, "holoquench: degenerate fit: {}\n", e.what());
        return Exit::fit;
    } catch(const std::invalid_argument &e) {
        fmt::print(stderr, "holoquench: invalid argument: {}\n", e.what());
        return Exit::argument;
    } catch(const std::exception &e) {
        fmt::print(stderr, "holoquench: error: {}\n", e.what());
        return Exit::generic;
    }
    return Exit::generic;
}
