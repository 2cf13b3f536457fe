#pragma once

#include "holoquench/pipelines.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace holo {

inline constexpr const char *kToolVersion = "0.1.0";

struct ManifestFile {
    std::string name;
    std::string sha256;
};

struct RunManifest {
    std::string               config_echo;
    std::string               version;
    std::string               timestamp;
    std::vector<ManifestFile> files;
};

/// Writes every data file of a run plus manifest.txt into `dir` (created if needed).
/// Data files are byte-reproducible; the timestamp appears only in the manifest.
RunManifest write_outputs(const RunResult &result, const std::filesystem::path &dir);

std::string sha256_hex(const std::string &bytes);
std::string sha256_file(const std::filesystem::path &path);

/// CSV renderers (17 significant digits).
std::string entropy_curve_csv(const EntropyCurve &curve, ModelId model);
std::string correlation_csv(const CorrelationScanResult &scan);
std::string fit_record(const FitResult &fit);

/// Curves from CSV files written above. The ring size comes from the `sites=` header
/// field when present, otherwise from the largest abscissa.
EntropyCurve     read_entropy_curve(const std::filesystem::path &path);
CorrelationCurve read_correlation_column(const std::filesystem::path &path, const std::string &column);

} // namespace holo
