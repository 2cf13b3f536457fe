#pragma once

#include "holoquench/entanglement.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace holo {

enum class ModelId { cft_disk, btz_one_sided, btz_two_sided, power_law };

std::string_view to_string(ModelId id);
ModelId          parse_model_id(std::string_view text);

struct FitParam {
    std::string name;
    double      value     = 0.0;
    double      std_error = 0.0;
};

struct FitResult {
    ModelId               model = ModelId::cft_disk;
    std::vector<FitParam> params;
    double                residual_norm = 0.0; ///< sqrt(sum of squared residuals)
    std::vector<double>   residuals;           ///< data - model on the domain
    std::vector<double>   domain;
    int                   iterations = 0;

    double value(std::string_view name) const;
    double error(std::string_view name) const;
    double rms() const;
};

/// Thrown when the nonlinear fit does not converge; carries the best iterate.
class FitFailure : public std::runtime_error {
  public:
    FitFailure(const std::string &msg, FitResult best) : std::runtime_error(msg), best_(std::move(best)) {}
    const FitResult &best() const { return best_; }

  private:
    FitResult best_;
};

/// Linear least squares against (c/3) ln sin(pi l / L) + eps on margin < l < L - margin.
/// Standard errors are residual variance times the diagonal of the inverted normal matrix.
FitResult fit_cft_entropy(const EntropyCurve &curve, std::size_t margin = 0);

struct BtzFitOptions {
    std::size_t margin         = 0;
    int         max_iterations = 500;
    bool        fit_plateau    = false; ///< also fit the two-sided plateau (needs a two-sided curve)
};

/// (c, eps, beta) from the one-sided curve by damped Gauss-Newton, started from each
/// beta in {L/8, L/4, L/2, L} with (c, eps) solved linearly at that beta.
/// With fit_plateau, the plateau of 2 min(S_connected, plateau) is then fitted to the
/// two-sided curve on l <= L/2 (the two-sided state is pure, so S(l) = S(L - l)).
FitResult fit_btz_entropy(const EntropyCurve &one_sided, const EntropyCurve *two_sided = nullptr,
                          const BtzFitOptions &options = {});

/// log|values| against log sin(pi d / L) over the round((L-1)/3) separations with the
/// largest sin(pi d / L); Delta = -slope / 2. Values on that domain must share one strict sign.
FitResult fit_power_law(const CorrelationCurve &curve);

/// Abscissae used by fit_power_law for a ring of L sites.
std::vector<double> power_law_domain(std::size_t L);

} // namespace holo
