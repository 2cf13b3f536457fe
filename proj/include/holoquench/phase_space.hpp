#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

/**
 * Gaussian states of N bosonic modes in the xx..pp quadrature ordering
 * (x_1 .. x_N, p_1 .. p_N), with vacuum variance 1/2 per quadrature.
 *
 * The quench is generated by H = (1/2) sum_ij J_ij x_i x_j, so the propagator
 * is the shear [[I, 0], [-J t, I]]. Homodyne momentum measurement of a mode
 * subset is handled by a Schur complement on the momentum rows of that subset.
 */

namespace holo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ModeRole { boundary, bulk, split, probe };

std::string_view to_string(ModeRole role);
ModeRole         parse_mode_role(std::string_view text);

/// Bulk and split modes are measured by the protocol; boundary and probe modes never are.
constexpr bool is_measured(ModeRole role) { return role == ModeRole::bulk || role == ModeRole::split; }

class QuadratureLayout {
  public:
    /// `labels` tags each mode with an external id (a graph node id) that survives
    /// restriction. Empty means labels 0..N-1.
    explicit QuadratureLayout(std::vector<ModeRole> roles, std::vector<std::size_t> labels = {});

    static QuadratureLayout uniform(std::size_t num_modes, ModeRole role = ModeRole::boundary);

    std::size_t num_modes() const { return roles_.size(); }
    std::size_t x_index(std::size_t mode) const { return mode; }
    std::size_t p_index(std::size_t mode) const { return roles_.size() + mode; }

    ModeRole    role(std::size_t mode) const { return roles_.at(mode); }
    std::size_t label(std::size_t mode) const { return labels_.at(mode); }

    const std::vector<ModeRole>    &roles() const { return roles_; }
    const std::vector<std::size_t> &labels() const { return labels_; }

    std::optional<std::size_t> mode_of_label(std::size_t label) const;
    std::vector<std::size_t>   measured_modes() const;

    /// Layout of the listed modes, in the listed order.
    QuadratureLayout restrict_to(std::span<const std::size_t> modes) const;

    bool operator==(const QuadratureLayout &) const = default;

  private:
    std::vector<ModeRole>    roles_;
    std::vector<std::size_t> labels_;
};

/// Commutation form [[0, I], [-I, 0]] for n modes.
Matrix commutation_form(std::size_t num_modes);

/// Quadrature row indices (all x's of `modes`, then all p's) for a mode subset.
std::vector<Eigen::Index> quadrature_indices(std::span<const std::size_t> modes, std::size_t num_modes);

/// Williamson eigenvalues of a covariance in xx..pp ordering, sorted descending.
/// Throws std::invalid_argument if the matrix is not symmetric positive definite.
std::vector<double> williamson_eigenvalues(const Matrix &covariance);

class GaussianState {
  public:
    /// Symmetrizes the covariance, then checks positive definiteness and the
    /// uncertainty bound (every Williamson eigenvalue >= 1/2 - 1e-9).
    GaussianState(QuadratureLayout layout, Matrix covariance, Vector mean);
    GaussianState(QuadratureLayout layout, Matrix covariance);

    const QuadratureLayout &layout() const { return layout_; }
    const Matrix           &covariance() const { return covariance_; }
    const Vector           &mean() const { return mean_; }
    std::size_t             num_modes() const { return layout_.num_modes(); }

    /// Covariance of a mode subset, again in xx..pp ordering.
    Matrix sub_covariance(std::span<const std::size_t> modes) const;

    GaussianState reduced(std::span<const std::size_t> modes) const;

  private:
    QuadratureLayout layout_;
    Matrix           covariance_;
    Vector           mean_;
};

class SymplecticMatrix {
  public:
    /// Throws std::invalid_argument unless S Omega S^T = Omega to 1e-10.
    explicit SymplecticMatrix(Matrix matrix);

    const Matrix &matrix() const { return matrix_; }
    std::size_t   num_modes() const { return static_cast<std::size_t>(matrix_.rows() / 2); }

  private:
    Matrix matrix_;
};

struct MeasurementRecord {
    std::vector<std::size_t> measured_modes;
    Vector                   outcomes;
    std::uint64_t            seed = 0;
};

/// Product state with Var(x) = 1/(2 mu), Var(p) = mu/2 on every mode.
GaussianState make_initial_state(const QuadratureLayout &layout, double mu);
GaussianState make_initial_state(std::size_t num_modes, double mu);

SymplecticMatrix quench_propagator(const Matrix &coupling, double t);

GaussianState apply_symplectic(const GaussianState &state, const SymplecticMatrix &s);
GaussianState apply_quench(const GaussianState &state, const Matrix &coupling, double t);

/// Boundary state after momentum homodyne on `measured` and feedback to zero mean.
/// The returned state lives on the unmeasured modes, in their original order.
GaussianState condition_on_momentum_measurement(const GaussianState &state, std::span<const std::size_t> measured);

/// Linear map from measured momentum outcomes (relative to their prior means) to the
/// shift of the unmeasured-mode mean vector. Rows follow the conditioned state's
/// xx..pp layout, columns follow `measured`.
Matrix conditional_mean_map(const GaussianState &state, std::span<const std::size_t> measured);

/// Mean of the unmeasured modes given a measurement record, before feedback.
Vector conditional_mean(const GaussianState &state, const MeasurementRecord &record);

/// Draws momentum outcomes from the marginal distribution of the measured modes.
MeasurementRecord sample_measurement(const GaussianState &state, std::span<const std::size_t> measured,
                                     std::uint64_t seed);

} // namespace holo
