#include "holoquench/phase_space.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace holo {

namespace {

constexpr double kUncertaintySlack = 1e-9;
constexpr double kSymplecticTol    = 1e-10;
constexpr double kCouplingSymTol   = 1e-12;
constexpr double kPinvCutoff       = 1e-12;

Matrix symmetrized(const Matrix &m) { return 0.5 * (m + m.transpose()); }

std::vector<std::size_t> complement_modes(std::span<const std::size_t> measured, std::size_t n) {
    std::vector<bool> hit(n, false);
    for(auto m : measured) {
        if(m >= n) throw std::invalid_argument("measured mode " + std::to_string(m) + " out of range");
        if(hit[m]) throw std::invalid_argument("measured mode " + std::to_string(m) + " listed twice");
        hit[m] = true;
    }
    std::vector<std::size_t> keep;
    for(std::size_t i = 0; i < n; ++i)
        if(!hit[i]) keep.push_back(i);
    return keep;
}

std::vector<Eigen::Index> momentum_indices(std::span<const std::size_t> modes, std::size_t n) {
    std::vector<Eigen::Index> idx;
    idx.reserve(modes.size());
    for(auto m : modes) idx.push_back(static_cast<Eigen::Index>(n + m));
    return idx;
}

struct Partition {
    std::vector<std::size_t>  keep;
    std::vector<Eigen::Index> keep_idx;
    std::vector<Eigen::Index> meas_p;
};

Partition partition(const GaussianState &state, std::span<const std::size_t> measured) {
    const auto n = state.num_modes();
    if(measured.empty()) throw std::invalid_argument("no modes to measure");
    Partition part;
    part.keep = complement_modes(measured, n);
    if(part.keep.empty()) throw std::invalid_argument("measurement covers every mode; no boundary left");
    part.keep_idx = quadrature_indices(part.keep, n);
    part.meas_p   = momentum_indices(measured, n);
    return part;
}

// (Pi_p W Pi_p)^MP rhs restricted to the momentum rows: W_pp^{-1} rhs when W_pp is
// positive definite, otherwise an SVD pseudo-inverse with a relative cutoff.
// Solving against rhs (rather than forming the inverse) keeps the Schur
// complement accurate when the squeezing makes W_pp badly conditioned.
Matrix projected_solve(const Matrix &w_pp, const Matrix &rhs) {
    Eigen::LLT<Matrix> llt(w_pp);
    if(llt.info() == Eigen::Success) return llt.solve(rhs);

    Eigen::JacobiSVD<Matrix> svd(w_pp, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto &sv     = svd.singularValues();
    const double cut   = sv.size() > 0 ? kPinvCutoff * sv(0) : 0.0;
    Vector       inv_s = Vector::Zero(sv.size());
    for(Eigen::Index i = 0; i < sv.size(); ++i)
        if(sv(i) > cut) inv_s(i) = 1.0 / sv(i);
    return svd.matrixV() * (inv_s.asDiagonal() * (svd.matrixU().transpose() * rhs));
}

} // namespace

std::string_view to_string(ModeRole role) {
    switch(role) {
        case ModeRole::boundary: return "boundary";
        case ModeRole::bulk: return "bulk";
        case ModeRole::split: return "split";
        case ModeRole::probe: return "probe";
    }
    return "unknown";
}

ModeRole parse_mode_role(std::string_view text) {
    if(text == "boundary") return ModeRole::boundary;
    if(text == "bulk") return ModeRole::bulk;
    if(text == "split") return ModeRole::split;
    if(text == "probe") return ModeRole::probe;
    throw std::invalid_argument("unknown mode role '" + std::string(text) + "'");
}

QuadratureLayout::QuadratureLayout(std::vector<ModeRole> roles, std::vector<std::size_t> labels)
    : roles_(std::move(roles)), labels_(std::move(labels)) {
    if(roles_.empty()) throw std::invalid_argument("layout needs at least one mode");
    if(labels_.empty()) {
        labels_.resize(roles_.size());
        std::iota(labels_.begin(), labels_.end(), std::size_t{0});
    }
    if(labels_.size() != roles_.size()) throw std::invalid_argument("one label per mode required");
}

QuadratureLayout QuadratureLayout::uniform(std::size_t num_modes, ModeRole role) {
    return QuadratureLayout(std::vector<ModeRole>(num_modes, role));
}

std::optional<std::size_t> QuadratureLayout::mode_of_label(std::size_t label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if(it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<std::size_t> QuadratureLayout::measured_modes() const {
    std::vector<std::size_t> out;
    for(std::size_t i = 0; i < roles_.size(); ++i)
        if(is_measured(roles_[i])) out.push_back(i);
    return out;
}

QuadratureLayout QuadratureLayout::restrict_to(std::span<const std::size_t> modes) const {
    std::vector<ModeRole>    roles;
    std::vector<std::size_t> labels;
    for(auto m : modes) {
        roles.push_back(role(m));
        labels.push_back(label(m));
    }
    return QuadratureLayout(std::move(roles), std::move(labels));
}

Matrix commutation_form(std::size_t num_modes) {
    const auto n     = static_cast<Eigen::Index>(num_modes);
    Matrix     omega = Matrix::Zero(2 * n, 2 * n);
    omega.topRightCorner(n, n).setIdentity();
    omega.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    return omega;
}

std::vector<Eigen::Index> quadrature_indices(std::span<const std::size_t> modes, std::size_t num_modes) {
    std::vector<Eigen::Index> idx;
    idx.reserve(2 * modes.size());
    for(auto m : modes) {
        if(m >= num_modes) throw std::invalid_argument("mode " + std::to_string(m) + " out of range");
        idx.push_back(static_cast<Eigen::Index>(m));
    }
    for(auto m : modes) idx.push_back(static_cast<Eigen::Index>(num_modes + m));
    return idx;
}

std::vector<double> williamson_eigenvalues(const Matrix &covariance) {
    if(covariance.rows() != covariance.cols() || covariance.rows() % 2 != 0 || covariance.rows() == 0)
        throw std::invalid_argument("covariance must be a non-empty 2M x 2M matrix");
    const auto n = covariance.rows() / 2;

    // V = L L^T, then L^T Omega L is antisymmetric and similar to Omega V,
    // so -(L^T Omega L)^2 has eigenvalues nu_m^2, each twice.
    Eigen::LLT<Matrix> llt(symmetrized(covariance));
    if(llt.info() != Eigen::Success) throw std::invalid_argument("covariance is not positive definite");
    const Matrix l    = llt.matrixL();
    const Matrix a    = l.bottomRows(n).transpose() * l.topRows(n) - l.topRows(n).transpose() * l.bottomRows(n);
    const Matrix gram = a.transpose() * a;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    const Vector &sq = eig.eigenvalues(); // ascending
    std::vector<double> nu;
    nu.reserve(static_cast<std::size_t>(n));
    for(Eigen::Index m = 0; m < n; ++m) {
        const double pair = 0.5 * (sq(2 * m) + sq(2 * m + 1));
        nu.push_back(std::sqrt(std::max(pair, 0.0)));
    }
    std::sort(nu.begin(), nu.end(), std::greater<>());
    return nu;
}

GaussianState::GaussianState(QuadratureLayout layout, Matrix covariance, Vector mean)
    : layout_(std::move(layout)), covariance_(symmetrized(covariance)), mean_(std::move(mean)) {
    const auto dim = static_cast<Eigen::Index>(2 * layout_.num_modes());
    if(covariance_.rows() != dim || covariance_.cols() != dim)
        throw std::invalid_argument("covariance dimension does not match layout");
    if(mean_.size() != dim) throw std::invalid_argument("mean dimension does not match layout");
    const auto nu = williamson_eigenvalues(covariance_);
    if(nu.back() < 0.5 - kUncertaintySlack)
        throw std::invalid_argument(fmt::format("covariance violates the uncertainty bound (nu_min = 1/2 - {:.3e})",
                                                0.5 - nu.back()));
}

GaussianState::GaussianState(QuadratureLayout layout, Matrix covariance)
    : GaussianState(layout, std::move(covariance), Vector::Zero(static_cast<Eigen::Index>(2 * layout.num_modes()))) {}

Matrix GaussianState::sub_covariance(std::span<const std::size_t> modes) const {
    const auto idx = quadrature_indices(modes, num_modes());
    return covariance_(idx, idx);
}

GaussianState GaussianState::reduced(std::span<const std::size_t> modes) const {
    const auto idx = quadrature_indices(modes, num_modes());
    return GaussianState(layout_.restrict_to(modes), covariance_(idx, idx), mean_(idx));
}

SymplecticMatrix::SymplecticMatrix(Matrix matrix) : matrix_(std::move(matrix)) {
    if(matrix_.rows() != matrix_.cols() || matrix_.rows() % 2 != 0 || matrix_.rows() == 0)
        throw std::invalid_argument("symplectic matrix must be 2N x 2N");
    const Matrix omega = commutation_form(num_modes());
    const double err   = (matrix_ * omega * matrix_.transpose() - omega).cwiseAbs().maxCoeff();
    if(err > kSymplecticTol) throw std::invalid_argument("matrix is not symplectic (residual " + std::to_string(err) + ")");
}

GaussianState make_initial_state(const QuadratureLayout &layout, double mu) {
    if(!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("squeezing mu must be positive");
    const auto n   = static_cast<Eigen::Index>(layout.num_modes());
    Vector     var(2 * n);
    var.head(n).setConstant(1.0 / (2.0 * mu));
    var.tail(n).setConstant(mu / 2.0);
    return GaussianState(layout, var.asDiagonal().toDenseMatrix());
}

GaussianState make_initial_state(std::size_t num_modes, double mu) {
    if(num_modes == 0) throw std::invalid_argument("need at least one mode");
    return make_initial_state(QuadratureLayout::uniform(num_modes), mu);
}

SymplecticMatrix quench_propagator(const Matrix &coupling, double t) {
    if(coupling.rows() != coupling.cols() || coupling.rows() == 0)
        throw std::invalid_argument("coupling matrix must be square and non-empty");
    if((coupling - coupling.transpose()).cwiseAbs().maxCoeff() > kCouplingSymTol)
        throw std::invalid_argument("coupling matrix is not symmetric");
    const auto n = coupling.rows();
    Matrix     s = Matrix::Identity(2 * n, 2 * n);
    s.bottomLeftCorner(n, n) = -t * coupling;
    return SymplecticMatrix(std::move(s));
}

GaussianState apply_symplectic(const GaussianState &state, const SymplecticMatrix &s) {
    if(s.num_modes() != state.num_modes()) throw std::invalid_argument("propagator dimension mismatch");
    const Matrix &m = s.matrix();
    return GaussianState(state.layout(), m * state.covariance() * m.transpose(), m * state.mean());
}

GaussianState apply_quench(const GaussianState &state, const Matrix &coupling, double t) {
    if(static_cast<std::size_t>(coupling.rows()) != state.num_modes())
        throw std::invalid_argument("coupling matrix does not match the number of modes");
    return apply_symplectic(state, quench_propagator(coupling, t));
}

GaussianState condition_on_momentum_measurement(const GaussianState &state, std::span<const std::size_t> measured) {
    const auto    part = partition(state, measured);
    const Matrix &v    = state.covariance();
    const Matrix  b    = v(part.keep_idx, part.keep_idx);
    const Matrix  c    = v(part.keep_idx, part.meas_p);
    const Matrix  w_pp = v(part.meas_p, part.meas_p);
    const Matrix  cond = b - c * projected_solve(w_pp, c.transpose());
    return GaussianState(state.layout().restrict_to(part.keep), cond);
}

Matrix conditional_mean_map(const GaussianState &state, std::span<const std::size_t> measured) {
    const auto    part = partition(state, measured);
    const Matrix &v    = state.covariance();
    const Matrix  c    = v(part.keep_idx, part.meas_p);
    return projected_solve(v(part.meas_p, part.meas_p), c.transpose()).transpose();
}

Vector conditional_mean(const GaussianState &state, const MeasurementRecord &record) {
    if(static_cast<std::size_t>(record.outcomes.size()) != record.measured_modes.size())
        throw std::invalid_argument("one outcome per measured mode required");
    const auto   part  = partition(state, record.measured_modes);
    const Matrix map   = conditional_mean_map(state, record.measured_modes);
    const Vector prior = state.mean()(part.meas_p);
    return state.mean()(part.keep_idx) + map * (record.outcomes - prior);
}

MeasurementRecord sample_measurement(const GaussianState &state, std::span<const std::size_t> measured,
                                     std::uint64_t seed) {
    const auto   n    = state.num_modes();
    const auto   idx  = momentum_indices(measured, n);
    const Matrix w_pp = state.covariance()(idx, idx);
    const Vector mean = state.mean()(idx);

    Eigen::LLT<Matrix> llt(w_pp);
    if(llt.info() != Eigen::Success) throw std::invalid_argument("measured momentum covariance is singular");

    std::mt19937_64                  rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector                           z(w_pp.rows());
    for(Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);

    MeasurementRecord record;
    record.measured_modes.assign(measured.begin(), measured.end());
    record.outcomes = mean + llt.matrixL() * z;
    record.seed     = seed;
    return record;
}

} // namespace holo
