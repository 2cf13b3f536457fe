#include "holoquench/fitting.hpp"

#include "holoquench/errors.hpp"
#include "holoquench/holography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

namespace holo {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t ring_size_of(const std::vector<double> &x, std::size_t declared) {
    if(declared > 0) return declared;
    if(x.empty()) throw std::invalid_argument("empty curve");
    return static_cast<std::size_t>(std::llround(*std::max_element(x.begin(), x.end()))) + 1;
}

void check_curve(const std::vector<double> &x, const std::vector<double> &y) {
    if(x.size() != y.size()) throw std::invalid_argument("curve abscissae and values differ in length");
    for(double v : y)
        if(!std::isfinite(v)) throw std::invalid_argument("curve contains non-finite values");
}

Vector parameter_errors(const Matrix &jac, double rss, std::size_t n) {
    const auto p = static_cast<std::size_t>(jac.cols());
    if(n <= p) throw DegenerateFitError("need more data points than parameters");
    const double s2  = rss / static_cast<double>(n - p);
    const Matrix cov = s2 * (jac.transpose() * jac).completeOrthogonalDecomposition().pseudoInverse();
    return cov.diagonal().cwiseMax(0.0).cwiseSqrt();
}

// Linear model y ~ X b. Throws DegenerateFitError if X is rank deficient.
Vector linear_solve(const Matrix &x, const Vector &y) {
    Eigen::ColPivHouseholderQR<Matrix> qr(x);
    qr.setThreshold(1e-12);
    if(qr.rank() < x.cols()) throw DegenerateFitError("design matrix is rank deficient");
    return qr.solve(y);
}

// ---- BTZ one-sided model, linear in (c, eps) once beta fixes the branch ----

struct BtzPoint {
    double g;      // coefficient of c
    double dg;     // d g / d beta
};

BtzPoint btz_basis(double ell, double beta, double L) {
    auto branch = [&](double arg_len, double thermal) {
        const double x    = kPi * arg_len / beta;
        const double g    = thermal + (std::log(beta / kPi) + log_sinh(x)) / 3.0;
        const double coth = 1.0 / std::tanh(x);
        const double dg   = -thermal / beta + (1.0 / beta - x / beta * coth) / 3.0;
        return BtzPoint{g, dg};
    };
    const BtzPoint a = branch(ell, 0.0);
    const BtzPoint b = branch(L - ell, kPi * L / (3.0 * beta));
    return a.g <= b.g ? a : b;
}

struct BtzData {
    std::vector<double> ell, s;
    double              L;
};

struct LmState {
    Vector theta; // c, eps, beta
    Vector r;     // model - data
    Matrix jac;
    double cost = std::numeric_limits<double>::infinity();
    int    iterations = 0;
    bool   converged  = false;
};

bool btz_eval(const BtzData &d, const Vector &theta, Vector &r, Matrix *jac) {
    const double c = theta(0), eps = theta(1), beta = theta(2);
    if(!(beta > 0.0) || !std::isfinite(c) || !std::isfinite(eps)) return false;
    const auto n = static_cast<Eigen::Index>(d.ell.size());
    r.resize(n);
    if(jac) jac->resize(n, 3);
    for(Eigen::Index i = 0; i < n; ++i) {
        const auto p = btz_basis(d.ell[i], beta, d.L);
        r(i)         = c * p.g + eps - d.s[i];
        if(jac) jac->row(i) << p.g, 1.0, c * p.dg;
    }
    return r.allFinite();
}

LmState levenberg_marquardt(const BtzData &d, Vector theta, int max_iterations) {
    LmState st;
    st.theta = theta;
    if(!btz_eval(d, st.theta, st.r, &st.jac)) return st;
    st.cost       = st.r.squaredNorm();
    double lambda = 1e-3;

    while(st.iterations < max_iterations) {
        ++st.iterations;
        const Matrix a = st.jac.transpose() * st.jac;
        const Vector g = st.jac.transpose() * st.r;
        Vector       diag = a.diagonal().cwiseMax(1e-12 * a.diagonal().maxCoeff());
        bool         accepted = false;
        while(lambda < 1e16) {
            Matrix m = a;
            m.diagonal() += lambda * diag;
            const Vector step = m.ldlt().solve(-g);
            const Vector trial = st.theta + step;
            Vector       r;
            Matrix       jac;
            if(btz_eval(d, trial, r, &jac) && r.squaredNorm() < st.cost) {
                const double new_cost = r.squaredNorm();
                const bool   small_step = step.norm() <= 1e-12 * (st.theta.norm() + 1e-12);
                const bool   flat       = st.cost - new_cost <= 1e-15 * st.cost;
                st.theta = trial;
                st.r     = std::move(r);
                st.jac   = std::move(jac);
                st.cost  = new_cost;
                lambda   = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                if(small_step || flat || new_cost < 1e-30) st.converged = true;
                break;
            }
            lambda *= 10.0;
        }
        if(!accepted) st.converged = true; // no descent direction left: stationary point
        if(st.converged) break;
    }
    return st;
}

FitResult btz_result(const BtzData &d, const LmState &st) {
    FitResult fit;
    fit.model      = ModelId::btz_one_sided;
    fit.domain     = d.ell;
    fit.iterations = st.iterations;
    for(Eigen::Index i = 0; i < st.r.size(); ++i) fit.residuals.push_back(-st.r(i));
    fit.residual_norm = std::sqrt(st.cost);
    const Vector se   = parameter_errors(st.jac, st.cost, d.ell.size());
    fit.params        = {{"c", st.theta(0), se(0)}, {"eps", st.theta(1), se(1)}, {"beta", st.theta(2), se(2)}};
    return fit;
}

// Plateau P minimising sum (d - min(s1, 2P))^2: on each interval between sorted
// connected-branch values the saturated set is fixed and the optimum is a clamped mean.
std::pair<double, std::size_t> fit_plateau(const std::vector<double> &half_s1, const std::vector<double> &half_data) {
    const std::size_t   n = half_s1.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return half_s1[a] < half_s1[b]; });

    auto cost_at = [&](double p) {
        double c = 0.0;
        for(std::size_t i = 0; i < n; ++i) {
            const double m = 2.0 * std::min(half_s1[i], p);
            c += (2.0 * half_data[i] - m) * (2.0 * half_data[i] - m);
        }
        return c;
    };

    double      best_p = half_s1[order.back()], best_cost = cost_at(best_p);
    std::size_t best_sat = 0;
    // k = number of points left on the connected branch (those with the k smallest s1)
    for(std::size_t k = 0; k < n; ++k) {
        const double lo = k == 0 ? -std::numeric_limits<double>::infinity() : half_s1[order[k - 1]];
        const double hi = half_s1[order[k]];
        double       mean = 0.0;
        for(std::size_t j = k; j < n; ++j) mean += half_data[order[j]];
        mean /= static_cast<double>(n - k);
        const double p = std::clamp(mean, lo, hi);
        const double c = cost_at(p);
        if(c < best_cost) {
            best_cost = c;
            best_p    = p;
            best_sat  = n - k;
        }
    }
    return {best_p, best_sat};
}

} // namespace

std::string_view to_string(ModelId id) {
    switch(id) {
        case ModelId::cft_disk: return "cft_disk";
        case ModelId::btz_one_sided: return "btz_one_sided";
        case ModelId::btz_two_sided: return "btz_two_sided";
        case ModelId::power_law: return "power_law";
    }
    return "unknown";
}

ModelId parse_model_id(std::string_view text) {
    for(auto id : {ModelId::cft_disk, ModelId::btz_one_sided, ModelId::btz_two_sided, ModelId::power_law})
        if(text == to_string(id)) return id;
    throw std::invalid_argument("unknown model '" + std::string(text) + "'");
}

double FitResult::value(std::string_view name) const {
    for(const auto &p : params)
        if(p.name == name) return p.value;
    throw std::out_of_range("fit has no parameter '" + std::string(name) + "'");
}

double FitResult::error(std::string_view name) const {
    for(const auto &p : params)
        if(p.name == name) return p.std_error;
    throw std::out_of_range("fit has no parameter '" + std::string(name) + "'");
}

double FitResult::rms() const {
    return residuals.empty() ? 0.0 : residual_norm / std::sqrt(static_cast<double>(residuals.size()));
}

FitResult fit_cft_entropy(const EntropyCurve &curve, std::size_t margin) {
    check_curve(curve.ell, curve.entropy);
    const double L = static_cast<double>(ring_size_of(curve.ell, curve.ring_size));

    std::vector<double> ell, s;
    for(std::size_t i = 0; i < curve.ell.size(); ++i) {
        const double l = curve.ell[i];
        if(l <= 0.0 || l >= L) throw std::invalid_argument("region size outside (0, L)");
        if(l > static_cast<double>(margin) && l < L - static_cast<double>(margin)) {
            ell.push_back(l);
            s.push_back(curve.entropy[i]);
        }
    }
    if(ell.size() < 4) throw std::invalid_argument("CFT fit needs at least 4 points in the fit domain");

    const auto n = static_cast<Eigen::Index>(ell.size());
    Matrix     x(n, 2);
    Vector     y(n);
    for(Eigen::Index i = 0; i < n; ++i) {
        x(i, 0) = std::log(std::sin(kPi * ell[i] / L)) / 3.0;
        x(i, 1) = 1.0;
        y(i)    = s[i];
    }
    const Vector b   = linear_solve(x, y);
    const Vector res = y - x * b;
    const double rss = res.squaredNorm();
    const Vector se  = parameter_errors(x, rss, ell.size());

    FitResult fit;
    fit.model         = ModelId::cft_disk;
    fit.domain        = ell;
    fit.residuals     = std::vector<double>(res.data(), res.data() + res.size());
    fit.residual_norm = std::sqrt(rss);
    fit.params        = {{"c", b(0), se(0)}, {"eps", b(1), se(1)}};
    return fit;
}

FitResult fit_btz_entropy(const EntropyCurve &one_sided, const EntropyCurve *two_sided, const BtzFitOptions &options) {
    check_curve(one_sided.ell, one_sided.entropy);
    BtzData d;
    d.L = static_cast<double>(ring_size_of(one_sided.ell, one_sided.ring_size));
    for(std::size_t i = 0; i < one_sided.ell.size(); ++i) {
        const double l = one_sided.ell[i];
        if(l <= 0.0 || l >= d.L) throw std::invalid_argument("region size outside (0, L)");
        if(l > static_cast<double>(options.margin) && l < d.L - static_cast<double>(options.margin)) {
            d.ell.push_back(l);
            d.s.push_back(one_sided.entropy[i]);
        }
    }
    if(d.ell.size() < 4) throw std::invalid_argument("BTZ fit needs at least 4 points in the fit domain");
    if(options.fit_plateau && !two_sided) throw std::invalid_argument("plateau fit needs a two-sided curve");

    LmState best;
    for(double frac : {0.125, 0.25, 0.5, 1.0}) {
        const double beta0 = frac * d.L;
        const auto   n     = static_cast<Eigen::Index>(d.ell.size());
        Matrix       x(n, 2);
        Vector       y(n);
        for(Eigen::Index i = 0; i < n; ++i) {
            x(i, 0) = btz_basis(d.ell[i], beta0, d.L).g;
            x(i, 1) = 1.0;
            y(i)    = d.s[i];
        }
        Vector start(3);
        try {
            const Vector lin = linear_solve(x, y);
            start << lin(0), lin(1), beta0;
        } catch(const DegenerateFitError &) {
            continue;
        }
        LmState st = levenberg_marquardt(d, start, options.max_iterations);
        if(st.cost < best.cost) best = std::move(st);
    }
    if(!std::isfinite(best.cost)) throw DegenerateFitError("no BTZ start produced a finite residual");

    FitResult fit = btz_result(d, best);
    if(!best.converged)
        throw FitFailure("BTZ fit did not converge within " + std::to_string(options.max_iterations) + " iterations",
                         fit);
    if(!options.fit_plateau) return fit;

    check_curve(two_sided->ell, two_sided->entropy);
    const BtzEntropyModel m{fit.value("c"), fit.value("eps"), fit.value("beta"), d.L};
    std::vector<double>   ell, half_s1, half_data;
    for(std::size_t i = 0; i < two_sided->ell.size(); ++i) {
        const double l = two_sided->ell[i];
        if(l > 0.0 && l <= 0.5 * d.L) {
            ell.push_back(l);
            half_s1.push_back(btz_connected_branch(m, l));
            half_data.push_back(0.5 * two_sided->entropy[i]);
        }
    }
    if(ell.size() < 2) throw std::invalid_argument("plateau fit needs at least 2 two-sided points");
    const auto [plateau, saturated] = fit_plateau(half_s1, half_data);

    double rss2 = 0.0;
    for(std::size_t i = 0; i < ell.size(); ++i) {
        const double r = 2.0 * half_data[i] - btz_two_sided_entropy(m, ell[i], plateau);
        fit.residuals.push_back(r);
        fit.domain.push_back(ell[i]);
        rss2 += r * r;
    }
    const double s2 = rss2 / static_cast<double>(ell.size() - 1);
    const double se = saturated > 0 ? std::sqrt(s2 / (4.0 * static_cast<double>(saturated))) : 0.0;
    fit.params.push_back({"plateau", plateau, se});
    fit.residual_norm = std::sqrt(fit.residual_norm * fit.residual_norm + rss2);
    fit.model         = ModelId::btz_two_sided;
    return fit;
}

std::vector<double> power_law_domain(std::size_t L) {
    if(L < 4) throw std::invalid_argument("power-law fit needs a ring of at least 4 sites");
    std::vector<std::size_t> d(L - 1);
    std::iota(d.begin(), d.end(), std::size_t{1});
    // sin(pi d / L) through the nearer of d, L-d so mirrored separations tie exactly
    auto s = [L](std::size_t k) { return std::sin(kPi * static_cast<double>(std::min(k, L - k)) / static_cast<double>(L)); };
    std::stable_sort(d.begin(), d.end(), [&](auto a, auto b) { return s(a) > s(b); });
    const auto n = static_cast<std::size_t>(std::llround(static_cast<double>(L - 1) / 3.0));
    return std::vector<double>(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(n));
}

FitResult fit_power_law(const CorrelationCurve &curve) {
    check_curve(curve.separation, curve.covariance);
    const std::size_t L      = ring_size_of(curve.separation, curve.ring_size);
    const auto        domain = power_law_domain(L);
    if(domain.size() < 3) throw std::invalid_argument("power-law fit needs at least 3 points in the fit domain");

    std::map<long long, double> by_d;
    for(std::size_t i = 0; i < curve.separation.size(); ++i) by_d[std::llround(curve.separation[i])] = curve.covariance[i];

    FitResult fit;
    fit.model  = ModelId::power_law;
    fit.domain = domain;

    std::vector<double> v;
    for(double dd : domain) {
        auto it = by_d.find(std::llround(dd));
        if(it == by_d.end()) throw std::invalid_argument("curve lacks separation " + std::to_string(std::llround(dd)));
        v.push_back(it->second);
    }
    const int           sign = v.front() > 0 ? 1 : (v.front() < 0 ? -1 : 0);
    std::vector<long long> bad;
    for(std::size_t i = 0; i < v.size(); ++i)
        if(sign == 0 || (v[i] > 0 ? 1 : (v[i] < 0 ? -1 : 0)) != sign) bad.push_back(std::llround(domain[i]));
    if(!bad.empty()) {
        std::string list;
        for(auto b : bad) list += (list.empty() ? "" : ", ") + std::to_string(b);
        throw FitFailure("power-law values must share one strict sign; offending separations: " + list, fit);
    }

    const auto n = static_cast<Eigen::Index>(domain.size());
    Matrix     x(n, 2);
    Vector     y(n);
    for(Eigen::Index i = 0; i < n; ++i) {
        x(i, 0) = std::log(std::sin(kPi * domain[i] / static_cast<double>(L)));
        x(i, 1) = 1.0;
        y(i)    = std::log(std::abs(v[i]));
    }
    const Vector b   = linear_solve(x, y);
    const Vector res = y - x * b;
    const double rss = res.squaredNorm();
    const Vector se  = parameter_errors(x, rss, domain.size());
    const double amp = std::exp(b(1));

    fit.residuals     = std::vector<double>(res.data(), res.data() + res.size());
    fit.residual_norm = std::sqrt(rss);
    fit.params        = {{"Delta", -0.5 * b(0), 0.5 * se(0)}, {"amplitude", sign * amp, amp * se(1)}};
    return fit;
}

} // namespace holo
