#include "gkclim/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "gkclim/toml.hpp"

namespace gkclim::sensitivity {

using Kind = NumericalError::Kind;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_likelihood(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
    double ll = 0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        // log(1 + e^eta) without overflow
        const double e = eta[i];
        const double softplus = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
        ll += y[i] * e - softplus;
    }
    return ll;
}

Eigen::VectorXd logistic(const Eigen::VectorXd& eta) {
    return eta.unaryExpr([](double e) {
        return e >= 0 ? 1.0 / (1.0 + std::exp(-e)) : std::exp(e) / (1.0 + std::exp(e));
    });
}

Eigen::VectorXd solve_symmetric(const Eigen::MatrixXd& h, const Eigen::VectorXd& b) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        const double dmin = ldlt.vectorD().minCoeff();
        const double dmax = ldlt.vectorD().maxCoeff();
        if (dmin > 1e-14 * dmax) return ldlt.solve(b);
    }
    return h.completeOrthogonalDecomposition().solve(b);
}

double sample_sd(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size() - 1));
}

// v minus its least-squares projection onto span(basis), via thin QR.
Eigen::VectorXd residual(const Eigen::HouseholderQR<Eigen::MatrixXd>& qr, Eigen::Index rank,
                         const Eigen::VectorXd& v) {
    Eigen::VectorXd c = qr.householderQ().adjoint() * v;
    c.head(rank).setZero();
    return qr.householderQ() * c;
}

double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd ac = a.array() - a.mean();
    const Eigen::VectorXd bc = b.array() - b.mean();
    const double denom = std::sqrt(ac.squaredNorm() * bc.squaredNorm());
    if (!(denom > 0)) throw NumericalError(Kind::ZeroVariance, "residual has zero variance");
    return std::clamp(ac.dot(bc) / denom, -1.0, 1.0);
}

}  // namespace

DesignMatrix make_design(Eigen::MatrixXd values, std::vector<std::string> names) {
    if (static_cast<Eigen::Index>(names.size()) != values.cols())
        throw NumericalError(Kind::InvalidArgument, "column names do not match the matrix");
    if (!values.allFinite())
        throw NumericalError(Kind::InvalidArgument, "design matrix has non-finite entries");
    DesignMatrix m;
    m.values = std::move(values);
    m.names = std::move(names);
    return m;
}

DesignMatrix standardize(const DesignMatrix& m) {
    if (m.rows() < 2) throw NumericalError(Kind::InsufficientData, "standardize needs two rows");
    DesignMatrix out = m;
    out.means.resize(m.cols());
    out.stddevs.resize(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const Eigen::VectorXd col = m.values.col(j);
        const double mean = col.mean();
        const double sd = sample_sd(col);
        const double scale = std::max(std::abs(mean), col.cwiseAbs().maxCoeff());
        if (!(sd > 1e-14 * std::max(scale, 1e-300)))
            throw NumericalError(Kind::ZeroVariance,
                                 "column '" + (j < static_cast<Eigen::Index>(m.names.size())
                                                   ? m.names[j]
                                                   : std::to_string(j)) +
                                     "' has zero variance");
        Eigen::VectorXd z = (col.array() - mean) / sd;
        // One correction pass pushes the mean below 1e-12 despite rounding.
        z.array() -= z.mean();
        out.values.col(j) = z;
        out.means[j] = mean;
        out.stddevs[j] = sd;
    }
    return out;
}

LogisticFit logistic_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::Index n = x.rows();
    const Eigen::Index k = x.cols();
    if (y.size() != n) throw NumericalError(Kind::InvalidArgument, "label count mismatch");
    if (n <= k + 1)
        throw NumericalError(Kind::InsufficientData, "logistic regression needs n > k + 1");
    for (Eigen::Index i = 0; i < n; ++i)
        if (y[i] != 0.0 && y[i] != 1.0)
            throw NumericalError(Kind::InvalidArgument, "labels must be 0 or 1");
    const double ones = y.sum();
    if (ones == 0 || ones == static_cast<double>(n))
        throw NumericalError(Kind::SingleClass, "all outcomes fall in one class");

    Eigen::MatrixXd xd(n, k + 1);
    xd.col(0).setOnes();
    xd.rightCols(k) = x;

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(k + 1);
    Eigen::VectorXd eta = xd * beta;
    double ll = log_likelihood(eta, y);
    LogisticFit fit;
    Eigen::MatrixXd hessian;

    for (int it = 0;; ++it) {
        const Eigen::VectorXd p = logistic(eta);
        const Eigen::VectorXd score = xd.transpose() * (y - p);
        const Eigen::VectorXd w = p.array() * (1.0 - p.array());
        hessian = xd.transpose() * w.asDiagonal() * xd;
        fit.iterations = it;
        const Eigen::VectorXd step = solve_symmetric(hessian, score);
        if (score.cwiseAbs().maxCoeff() < kScoreTolerance &&
            step.cwiseAbs().maxCoeff() < 1e-6 * (1.0 + beta.cwiseAbs().maxCoeff())) {
            fit.converged = true;
            break;
        }
        if (it == kMaxIterations) break;

        double t = 1.0;
        Eigen::VectorXd trial = beta + step;
        Eigen::VectorXd trial_eta = xd * trial;
        double trial_ll = log_likelihood(trial_eta, y);
        while (!(trial_ll >= ll) && t > 1e-10) {
            t *= 0.5;
            trial = beta + t * step;
            trial_eta = xd * trial;
            trial_ll = log_likelihood(trial_eta, y);
        }
        if (!(trial_ll >= ll)) break;
        const bool improving = trial_ll > ll + 1e-12 * std::max(1.0, std::abs(ll));
        beta = trial;
        eta = trial_eta;
        ll = trial_ll;
        if (beta.norm() > kSeparationNorm && improving) {
            std::ostringstream msg;
            msg << "outcomes are (quasi-)separated: coefficient norm " << beta.norm()
                << " after " << it + 1 << " iterations with the likelihood still improving";
            throw SeparationError(msg.str(), beta);
        }
    }

    const Eigen::MatrixXd cov = hessian.completeOrthogonalDecomposition().pseudoInverse();
    fit.log_likelihood = ll;
    fit.intercept = beta[0];
    fit.intercept_se = std::sqrt(cov(0, 0));
    fit.coefficients = beta.tail(k);
    fit.std_errors.resize(k);
    fit.z_values.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        fit.std_errors[j] = std::sqrt(cov(j + 1, j + 1));
        fit.z_values[j] = fit.coefficients[j] / fit.std_errors[j];
    }
    return fit;
}

Eigen::VectorXd rank_transform(const Eigen::VectorXd& v) {
    const auto n = static_cast<std::size_t>(v.size());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    Eigen::VectorXd ranks(v.size());
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t l = i; l <= j; ++l) ranks[order[l]] = avg;
        i = j + 1;
    }
    return ranks;
}

PrccDetail prcc_detail(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::Index n = x.rows();
    const Eigen::Index k = x.cols();
    if (y.size() != n) throw NumericalError(Kind::InvalidArgument, "output length mismatch");
    if (n <= k + 2) throw NumericalError(Kind::InsufficientData, "PRCC needs n > k + 2 runs");
    if (!x.allFinite() || !y.allFinite())
        throw NumericalError(Kind::InvalidArgument, "PRCC inputs must be finite");

    PrccDetail d;
    d.ranks.resize(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        d.ranks.col(j) = rank_transform(x.col(j));
        if (d.ranks.col(j).maxCoeff() == d.ranks.col(j).minCoeff())
            throw NumericalError(Kind::ZeroVariance,
                                 "input column " + std::to_string(j) + " is constant");
    }
    d.output_ranks = rank_transform(y);
    if (d.output_ranks.maxCoeff() == d.output_ranks.minCoeff())
        throw NumericalError(Kind::ZeroVariance, "output is constant");

    d.coefficients.resize(k);
    d.input_residuals.resize(n, k);
    d.output_residuals.resize(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::MatrixXd z(n, k);
        z.col(0).setOnes();
        for (Eigen::Index l = 0, c = 1; l < k; ++l)
            if (l != j) z.col(c++) = d.ranks.col(l);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
        d.input_residuals.col(j) = residual(qr, k, d.ranks.col(j));
        d.output_residuals.col(j) = residual(qr, k, d.output_ranks);
        d.coefficients[j] = correlation(d.input_residuals.col(j), d.output_residuals.col(j));
    }
    return d;
}

Eigen::VectorXd prcc(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    return prcc_detail(x, y).coefficients;
}

SensitivityReport analyze_batch(const DesignMatrix& draws, const std::vector<double>& value,
                                double threshold, double readout_year, std::uint64_t seed) {
    const Eigen::Index n = draws.rows();
    const Eigen::Index k = draws.cols();
    if (static_cast<Eigen::Index>(value.size()) != n)
        throw NumericalError(Kind::InvalidArgument, "one output value per run is required");

    SensitivityReport r;
    r.threshold = threshold;
    r.readout_year = readout_year;
    r.seed = seed;
    r.n_total = static_cast<std::size_t>(n);
    r.parameters.resize(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) {
        auto& ps = r.parameters[static_cast<std::size_t>(j)];
        ps.parameter = draws.names[static_cast<std::size_t>(j)];
        ps.logit_coef = ps.std_err = ps.z_value = ps.prcc = kNaN;
    }

    Eigen::VectorXd labels(n);
    std::vector<Eigen::Index> good;
    for (Eigen::Index i = 0; i < n; ++i) {
        labels[i] = value[static_cast<std::size_t>(i)] > threshold ? 1.0 : 0.0;
        if (labels[i] == 1.0) good.push_back(i);
    }
    r.n_good = good.size();

    try {
        const DesignMatrix z = standardize(draws);
        const LogisticFit fit = logistic_fit(z.values, labels);
        r.intercept = fit.intercept;
        r.intercept_se = fit.intercept_se;
        r.logistic_iterations = fit.iterations;
        if (!fit.converged) {
            r.logistic_status = "NotConverged";
            r.logistic_message = "iteration limit reached";
        }
        for (Eigen::Index j = 0; j < k; ++j) {
            auto& ps = r.parameters[static_cast<std::size_t>(j)];
            ps.logit_coef = fit.coefficients[j];
            ps.std_err = fit.std_errors[j];
            ps.z_value = fit.z_values[j];
        }
    } catch (const SeparationError& e) {
        r.logistic_status = to_string(e.kind());
        r.logistic_message = e.what();
        r.intercept = e.coefficients()[0];
        r.intercept_se = kNaN;
        for (Eigen::Index j = 0; j < k; ++j)
            r.parameters[static_cast<std::size_t>(j)].logit_coef = e.coefficients()[j + 1];
    } catch (const NumericalError& e) {
        r.logistic_status = to_string(e.kind());
        r.logistic_message = e.what();
        r.intercept = r.intercept_se = kNaN;
    }

    try {
        if (good.size() < 2)
            throw NumericalError(Kind::InsufficientData, "fewer than two runs above the threshold");
        Eigen::MatrixXd xg(static_cast<Eigen::Index>(good.size()), k);
        Eigen::VectorXd yg(static_cast<Eigen::Index>(good.size()));
        for (std::size_t i = 0; i < good.size(); ++i) {
            xg.row(static_cast<Eigen::Index>(i)) = draws.values.row(good[i]);
            yg[static_cast<Eigen::Index>(i)] = value[static_cast<std::size_t>(good[i])];
        }
        const Eigen::VectorXd c = prcc(xg, yg);
        for (Eigen::Index j = 0; j < k; ++j) r.parameters[static_cast<std::size_t>(j)].prcc = c[j];
    } catch (const NumericalError& e) {
        r.prcc_status = to_string(e.kind());
        r.prcc_message = e.what();
    }
    return r;
}

namespace {

std::string num(double v) { return std::isfinite(v) ? toml::format_double(v) : "nan"; }

nlohmann::ordered_json json_number(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string report_csv(const SensitivityReport& r) {
    std::ostringstream out;
    out << "parameter,logit_coef,std_err,prcc,n_good,n_total\n";
    for (const auto& p : r.parameters)
        out << p.parameter << ',' << num(p.logit_coef) << ',' << num(p.std_err) << ','
            << num(p.prcc) << ',' << r.n_good << ',' << r.n_total << '\n';
    return out.str();
}

std::string report_json(const SensitivityReport& r, int indent) {
    nlohmann::ordered_json j;
    j["metadata"] = {{"threshold", r.threshold},
                     {"readout_year", r.readout_year},
                     {"seed", r.seed},
                     {"n_total", r.n_total},
                     {"n_good", r.n_good}};
    j["logistic"] = {{"status", r.logistic_status},
                     {"message", r.logistic_message},
                     {"iterations", r.logistic_iterations},
                     {"intercept", json_number(r.intercept)},
                     {"intercept_se", json_number(r.intercept_se)}};
    j["prcc"] = {{"status", r.prcc_status}, {"message", r.prcc_message}};
    auto& params = j["parameters"] = nlohmann::ordered_json::array();
    for (const auto& p : r.parameters)
        params.push_back({{"parameter", p.parameter},
                          {"logit_coef", json_number(p.logit_coef)},
                          {"std_err", json_number(p.std_err)},
                          {"z_value", json_number(p.z_value)},
                          {"prcc", json_number(p.prcc)}});
    return j.dump(indent);
}

}  // namespace gkclim::sensitivity
