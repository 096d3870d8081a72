#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "gkclim/errors.hpp"

namespace gkclim::sensitivity {

/// Runs in rows, parameters in columns. `means`/`stddevs` are filled by
/// standardize and describe the raw columns.
struct DesignMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> names;
    Eigen::VectorXd means;
    Eigen::VectorXd stddevs;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

/// Throws NumericalError(InvalidArgument) on non-finite entries or a name/column mismatch.
DesignMatrix make_design(Eigen::MatrixXd values, std::vector<std::string> names);

/// Column-wise (x - mean) / sd with the sample standard deviation.
/// Throws NumericalError(ZeroVariance).
DesignMatrix standardize(const DesignMatrix& m);

struct LogisticFit {
    double intercept = 0;
    double intercept_se = 0;
    Eigen::VectorXd coefficients;
    Eigen::VectorXd std_errors;
    Eigen::VectorXd z_values;
    double log_likelihood = 0;
    int iterations = 0;
    bool converged = false;
};

/// Raised when the likelihood keeps improving while the coefficient norm
/// passes the divergence bound; carries the last iterate.
class SeparationError : public NumericalError {
public:
    SeparationError(const std::string& what, Eigen::VectorXd coefficients)
        : NumericalError(Kind::Separation, what), coefficients_(std::move(coefficients)) {}
    /// Intercept first, then one entry per column.
    const Eigen::VectorXd& coefficients() const { return coefficients_; }

private:
    Eigen::VectorXd coefficients_;
};

inline constexpr double kSeparationNorm = 25.0;
inline constexpr double kScoreTolerance = 1e-8;
inline constexpr int kMaxIterations = 100;

/// Maximum-likelihood logistic regression with intercept by IRLS. `y` holds
/// 0/1 labels. Throws NumericalError(SingleClass, InsufficientData) or SeparationError.
LogisticFit logistic_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

/// Ranks 1..n, ties get the average rank.
Eigen::VectorXd rank_transform(const Eigen::VectorXd& v);

struct PrccDetail {
    Eigen::VectorXd coefficients;
    Eigen::MatrixXd ranks;             // rank-transformed inputs
    Eigen::VectorXd output_ranks;
    Eigen::MatrixXd input_residuals;   // column j: rank(x_j) given the others
    Eigen::MatrixXd output_residuals;  // column j: rank(y) given all but x_j
};

/// Partial rank correlation of each column with y. Throws
/// NumericalError(InsufficientData) unless n > k + 2, ZeroVariance on constant columns.
PrccDetail prcc_detail(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);
Eigen::VectorXd prcc(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

struct ParameterSensitivity {
    std::string parameter;
    double logit_coef = 0;
    double std_err = 0;
    double z_value = 0;
    double prcc = 0;
};

struct SensitivityReport {
    std::vector<ParameterSensitivity> parameters;
    double threshold = 0.4;
    double readout_year = 2100;
    std::uint64_t seed = 0;
    std::size_t n_total = 0;
    std::size_t n_good = 0;
    /// "ok" or the error kind of the stage; coefficients are NaN when not ok.
    std::string logistic_status = "ok";
    std::string logistic_message;
    std::string prcc_status = "ok";
    std::string prcc_message;
    double intercept = 0;
    double intercept_se = 0;
    int logistic_iterations = 0;
};

/// Logistic regression of [value > threshold] on standardized draws over all
/// runs, PRCC of value on the draws over the runs above the threshold. Stage
/// failures are recorded in the report rather than thrown. Non-finite values
/// count as below the threshold.
SensitivityReport analyze_batch(const DesignMatrix& draws, const std::vector<double>& value,
                                double threshold = 0.4, double readout_year = 2100,
                                std::uint64_t seed = 0);

/// parameter,logit_coef,std_err,prcc,n_good,n_total
std::string report_csv(const SensitivityReport& r);
std::string report_json(const SensitivityReport& r, int indent = 2);

}  // namespace gkclim::sensitivity
