#include <doctest.h>

#include <cmath>
#include <random>

#include "gkclim/sensitivity.hpp"

using namespace gkclim;
using namespace gkclim::sensitivity;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    Eigen::MatrixXd m(n, k);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < k; ++j) m(i, j) = z(rng);
    return m;
}

// PRCC through the inverse of the rank correlation matrix.
Eigen::VectorXd prcc_by_inverse(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::Index n = x.rows(), k = x.cols();
    Eigen::MatrixXd r(n, k + 1);
    for (Eigen::Index j = 0; j < k; ++j) r.col(j) = rank_transform(x.col(j));
    r.col(k) = rank_transform(y);
    const Eigen::RowVectorXd mu = r.colwise().mean();
    const Eigen::MatrixXd c = r.rowwise() - mu;
    Eigen::MatrixXd cov = c.transpose() * c;
    const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
    const Eigen::MatrixXd corr = cov.array() / (sd * sd.transpose()).array();
    const Eigen::MatrixXd inv = corr.inverse();
    Eigen::VectorXd out(k);
    for (Eigen::Index j = 0; j < k; ++j) out[j] = -inv(j, k) / std::sqrt(inv(j, j) * inv(k, k));
    return out;
}

NumericalError::Kind kind_of(const auto& fn) {
    try {
        fn();
    } catch (const NumericalError& e) {
        return e.kind();
    }
    FAIL("expected NumericalError");
    return NumericalError::Kind::InvalidArgument;
}

}  // namespace

TEST_SUITE("sensitivity") {

TEST_CASE("standardize") {
    Eigen::MatrixXd v(4, 2);
    v << 1, 10, 2, 20, 3, 30, 4, 40;
    const auto s = standardize(make_design(v, {"a", "b"}));
    CHECK(s.means[0] == doctest::Approx(2.5));
    CHECK(s.stddevs[0] == doctest::Approx(std::sqrt(5.0 / 3)));
    CHECK(s.values(0, 0) == doctest::Approx(-1.5 / std::sqrt(5.0 / 3)));
    CHECK(s.values.col(0).isApprox(s.values.col(1)));
    const auto again = standardize(s);
    CHECK((again.values - s.values).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(again.means.cwiseAbs().maxCoeff() < 1e-15);

    Eigen::MatrixXd c(3, 1);
    c << 2, 2, 2;
    CHECK(kind_of([&] { standardize(make_design(c, {"c"})); }) == NumericalError::Kind::ZeroVariance);
    CHECK(kind_of([&] { make_design(c, {"x", "y"}); }) == NumericalError::Kind::InvalidArgument);
    c(1, 0) = NAN;
    CHECK(kind_of([&] { make_design(c, {"c"}); }) == NumericalError::Kind::InvalidArgument);
}

TEST_CASE("intercept-only logistic fit") {
    Eigen::VectorXd y(8);
    y << 1, 0, 0, 0, 1, 0, 0, 0;
    const auto fit = logistic_fit(Eigen::MatrixXd(8, 0), y);
    CHECK(fit.converged);
    CHECK(fit.intercept == doctest::Approx(std::log(0.25 / 0.75)).epsilon(1e-10));
    CHECK(fit.intercept_se == doctest::Approx(std::sqrt(1.0 / (8 * 0.25 * 0.75))).epsilon(1e-8));
    CHECK(fit.log_likelihood == doctest::Approx(2 * std::log(0.25) + 6 * std::log(0.75)));
}

TEST_CASE("logistic fit recovers known coefficients") {
    const Eigen::Index n = 5000;
    const Eigen::MatrixXd x = random_matrix(n, 2, 17);
    std::mt19937_64 rng(18);
    std::uniform_real_distribution<double> u(0, 1);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double eta = 0.5 - x(i, 0) + 2 * x(i, 1);
        y[i] = u(rng) < 1 / (1 + std::exp(-eta)) ? 1 : 0;
    }
    const auto fit = logistic_fit(x, y);
    REQUIRE(fit.converged);
    CHECK(std::abs(fit.intercept - 0.5) < 3 * fit.intercept_se);
    CHECK(std::abs(fit.coefficients[0] + 1) < 3 * fit.std_errors[0]);
    CHECK(std::abs(fit.coefficients[1] - 2) < 3 * fit.std_errors[1]);
    CHECK(fit.z_values[1] == doctest::Approx(fit.coefficients[1] / fit.std_errors[1]));

    // Score equations hold at the optimum.
    Eigen::VectorXd eta = (x * fit.coefficients).array() + fit.intercept;
    const Eigen::VectorXd mu = (1 / (1 + (-eta.array()).exp())).matrix();
    CHECK(std::abs((y - mu).sum()) < 1e-6);
    CHECK((x.transpose() * (y - mu)).cwiseAbs().maxCoeff() < 1e-6);

    // Affine reparametrisation of a column rescales its coefficient.
    Eigen::MatrixXd x2 = x;
    x2.col(0) = 3 * x.col(0).array() + 7;
    const auto fit2 = logistic_fit(x2, y);
    CHECK(fit2.coefficients[0] * 3 == doctest::Approx(fit.coefficients[0]).epsilon(1e-8));
    CHECK(fit2.coefficients[1] == doctest::Approx(fit.coefficients[1]).epsilon(1e-8));
    CHECK(fit2.log_likelihood == doctest::Approx(fit.log_likelihood).epsilon(1e-10));
}

TEST_CASE("logistic fit failure modes") {
    Eigen::MatrixXd x(6, 1);
    x << -3, -2, -1, 1, 2, 3;
    Eigen::VectorXd y(6);
    y << 0, 0, 0, 1, 1, 1;
    try {
        logistic_fit(x, y);
        FAIL("expected SeparationError");
    } catch (const SeparationError& e) {
        CHECK(e.kind() == NumericalError::Kind::Separation);
        CHECK(e.coefficients().size() == 2);
        CHECK(e.coefficients().norm() > kSeparationNorm);
        CHECK(e.coefficients()[1] > 0);
    }
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(6);
    CHECK(kind_of([&] { logistic_fit(x, ones); }) == NumericalError::Kind::SingleClass);
    Eigen::MatrixXd tiny(2, 3);
    tiny.setRandom();
    Eigen::VectorXd y2(2);
    y2 << 0, 1;
    CHECK(kind_of([&] { logistic_fit(tiny, y2); }) == NumericalError::Kind::InsufficientData);
}

TEST_CASE("ranks") {
    Eigen::VectorXd v(6);
    v << 3.0, 1.0, 2.0, 2.0, 5.0, 2.0;
    Eigen::VectorXd expect(6);
    expect << 5, 1, 3, 3, 6, 3;
    CHECK(rank_transform(v) == expect);
}

TEST_CASE("prcc of monotone relations") {
    const Eigen::MatrixXd x = random_matrix(200, 3, 5);
    const Eigen::VectorXd y = x.col(1);
    const auto r = prcc(x, y);
    CHECK(r[1] == doctest::Approx(1.0));
    const Eigen::VectorXd e = x.col(1).array().exp();
    CHECK(prcc(x, e)[1] == doctest::Approx(1.0));
}

TEST_CASE("prcc recovers signs and matches the inverse correlation identity") {
    const Eigen::Index n = 400;
    const Eigen::MatrixXd x = random_matrix(n, 3, 21);
    const Eigen::MatrixXd noise = random_matrix(n, 1, 22);
    const Eigen::VectorXd y = (2 * x.col(0) - 0.5 * x.col(1)).array() + 0.1 * noise.col(0).array();
    const auto d = prcc_detail(x, y);
    CHECK(d.coefficients[0] > 0.9);
    CHECK(d.coefficients[1] < -0.5);
    CHECK(std::abs(d.coefficients[2]) < 0.2);
    const auto ref = prcc_by_inverse(x, y);
    for (Eigen::Index j = 0; j < 3; ++j) {
        CHECK(std::abs(d.coefficients[j] - ref[j]) < 1e-10);
        CHECK(d.coefficients[j] >= -1.0);
        CHECK(d.coefficients[j] <= 1.0);
    }
    // Residuals are orthogonal to the conditioning columns.
    for (Eigen::Index j = 0; j < 3; ++j) {
        for (Eigen::Index m = 0; m < 3; ++m) {
            if (m == j) continue;
            const double scale = d.input_residuals.col(j).norm() * d.ranks.col(m).norm();
            CHECK(std::abs(d.input_residuals.col(j).dot(d.ranks.col(m))) < 1e-10 * scale);
            const double scale_y = d.output_residuals.col(j).norm() * d.ranks.col(m).norm();
            CHECK(std::abs(d.output_residuals.col(j).dot(d.ranks.col(m))) < 1e-10 * scale_y);
        }
        CHECK(std::abs(d.input_residuals.col(j).sum()) < 1e-9 * d.input_residuals.col(j).norm());
    }
    // Invariant under strictly increasing transforms of inputs and output.
    Eigen::MatrixXd xm = x;
    xm.col(0) = x.col(0).array().exp();
    xm.col(2) = x.col(2).array().cube();
    const Eigen::VectorXd ym = y.array().sinh();
    const auto r2 = prcc(xm, ym);
    CHECK((r2 - d.coefficients).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("prcc errors") {
    const Eigen::MatrixXd x = random_matrix(5, 3, 1);
    CHECK(kind_of([&] { prcc(x, Eigen::VectorXd::LinSpaced(5, 0, 1)); }) ==
          NumericalError::Kind::InsufficientData);
    Eigen::MatrixXd c = random_matrix(20, 2, 2);
    c.col(1).setConstant(1.0);
    CHECK(kind_of([&] { prcc(c, Eigen::VectorXd::LinSpaced(20, 0, 1)); }) ==
          NumericalError::Kind::ZeroVariance);
}

TEST_CASE("batch analysis") {
    const Eigen::Index n = 300;
    const Eigen::MatrixXd x = random_matrix(n, 2, 31);
    std::vector<double> value(n);
    std::mt19937_64 rng(32);
    std::normal_distribution<double> z(0, 0.3);
    for (Eigen::Index i = 0; i < n; ++i) value[i] = 0.4 + 0.2 * x(i, 0) - 0.1 * x(i, 1) + z(rng);
    value[0] = NAN;
    const auto r = analyze_batch(make_design(x, {"a", "b"}), value, 0.4, 2100, 9);
    CHECK(r.logistic_status == "ok");
    CHECK(r.prcc_status == "ok");
    CHECK(r.n_total == 300);
    std::size_t good = 0;
    for (double v : value) good += v > 0.4;
    CHECK(r.n_good == good);
    REQUIRE(r.parameters.size() == 2);
    CHECK(r.parameters[0].parameter == "a");
    CHECK(r.parameters[0].logit_coef > 0);
    CHECK(r.parameters[1].logit_coef < 0);
    CHECK(r.parameters[0].prcc > 0);
    CHECK(r.seed == 9);

    const auto csv = report_csv(r);
    CHECK(csv.rfind("parameter,logit_coef,std_err,prcc,n_good,n_total\n", 0) == 0);
    CHECK(csv.find("\na,") != std::string::npos);
    const auto json = report_json(r);
    CHECK(json.find("\"status\": \"ok\"") != std::string::npos);
    CHECK(json.find("\"n_total\": 300") != std::string::npos);
}

TEST_CASE("batch with a single class still reports prcc") {
    const Eigen::MatrixXd x = random_matrix(50, 2, 41);
    std::vector<double> value(50);
    for (int i = 0; i < 50; ++i) value[i] = 0.6 + 0.1 * std::tanh(x(i, 0));
    const auto r = analyze_batch(make_design(x, {"a", "b"}), value);
    CHECK(r.logistic_status == "SingleClass");
    CHECK(std::isnan(r.parameters[0].logit_coef));
    CHECK(r.prcc_status == "ok");
    CHECK(r.parameters[0].prcc == doctest::Approx(1.0));
    CHECK(report_json(r).find("\"logit_coef\": null") != std::string::npos);
}

}
