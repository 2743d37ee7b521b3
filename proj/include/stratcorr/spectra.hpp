#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "stratcorr/strategy.hpp"
#include "stratcorr/types.hpp"

namespace stratcorr {

// Pairwise correlation of strategy rows plus per-pair two-sided tail
// probabilities. Rows with zero variance are excluded before computing.
struct CorrelationResult {
    std::vector<std::string> codes;  // N' survivors
    Eigen::MatrixXd rho;             // N' x N', symmetric, unit diagonal
    Eigen::MatrixXd tail_prob;       // N' x N', diagonal 0
    std::vector<std::string> excluded_constant_rows;
    int sample_length = 0;  // T
};

// Rows of X must all have positive variance (callers filter first).
Eigen::MatrixXd correlation_of_rows(const Eigen::MatrixXd& X);

// Indices of rows with nonzero variance.
std::vector<int> positive_variance_rows(const Eigen::MatrixXd& X);

// Throws DegenerateInputError when fewer than 2 rows have positive variance.
CorrelationResult correlate(const StrategyMatrix& m);

// Two-sided tail probability of a correlation coefficient from n samples via
// the t-statistic approximation t = rho * sqrt((n-2)/(1-rho^2)) against
// Student-t with n-2 dof. |rho| = 1 maps to 0. Throws
// InsufficientSampleError for n < 4.
double tail_probability(double rho, int n);

// Fraction of off-diagonal upper-triangle pairs with tail_prob < alpha.
double significant_share(const CorrelationResult& r, double alpha);

// Eigenvalues of a symmetric matrix, descending. Input must be symmetric
// within 1e-12 or ContractViolation is thrown.
std::vector<double> eigenvalues_sym(const Eigen::MatrixXd& a);

struct EigenPairs {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // columns aligned with values
};
EigenPairs eigen_sym_pairs(const Eigen::MatrixXd& a);

// Support edges sigma^2 * (1 + 1/Q +- 2*sqrt(1/Q)). Throws OutOfRegimeError
// for Q < 1.
std::pair<double, double> mp_bounds(double q, double sigma);

// Marchenko-Pastur density Q/(2 pi sigma^2) * sqrt((l_max-l)(l-l_min))/l,
// zero outside the support.
double mp_density(double lambda, double q, double sigma);
std::vector<double> mp_density(const std::vector<double>& grid, double q, double sigma);

struct MPNull {
    double q = 1.0;
    double sigma = 1.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double density(double lambda) const { return mp_density(lambda, q, sigma); }
};
MPNull make_mp_null(double q, double sigma);

// Per-month spectrum summary. sigma_mechanical is the mean of the per-row
// sample standard deviations of the raw ternary series, the "standard
// formula applied to ternary data" null option; the correlation spectrum
// itself corresponds to sigma = 1 since rows are standardized.
struct EigenReport {
    std::string instrument;
    Venue venue = Venue::on_book;
    Month month;
    int n = 0;  // N'
    int t = 0;
    double q = 0.0;
    double sigma_mechanical = 1.0;
    std::vector<double> eigenvalues;  // descending, length N'
};

EigenReport eigen_report(const StrategyMatrix& m, const CorrelationResult& corr);

// All months pooled on one histogram grid, with the limiting density built
// from the arithmetic means of monthly Q and sigma. Both sigma conventions
// are carried side by side.
struct PooledSpectrum {
    std::vector<double> bin_centers;
    std::vector<double> empirical_density;  // normalized by all pooled eigenvalues
    std::vector<double> mp_density_unit;
    std::vector<double> mp_density_mechanical;
    MPNull null_unit;
    MPNull null_mechanical;
    int above_lambda_max_unit = 0;
    int above_lambda_max_mechanical = 0;
    int total_eigenvalues = 0;
    double mean_q = 0.0;
    double mean_sigma_mechanical = 0.0;
};

PooledSpectrum pooled_spectrum(const std::vector<EigenReport>& reports, double grid_lo = 0.0,
                               double grid_hi = 5.0, int bins = 100);

}  // namespace stratcorr
