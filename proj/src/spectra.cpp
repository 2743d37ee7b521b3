#include "stratcorr/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numbers>
#include <numeric>

namespace stratcorr {

std::vector<int> positive_variance_rows(const Eigen::MatrixXd& x) {
    std::vector<int> keep;
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        const auto row = x.row(r);
        const double mean = row.mean();
        if ((row.array() - mean).abs().maxCoeff() > 0.0) keep.push_back(static_cast<int>(r));
    }
    return keep;
}

Eigen::MatrixXd correlation_of_rows(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    if (n < 2) throw DegenerateInputError("correlation needs at least 2 rows");
    Eigen::MatrixXd z = x;
    for (Eigen::Index r = 0; r < n; ++r) {
        z.row(r).array() -= z.row(r).mean();
        const double norm = z.row(r).norm();
        if (norm == 0.0) throw DegenerateInputError("constant row in correlation input");
        z.row(r) /= norm;
    }
    Eigen::MatrixXd rho = z * z.transpose();
    rho = ((rho + rho.transpose()) / 2.0).eval();
    rho = rho.array().min(1.0).max(-1.0).matrix();
    rho.diagonal().setOnes();
    return rho;
}

CorrelationResult correlate(const StrategyMatrix& m) {
    if (m.rows() < 2) throw DegenerateInputError("correlate: fewer than 2 institutions");
    const Eigen::MatrixXd x = m.values.cast<double>();
    const std::vector<int> keep = positive_variance_rows(x);
    if (keep.size() < 2) throw DegenerateInputError("correlate: fewer than 2 rows with variance");

    CorrelationResult out;
    out.sample_length = static_cast<int>(m.cols());
    {
        std::vector<bool> kept(static_cast<std::size_t>(m.rows()), false);
        for (int r : keep) kept[static_cast<std::size_t>(r)] = true;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const auto& code = m.institutions[static_cast<std::size_t>(r)];
            if (kept[static_cast<std::size_t>(r)]) out.codes.push_back(code);
            else out.excluded_constant_rows.push_back(code);
        }
    }

    Eigen::MatrixXd sub(static_cast<Eigen::Index>(keep.size()), x.cols());
    for (std::size_t i = 0; i < keep.size(); ++i) sub.row(static_cast<Eigen::Index>(i)) = x.row(keep[i]);
    out.rho = correlation_of_rows(sub);

    const Eigen::Index n = out.rho.rows();
    out.tail_prob = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double p = tail_probability(out.rho(i, j), out.sample_length);
            out.tail_prob(i, j) = p;
            out.tail_prob(j, i) = p;
        }
    return out;
}

double tail_probability(double rho, int n) {
    if (n < 4) throw InsufficientSampleError("tail_probability needs n >= 4");
    if (std::abs(rho) > 1.0 + 1e-12) throw ContractViolation("|rho| > 1");
    rho = std::clamp(rho, -1.0, 1.0);
    if (std::abs(rho) >= 1.0) return 0.0;
    const double dof = n - 2;
    const double t = rho * std::sqrt(dof / (1.0 - rho * rho));
    const boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double significant_share(const CorrelationResult& r, double alpha) {
    const Eigen::Index n = r.rho.rows();
    long pairs = 0, hits = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            ++pairs;
            if (r.tail_prob(i, j) < alpha) ++hits;
        }
    return pairs == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(pairs);
}

namespace {

void require_symmetric(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw ContractViolation("matrix is not square");
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw ContractViolation("matrix is not symmetric within 1e-12");
}

}  // namespace

std::vector<double> eigenvalues_sym(const Eigen::MatrixXd& a) {
    require_symmetric(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + a.rows());
    std::reverse(ev.begin(), ev.end());  // solver returns ascending
    return ev;
}

EigenPairs eigen_sym_pairs(const Eigen::MatrixXd& a) {
    require_symmetric(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    EigenPairs out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

std::pair<double, double> mp_bounds(double q, double sigma) {
    if (q < 1.0) throw OutOfRegimeError("mp_bounds requires Q >= 1");
    if (sigma <= 0.0) throw OutOfRegimeError("mp_bounds requires sigma > 0");
    const double s2 = sigma * sigma;
    const double root = 2.0 * std::sqrt(1.0 / q);
    return {s2 * (1.0 + 1.0 / q - root), s2 * (1.0 + 1.0 / q + root)};
}

double mp_density(double lambda, double q, double sigma) {
    const auto [lo, hi] = mp_bounds(q, sigma);
    if (lambda <= lo || lambda >= hi || lambda <= 0.0) return 0.0;
    const double s2 = sigma * sigma;
    return q / (2.0 * std::numbers::pi * s2) * std::sqrt((hi - lambda) * (lambda - lo)) / lambda;
}

std::vector<double> mp_density(const std::vector<double>& grid, double q, double sigma) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = mp_density(grid[i], q, sigma);
    return out;
}

MPNull make_mp_null(double q, double sigma) {
    const auto [lo, hi] = mp_bounds(q, sigma);
    return MPNull{q, sigma, lo, hi};
}

EigenReport eigen_report(const StrategyMatrix& m, const CorrelationResult& corr) {
    EigenReport rep;
    rep.instrument = m.instrument;
    rep.venue = m.venue;
    rep.month = m.month;
    rep.n = static_cast<int>(corr.rho.rows());
    rep.t = corr.sample_length;
    rep.q = static_cast<double>(rep.t) / rep.n;
    rep.eigenvalues = eigenvalues_sym(corr.rho);

    // Mean of the per-row sample standard deviations of the surviving raw
    // ternary series ("sigma computed mechanically by the standard formula").
    double sum_sd = 0.0;
    int counted = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const auto& code = m.institutions[static_cast<std::size_t>(r)];
        if (std::find(corr.codes.begin(), corr.codes.end(), code) == corr.codes.end()) continue;
        const Eigen::VectorXd row = m.values.row(r).cast<double>();
        const double mean = row.mean();
        const double var = (row.array() - mean).square().sum() / (row.size() - 1);
        sum_sd += std::sqrt(var);
        ++counted;
    }
    rep.sigma_mechanical = counted ? sum_sd / counted : 1.0;

    const double trace_gap = std::abs(
        std::accumulate(rep.eigenvalues.begin(), rep.eigenvalues.end(), 0.0) - rep.n);
    if (trace_gap > 1e-8 * rep.n)
        throw std::runtime_error("eigenvalue sum violates the trace identity");
    return rep;
}

PooledSpectrum pooled_spectrum(const std::vector<EigenReport>& reports, double grid_lo,
                               double grid_hi, int bins) {
    if (reports.empty()) throw DegenerateInputError("pooled_spectrum needs at least one report");
    if (!(grid_hi > grid_lo) || bins < 1) throw ContractViolation("bad pooled grid");

    PooledSpectrum out;
    double sum_q = 0.0, sum_sigma = 0.0;
    std::vector<double> pooled;
    for (const auto& rep : reports) {
        sum_q += rep.q;
        sum_sigma += rep.sigma_mechanical;
        pooled.insert(pooled.end(), rep.eigenvalues.begin(), rep.eigenvalues.end());
    }
    out.mean_q = sum_q / reports.size();
    out.mean_sigma_mechanical = sum_sigma / reports.size();
    out.total_eigenvalues = static_cast<int>(pooled.size());
    out.null_unit = make_mp_null(out.mean_q, 1.0);
    out.null_mechanical = make_mp_null(out.mean_q, out.mean_sigma_mechanical);

    const double width = (grid_hi - grid_lo) / bins;
    out.bin_centers.resize(static_cast<std::size_t>(bins));
    out.empirical_density.assign(static_cast<std::size_t>(bins), 0.0);
    for (int b = 0; b < bins; ++b) out.bin_centers[static_cast<std::size_t>(b)] = grid_lo + (b + 0.5) * width;
    for (double ev : pooled) {
        if (ev >= out.null_unit.lambda_max) ++out.above_lambda_max_unit;
        if (ev >= out.null_mechanical.lambda_max) ++out.above_lambda_max_mechanical;
        if (ev < grid_lo || ev >= grid_hi) continue;
        out.empirical_density[static_cast<std::size_t>((ev - grid_lo) / width)] += 1.0;
    }
    const double mass = out.total_eigenvalues * width;
    for (auto& d : out.empirical_density) d /= mass;
    out.mp_density_unit = mp_density(out.bin_centers, out.mean_q, 1.0);
    out.mp_density_mechanical = mp_density(out.bin_centers, out.mean_q, out.mean_sigma_mechanical);
    return out;
}

}  // namespace stratcorr
