#include "stratcorr/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "stratcorr/rng.hpp"
#include "stratcorr/spectra.hpp"

namespace stratcorr {

namespace {

std::string month_scope(const StrategyMatrix& m) {
    return m.instrument + "|" + to_string(m.venue) + "|" + to_string(m.month);
}

void shuffle_one_row(TernaryMatrix& values, Eigen::Index row, std::mt19937_64& rng,
                     int block_length) {
    const Eigen::Index t = values.cols();
    if (block_length <= 1) {
        for (Eigen::Index i = t; i > 1; --i) {
            const Eigen::Index j = static_cast<Eigen::Index>(bounded_uint(rng, static_cast<std::uint64_t>(i)));
            std::swap(values(row, i - 1), values(row, j));
        }
        return;
    }
    // Permute contiguous blocks; a short tail block participates like any
    // other, so per-row symbol counts are still preserved exactly.
    const Eigen::Index n_blocks = (t + block_length - 1) / block_length;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n_blocks));
    for (Eigen::Index b = 0; b < n_blocks; ++b) order[static_cast<std::size_t>(b)] = b;
    fisher_yates(order, rng);
    std::vector<std::int8_t> tmp(static_cast<std::size_t>(t));
    std::size_t pos = 0;
    for (Eigen::Index b : order) {
        const Eigen::Index lo = b * block_length;
        const Eigen::Index hi = std::min(lo + block_length, t);
        for (Eigen::Index i = lo; i < hi; ++i) tmp[pos++] = values(row, i);
    }
    for (Eigen::Index i = 0; i < t; ++i) values(row, i) = tmp[static_cast<std::size_t>(i)];
}

std::vector<double> top_k_eigenvalues(const StrategyMatrix& m, int k) {
    const CorrelationResult corr = correlate(m);
    const std::vector<double> ev = eigenvalues_sym(corr.rho);
    const double n = static_cast<double>(corr.rho.rows());
    double trace = 0.0;
    for (double v : ev) trace += v;
    if (std::abs(trace - n) > 1e-8 * n)
        throw std::logic_error("bootstrap replicate violates the trace identity");
    if (static_cast<int>(ev.size()) < k)
        throw std::invalid_argument("requested more ranks than eigenvalues");
    return {ev.begin(), ev.begin() + k};
}

}  // namespace

StrategyMatrix shuffle_rows(const StrategyMatrix& m, std::uint64_t seed, int block_length) {
    StrategyMatrix out = m;
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        std::mt19937_64 rng(derive_seed(seed, "row", static_cast<std::uint64_t>(r)));
        shuffle_one_row(out.values, r, rng, block_length);
    }
    return out;
}

BootstrapBand bootstrap_band(const StrategyMatrix& m, const BootstrapOptions& opts) {
    if (opts.replicates < 100) throw std::invalid_argument("bootstrap needs B >= 100");
    if (opts.ranks < 1) throw std::invalid_argument("bootstrap needs k >= 1");
    if (opts.block_length < 1) throw std::invalid_argument("block length must be >= 1");

    BootstrapBand band;
    band.instrument = m.instrument;
    band.venue = m.venue;
    band.month = m.month;
    band.replicates = opts.replicates;
    band.ranks = opts.ranks;
    band.block_length = opts.block_length;
    band.seed = opts.seed;
    band.empirical = top_k_eigenvalues(m, opts.ranks);
    band.draws.assign(static_cast<std::size_t>(opts.replicates) * opts.ranks, 0.0);

    const std::string scope = month_scope(m);
    auto run_replicate = [&](int r) {
        const std::uint64_t rep_seed = derive_seed(opts.seed, scope, static_cast<std::uint64_t>(r));
        const StrategyMatrix shuffled = shuffle_rows(m, rep_seed, opts.block_length);
        const std::vector<double> top = top_k_eigenvalues(shuffled, opts.ranks);
        std::copy(top.begin(), top.end(),
                  band.draws.begin() + static_cast<std::size_t>(r) * opts.ranks);
    };

    // Replicates are independent; slots are preassigned by replicate index,
    // so parallel and serial runs produce identical bands.
    unsigned n_threads = opts.threads > 0 ? static_cast<unsigned>(opts.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(opts.replicates));
    if (n_threads <= 1) {
        for (int r = 0; r < opts.replicates; ++r) run_replicate(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        std::atomic<bool> failed{false};
        workers.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w)
            workers.emplace_back([&] {
                int r;
                while ((r = next.fetch_add(1)) < opts.replicates && !failed.load()) {
                    try {
                        run_replicate(r);
                    } catch (...) {
                        failed.store(true);
                    }
                }
            });
        for (auto& w : workers) w.join();
        if (failed.load()) throw std::runtime_error("bootstrap replicate failed");
    }

    band.median.resize(static_cast<std::size_t>(opts.ranks));
    band.stddev.resize(static_cast<std::size_t>(opts.ranks));
    band.significant.resize(static_cast<std::size_t>(opts.ranks));
    std::vector<double> column(static_cast<std::size_t>(opts.replicates));
    for (int k = 0; k < opts.ranks; ++k) {
        for (int r = 0; r < opts.replicates; ++r)
            column[static_cast<std::size_t>(r)] = band.draw(r, k);
        std::sort(column.begin(), column.end());
        const std::size_t b = column.size();
        band.median[static_cast<std::size_t>(k)] =
            b % 2 ? column[b / 2] : 0.5 * (column[b / 2 - 1] + column[b / 2]);
        double mean = 0.0;
        for (double v : column) mean += v;
        mean /= static_cast<double>(b);
        double ss = 0.0;
        for (double v : column) ss += (v - mean) * (v - mean);
        band.stddev[static_cast<std::size_t>(k)] = std::sqrt(ss / static_cast<double>(b - 1));
        band.significant[static_cast<std::size_t>(k)] =
            band.empirical[static_cast<std::size_t>(k)] >
            band.median[static_cast<std::size_t>(k)] + 2.0 * band.stddev[static_cast<std::size_t>(k)];
    }
    return band;
}

}  // namespace stratcorr
