#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stratcorr/strategy.hpp"

namespace stratcorr {

struct BootstrapOptions {
    int replicates = 1000;  // B, >= 100
    int ranks = 2;          // k, >= 1
    std::uint64_t seed = 0;
    int block_length = 1;  // 1 = plain shuffle; > 1 permutes contiguous blocks
    int threads = 0;       // 0 = hardware concurrency
};

// Permutes each row independently and uniformly at random; per-row counts of
// {-1, 0, +1} are preserved exactly. block_length > 1 permutes contiguous
// blocks instead, keeping short-range serial structure within blocks.
StrategyMatrix shuffle_rows(const StrategyMatrix& m, std::uint64_t seed, int block_length = 1);

// Null distribution of the largest k eigenvalues from B row-shuffled
// replicates of one month. A rank is significant when its empirical
// eigenvalue exceeds the replicate median by more than two standard
// deviations. Fully determined by (matrix, B, k, seed, block_length).
struct BootstrapBand {
    std::string instrument;
    Venue venue = Venue::on_book;
    Month month;
    int replicates = 0;
    int ranks = 0;
    int block_length = 1;
    std::uint64_t seed = 0;
    std::vector<double> draws;  // replicates x ranks, row-major, each row descending
    std::vector<double> median;
    std::vector<double> stddev;
    std::vector<double> empirical;
    std::vector<bool> significant;

    double draw(int replicate, int rank) const { return draws[static_cast<std::size_t>(replicate) * ranks + rank]; }
};

BootstrapBand bootstrap_band(const StrategyMatrix& m, const BootstrapOptions& opts);

}  // namespace stratcorr
