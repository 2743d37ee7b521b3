#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stratcorr/ingest.hpp"
#include "stratcorr/types.hpp"

namespace stratcorr {

using TernaryMatrix = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

// N x T matrix of hourly net-trade signs, one row per retained institution,
// entries in {-1, 0, +1}. Immutable after construction.
struct StrategyMatrix {
    std::string instrument;
    Venue venue = Venue::on_book;
    Month month;
    std::vector<std::string> institutions;   // length N, first-appearance order
    std::vector<std::string> bucket_labels;  // length T
    TernaryMatrix values;                    // N x T

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

struct ExcludedInstitution {
    std::string code;
    int active_buckets = 0;
};

struct StrategyBuild {
    StrategyMatrix matrix;
    std::vector<ExcludedInstitution> excluded;  // activity-filter audit sidecar
};

// Total buy volume minus total sell volume of one institution in one bucket.
double net_volume(std::span<const TradeRecord> trades);

// +1 net buyer, -1 net seller, 0 inactive. An active bucket whose buys and
// sells cancel exactly is also 0.
int ternary_sign(double net, bool was_active);

// Builds the ternary matrix and applies the activity filter: a row is kept
// iff its number of active buckets strictly exceeds activity_fraction * T.
// Throws EmptySampleError when no institution survives.
StrategyBuild build_strategy_matrix(const MonthSample& sample, double activity_fraction = 1.0 / 3.0);

// Canonical text format: "instrument,venue,month,N,T", an optional
// "#buckets,..." line carrying the bucket labels, then one row per
// institution: code followed by T values.
void write_strategy_matrix(std::ostream& out, const StrategyMatrix& m);
StrategyMatrix read_strategy_matrix(std::istream& in);

}  // namespace stratcorr
