#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "stratcorr/persistence.hpp"
#include "stratcorr/strategy.hpp"
#include "stratcorr/types.hpp"

namespace stratcorr {

// Planted-structure order-flow generator: one common hourly factor, a crowd
// trading with it and a smaller dealer group trading against it. Codes are
// rescrambled each month; resting orders straddling boundaries carry shared
// order ids so the unscrambler has ground truth to recover.
struct SynthConfig {
    int n_crowd = 70;
    int n_dealer = 12;  // must stay below n_crowd (planted minority)
    int months = 32;
    int days_per_month = 20;
    double factor_strength = 0.6;         // P(sign = factor) = 1/2 + strength/2
    double second_factor_strength = 0.0;  // splits the crowd on a second factor
    double activity = 0.7;                // per-bucket trading probability
    double volume_scale = 10000.0;
    double resting_order_rate = 2.0;  // expected straddling orders per institution per boundary
    std::uint64_t seed = 1;

    int n_institutions() const { return n_crowd + n_dealer; }
    void validate() const;
};

struct GroundTruth {
    SynthConfig config;
    std::vector<int> group;  // per true id: 0 = crowd, 1 = dealer
    std::vector<Month> months;
    std::vector<Date> days;                          // all trading days, sorted
    std::vector<std::vector<std::string>> code_of;   // [month][true id] -> code
    std::vector<std::vector<std::int8_t>> factor;    // [month][bucket]
    std::vector<TernaryMatrix> signs;                // [month] n x T planted signs
    std::vector<std::map<int, int>> planted_orders;  // [boundary] true id -> count

    int true_id(int month_index, const std::string& code) const;  // -1 when unknown
};

struct SynthOutput {
    std::vector<TradeRecord> trades;  // sorted; the exact ingest CSV schema
    GroundTruth truth;
};

// Deterministic per seed; the same config yields a byte-identical stream.
SynthOutput generate(const SynthConfig& config);

void write_ground_truth(std::ostream& out, const GroundTruth& truth);
GroundTruth read_ground_truth(std::istream& in);

struct Scorecard {
    std::vector<Month> months;
    std::vector<double> rand_index;  // two-cluster cut vs planted labels, per month
    int links_recovered = 0;
    int links_correct = 0;
    double link_precision = 1.0;
    // Recall against boundary links supported by at least one planted
    // resting order, and against all present-both-months institutions.
    double link_recall_supported = 1.0;
    double link_recall_overall = 1.0;
    int false_joins = 0;  // tracks mixing more than one true identity
    int dealers_tested = 0;
    int dealers_flagged = 0;  // prob_nonrandom > flag threshold
    double minority_dealer_hit_rate = 0.0;
    double flag_threshold = 0.95;
};

// Pairs pipeline outputs with the generator's ground truth. All inputs must
// come from the same (seed, config) run.
Scorecard ground_truth_compare(const std::vector<MonthClustering>& clusterings,
                               const std::vector<LinkMap>& links, const std::vector<Track>& tracks,
                               const std::vector<MinorityRow>& minority, const GroundTruth& truth,
                               double flag_threshold = 0.95);

// Unadjusted Rand index between two labelings of the same items.
double rand_index(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace stratcorr
