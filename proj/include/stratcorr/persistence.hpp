#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stratcorr/cluster.hpp"
#include "stratcorr/spectra.hpp"
#include "stratcorr/types.hpp"

namespace stratcorr {

// One resting order observed on both sides of a monthly code rescrambling:
// the codes it carried before and after imply an identity link.
struct RestingOrderObs {
    std::string order_id;
    std::string code_before;
    std::string code_after;
};

// Injective old-code -> new-code mapping across one month boundary.
// Candidate links are decided by evidence-count majority per old code;
// observations that disagree with the final mapping land in `conflicts`.
// Ties (within an old code or between old codes competing for one new code)
// drop the candidates involved.
struct LinkMap {
    Month from;
    Month to;
    std::map<std::string, std::string> links;
    std::map<std::string, int> evidence;  // keyed by old code
    std::vector<RestingOrderObs> conflicts;
};

LinkMap link_codes(Month from, Month to, const std::vector<RestingOrderObs>& observations);

// Maximal chain of codes over consecutive months. codes[i] is the code in
// month first + i; a track covers codes.size() months.
struct Track {
    Month first;
    std::vector<std::string> codes;

    int months_covered() const { return static_cast<int>(codes.size()); }
    std::string code_in(const Month& m) const;  // empty if m outside the track
};

// Composes boundary maps (ordered, maps[i].to == maps[i+1].from) into
// maximal identity tracks. Every link belongs to exactly one track.
std::vector<Track> chain_links(const std::vector<LinkMap>& maps);

struct MonthCorr {
    Month month;
    const CorrelationResult* corr = nullptr;
};

struct PersistencePair {
    double c1 = 0.0;
    double c2 = 0.0;
};

// For every pair of institutions linkable across a boundary and present in
// both months' correlation matrices, the pair of correlation coefficients.
std::vector<PersistencePair> persistence_pairs(const std::vector<MonthCorr>& corrs,
                                               const std::vector<LinkMap>& maps);

struct RegressionResult {
    double alpha = 0.0;  // intercept
    double beta = 0.0;   // slope
    double se_alpha = 0.0;
    double se_beta = 0.0;
    double p_alpha = 1.0;
    double p_beta = 1.0;
    double r2 = 0.0;
    long n_pairs = 0;
};

// Closed-form least squares of c2 on c1 with Student-t p-values (n-2 dof).
// Requires n >= 3 and a non-degenerate regressor.
RegressionResult ols(const std::vector<PersistencePair>& pairs);

// One month's two-cluster view for the minority test.
struct MonthClustering {
    Month month;
    std::vector<std::string> codes;  // leaves of the cut, cut.label_of_leaf order
    ClusterCut cut2;                 // k = 2 cut
};

struct MinorityRow {
    std::string code;  // the track's code in its first month
    Month first_month;
    int times_in_minority = 0;      // x
    int months_possible = 0;        // K: months of the track present in a cut
    std::vector<double> chance_p;   // p_k = minority_size/active over those months
    double prob_nonrandom = 0.0;    // 1 - P(X >= x), filled by the caller
};

// Counts minority memberships for every track covering more than
// min_track_months months. skip_singleton_minority drops months whose
// minority cluster has a single member.
std::vector<MinorityRow> minority_counts(const std::vector<MonthClustering>& months,
                                         const std::vector<Track>& tracks,
                                         int min_track_months = 12,
                                         bool skip_singleton_minority = false);

// Monte Carlo estimate of 1 - P(X >= x) where X is the number of successes
// of independent Bernoulli(p_k) draws. trials >= 10000.
double minority_probability(int x, const std::vector<double>& chance_p, long trials,
                            std::uint64_t seed);

// Exact Poisson-binomial pmf (size K+1) by convolution of the Bernoulli
// pmfs. K is capped at 64; beyond that use the Monte Carlo path.
std::vector<double> exact_poisson_binomial(const std::vector<double>& chance_p);

// P(X >= x) from a pmf.
double upper_tail(const std::vector<double>& pmf, int x);

}  // namespace stratcorr
