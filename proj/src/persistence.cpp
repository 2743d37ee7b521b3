#include "stratcorr/persistence.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>

#include "stratcorr/rng.hpp"

namespace stratcorr {

LinkMap link_codes(Month from, Month to, const std::vector<RestingOrderObs>& observations) {
    LinkMap map;
    map.from = from;
    map.to = to;

    // Vote per old code.
    std::map<std::string, std::map<std::string, int>> votes;
    for (const auto& obs : observations) votes[obs.code_before][obs.code_after] += 1;

    struct Candidate {
        std::string to;
        int evidence;
    };
    std::map<std::string, Candidate> chosen;
    for (const auto& [old_code, tally] : votes) {
        int best = 0, second = 0;
        std::string best_to;
        for (const auto& [new_code, count] : tally) {
            if (count > best) {
                second = best;
                best = count;
                best_to = new_code;
            } else if (count > second) {
                second = count;
            }
        }
        if (best == second) continue;  // majority tie: drop both candidates
        chosen[old_code] = {best_to, best};
    }

    // Injectivity: when two old codes claim one new code, keep the higher
    // evidence; an evidence tie drops all claimants.
    std::map<std::string, std::vector<std::string>> claimants;
    for (const auto& [old_code, cand] : chosen) claimants[cand.to].push_back(old_code);
    for (const auto& [new_code, olds] : claimants) {
        if (olds.size() == 1) {
            map.links[olds.front()] = new_code;
            map.evidence[olds.front()] = chosen[olds.front()].evidence;
            continue;
        }
        int best = 0;
        bool tie = false;
        std::string winner;
        for (const auto& old_code : olds) {
            const int ev = chosen[old_code].evidence;
            if (ev > best) {
                best = ev;
                winner = old_code;
                tie = false;
            } else if (ev == best) {
                tie = true;
            }
        }
        if (tie) continue;
        map.links[winner] = new_code;
        map.evidence[winner] = best;
    }

    for (const auto& obs : observations) {
        const auto it = map.links.find(obs.code_before);
        if (it == map.links.end() || it->second != obs.code_after) map.conflicts.push_back(obs);
    }
    return map;
}

std::string Track::code_in(const Month& m) const {
    Month cur = first;
    for (const auto& code : codes) {
        if (cur == m) return code;
        cur = cur.next();
    }
    return {};
}

std::vector<Track> chain_links(const std::vector<LinkMap>& maps) {
    for (std::size_t i = 1; i < maps.size(); ++i)
        if (!(maps[i - 1].to == maps[i].from))
            throw ContractViolation("chain_links: boundaries are not consecutive");

    std::vector<Track> tracks;
    std::map<std::string, std::size_t> open;  // code in current "to" month -> track
    for (const auto& map : maps) {
        std::map<std::string, std::size_t> next_open;
        for (const auto& [old_code, new_code] : map.links) {
            const auto it = open.find(old_code);
            if (it != open.end()) {
                tracks[it->second].codes.push_back(new_code);
                next_open[new_code] = it->second;
            } else {
                tracks.push_back({map.from, {old_code, new_code}});
                next_open[new_code] = tracks.size() - 1;
            }
        }
        open = std::move(next_open);
    }
    return tracks;
}

std::vector<PersistencePair> persistence_pairs(const std::vector<MonthCorr>& corrs,
                                               const std::vector<LinkMap>& maps) {
    std::map<Month, const CorrelationResult*> by_month;
    for (const auto& mc : corrs) by_month[mc.month] = mc.corr;

    std::vector<PersistencePair> pairs;
    for (const auto& map : maps) {
        const auto a = by_month.find(map.from);
        const auto b = by_month.find(map.to);
        if (a == by_month.end() || b == by_month.end()) continue;
        const CorrelationResult& c1 = *a->second;
        const CorrelationResult& c2 = *b->second;

        auto index_of = [](const CorrelationResult& c, const std::string& code) {
            const auto it = std::find(c.codes.begin(), c.codes.end(), code);
            return it == c.codes.end() ? -1 : static_cast<int>(it - c.codes.begin());
        };

        // Institutions linkable across this boundary and present in both
        // correlation matrices.
        std::vector<std::pair<int, int>> present;  // (index in c1, index in c2)
        for (const auto& [old_code, new_code] : map.links) {
            const int i1 = index_of(c1, old_code);
            const int i2 = index_of(c2, new_code);
            if (i1 >= 0 && i2 >= 0) present.push_back({i1, i2});
        }
        for (std::size_t i = 0; i < present.size(); ++i)
            for (std::size_t j = i + 1; j < present.size(); ++j)
                pairs.push_back({c1.rho(present[i].first, present[j].first),
                                 c2.rho(present[i].second, present[j].second)});
    }
    return pairs;
}

RegressionResult ols(const std::vector<PersistencePair>& pairs) {
    const long n = static_cast<long>(pairs.size());
    if (n < 3) throw InsufficientSampleError("ols needs at least 3 pairs");

    double mx = 0.0, my = 0.0;
    for (const auto& p : pairs) {
        mx += p.c1;
        my += p.c2;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : pairs) {
        const double dx = p.c1 - mx, dy = p.c2 - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw DegenerateInputError("ols: regressor has zero variance");

    RegressionResult r;
    r.n_pairs = n;
    r.beta = sxy / sxx;
    r.alpha = my - r.beta * mx;

    double ssr = 0.0;
    for (const auto& p : pairs) {
        const double e = p.c2 - (r.alpha + r.beta * p.c1);
        ssr += e * e;
    }
    r.r2 = syy == 0.0 ? 1.0 : 1.0 - ssr / syy;

    const double dof = static_cast<double>(n - 2);
    const double s2 = ssr / dof;
    r.se_beta = std::sqrt(s2 / sxx);
    r.se_alpha = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
    const boost::math::students_t dist(dof);
    auto pvalue = [&](double estimate, double se) {
        if (se == 0.0) return estimate == 0.0 ? 1.0 : 0.0;
        return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(estimate / se)));
    };
    r.p_alpha = pvalue(r.alpha, r.se_alpha);
    r.p_beta = pvalue(r.beta, r.se_beta);
    return r;
}

std::vector<MinorityRow> minority_counts(const std::vector<MonthClustering>& months,
                                         const std::vector<Track>& tracks, int min_track_months,
                                         bool skip_singleton_minority) {
    std::map<Month, const MonthClustering*> by_month;
    for (const auto& mc : months) by_month[mc.month] = &mc;

    std::vector<MinorityRow> rows;
    for (const auto& track : tracks) {
        if (track.months_covered() <= min_track_months) continue;
        MinorityRow row;
        row.code = track.codes.front();
        row.first_month = track.first;

        Month m = track.first;
        for (const auto& code : track.codes) {
            const auto it = by_month.find(m);
            m = m.next();
            if (it == by_month.end()) continue;
            const MonthClustering& mc = *it->second;
            if (mc.cut2.minority < 0) continue;  // no two-cluster view this month
            const auto pos = std::find(mc.codes.begin(), mc.codes.end(), code);
            if (pos == mc.codes.end()) continue;  // filtered out this month
            const std::size_t minority_size =
                mc.cut2.clusters[static_cast<std::size_t>(mc.cut2.minority)].size();
            if (skip_singleton_minority && minority_size == 1) continue;
            const std::size_t active = mc.codes.size();
            row.months_possible += 1;
            row.chance_p.push_back(static_cast<double>(minority_size) / static_cast<double>(active));
            const int leaf = static_cast<int>(pos - mc.codes.begin());
            if (mc.cut2.label_of_leaf[static_cast<std::size_t>(leaf)] == mc.cut2.minority)
                row.times_in_minority += 1;
        }
        if (row.months_possible > 0) rows.push_back(std::move(row));
    }
    return rows;
}

double minority_probability(int x, const std::vector<double>& chance_p, long trials,
                            std::uint64_t seed) {
    if (trials < 10000) throw std::invalid_argument("minority_probability needs >= 10^4 trials");
    std::mt19937_64 rng(seed);
    // 53-bit uniform in [0,1); enough resolution for any p_k here.
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    long at_least = 0;
    for (long t = 0; t < trials; ++t) {
        int successes = 0;
        for (double p : chance_p)
            if (uniform() < p) ++successes;
        if (successes >= x) ++at_least;
    }
    return 1.0 - static_cast<double>(at_least) / static_cast<double>(trials);
}

std::vector<double> exact_poisson_binomial(const std::vector<double>& chance_p) {
    if (chance_p.size() > 64)
        throw std::invalid_argument("exact_poisson_binomial capped at K = 64; use Monte Carlo");
    std::vector<double> pmf{1.0};
    for (double p : chance_p) {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("probability outside [0,1]");
        std::vector<double> next(pmf.size() + 1, 0.0);
        for (std::size_t k = 0; k < pmf.size(); ++k) {
            next[k] += pmf[k] * (1.0 - p);
            next[k + 1] += pmf[k] * p;
        }
        pmf = std::move(next);
    }
    return pmf;
}

double upper_tail(const std::vector<double>& pmf, int x) {
    if (x <= 0) return 1.0;
    double tail = 0.0;
    for (std::size_t k = static_cast<std::size_t>(x); k < pmf.size(); ++k) tail += pmf[k];
    return std::min(tail, 1.0);
}

}  // namespace stratcorr
