#include "stratcorr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <random>
#include <stdexcept>

#include "stratcorr/rng.hpp"

namespace stratcorr {

void SynthConfig::validate() const {
    if (n_crowd < 2 || n_dealer < 1) throw std::invalid_argument("need n_crowd >= 2, n_dealer >= 1");
    if (n_dealer >= n_crowd) throw std::invalid_argument("planted minority requires n_dealer < n_crowd");
    if (months < 1) throw std::invalid_argument("months must be >= 1");
    if (days_per_month < 1 || days_per_month > 23)
        throw std::invalid_argument("days_per_month outside [1, 23]");
    if (factor_strength < 0.0 || factor_strength > 1.0)
        throw std::invalid_argument("factor_strength outside [0,1]");
    if (second_factor_strength < 0.0 || factor_strength + second_factor_strength > 1.0)
        throw std::invalid_argument("factor strengths must sum within [0,1]");
    if (activity <= 0.0 || activity > 1.0) throw std::invalid_argument("activity outside (0,1]");
    if (volume_scale <= 0.0) throw std::invalid_argument("volume_scale must be positive");
    if (resting_order_rate < 0.0) throw std::invalid_argument("resting_order_rate must be >= 0");
}

int GroundTruth::true_id(int month_index, const std::string& code) const {
    if (month_index < 0 || month_index >= static_cast<int>(code_of.size())) return -1;
    const auto& codes = code_of[static_cast<std::size_t>(month_index)];
    const auto it = std::find(codes.begin(), codes.end(), code);
    return it == codes.end() ? -1 : static_cast<int>(it - codes.begin());
}

namespace {

constexpr int kHoursPerDay = 7;
constexpr int kFirstHour = 9;

std::vector<Date> trading_days_of(Month m, int count) {
    std::vector<Date> days;
    for (int d = 1; d <= 31 && static_cast<int>(days.size()) < count; ++d) {
        static constexpr int days_in[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        int dim = days_in[m.month - 1];
        if (m.month == 2 && (m.year % 4 == 0 && (m.year % 100 != 0 || m.year % 400 == 0))) dim = 29;
        if (d > dim) break;
        const Date date{m.year, m.month, d};
        if (is_weekday(date)) days.push_back(date);
    }
    return days;
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

std::string format_code(std::uint64_t n) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%04llu", static_cast<unsigned long long>(n));
    return buf;
}

}  // namespace

SynthOutput generate(const SynthConfig& config) {
    config.validate();
    const int n = config.n_institutions();
    const int t_cols = kHoursPerDay * config.days_per_month;

    SynthOutput out;
    GroundTruth& truth = out.truth;
    truth.config = config;
    truth.group.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) truth.group[static_cast<std::size_t>(i)] = i < config.n_crowd ? 0 : 1;

    Month month{2020, 1};
    for (int m = 0; m < config.months; ++m) {
        truth.months.push_back(month);
        month = month.next();
    }

    std::vector<std::vector<TradeRecord>> month_trades(static_cast<std::size_t>(config.months));
    // Per-institution sorted trade positions, for resting-order placement.
    std::vector<std::vector<std::vector<std::size_t>>> per_inst(
        static_cast<std::size_t>(config.months),
        std::vector<std::vector<std::size_t>>(static_cast<std::size_t>(n)));

    std::uint64_t order_counter = 0;
    for (int m = 0; m < config.months; ++m) {
        const Month mo = truth.months[static_cast<std::size_t>(m)];
        const auto days = trading_days_of(mo, config.days_per_month);
        if (static_cast<int>(days.size()) < config.days_per_month)
            throw std::runtime_error("month too short for requested trading days");
        truth.days.insert(truth.days.end(), days.begin(), days.end());

        // Codes: a fresh random injection into the 4-digit space each month.
        std::mt19937_64 code_rng(derive_seed(config.seed, "codes", static_cast<std::uint64_t>(m)));
        std::vector<int> pool(10000);
        for (int i = 0; i < 10000; ++i) pool[static_cast<std::size_t>(i)] = i;
        std::vector<std::string> codes(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const std::size_t j =
                static_cast<std::size_t>(i) +
                static_cast<std::size_t>(bounded_uint(code_rng, static_cast<std::uint64_t>(10000 - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
            codes[static_cast<std::size_t>(i)] = format_code(static_cast<std::uint64_t>(pool[static_cast<std::size_t>(i)]));
        }
        truth.code_of.push_back(codes);

        std::mt19937_64 rng(derive_seed(config.seed, "flow", static_cast<std::uint64_t>(m)));
        auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        auto coin = [&rng] { return (rng() & 1) ? 1 : -1; };
        std::normal_distribution<double> lognorm(0.0, 1.0);

        std::vector<std::int8_t> factor(static_cast<std::size_t>(t_cols));
        std::vector<std::int8_t> factor2(static_cast<std::size_t>(t_cols));
        for (int b = 0; b < t_cols; ++b) {
            factor[static_cast<std::size_t>(b)] = static_cast<std::int8_t>(coin());
            factor2[static_cast<std::size_t>(b)] = static_cast<std::int8_t>(coin());
        }
        truth.factor.push_back(factor);

        TernaryMatrix signs = TernaryMatrix::Zero(n, t_cols);
        struct Pending {
            TradeRecord trade;
            std::uint64_t seq;
            int inst;
        };
        std::vector<Pending> pending;
        std::uint64_t seq = 0;

        for (int b = 0; b < t_cols; ++b) {
            const Date day = days[static_cast<std::size_t>(b / kHoursPerDay)];
            const int hour = kFirstHour + b % kHoursPerDay;
            for (int i = 0; i < n; ++i) {
                if (uniform() >= config.activity) continue;
                const bool dealer = truth.group[static_cast<std::size_t>(i)] == 1;
                int sign;
                const double u = uniform();
                if (u < config.factor_strength) {
                    sign = dealer ? -factor[static_cast<std::size_t>(b)] : factor[static_cast<std::size_t>(b)];
                } else if (!dealer && u < config.factor_strength + config.second_factor_strength) {
                    sign = (i % 2 == 0) ? factor2[static_cast<std::size_t>(b)]
                                        : -factor2[static_cast<std::size_t>(b)];
                } else {
                    sign = coin();
                }
                signs(i, b) = static_cast<std::int8_t>(sign);

                const double v1 = std::max(0.01, round2(config.volume_scale * std::exp(lognorm(rng))));
                auto stamp = [&] {
                    return CivilTime{day, hour, static_cast<int>(bounded_uint(rng, 60)),
                                     static_cast<int>(bounded_uint(rng, 60))};
                };
                pending.push_back({TradeRecord{stamp(), "SYNTH", Venue::on_book,
                                               codes[static_cast<std::size_t>(i)], sign * v1, ""},
                                   seq++, i});
                // Occasionally split the bucket into a buy and a sell that
                // still net to the planted sign, exercising aggregation.
                if (uniform() < 0.35) {
                    double v2 = round2(v1 * (0.1 + 0.8 * uniform()));
                    if (v2 > v1 - 0.01) v2 = round2(v1 - 0.01);
                    if (v2 >= 0.01) {
                        pending.push_back({TradeRecord{stamp(), "SYNTH", Venue::on_book,
                                                       codes[static_cast<std::size_t>(i)], -sign * v2, ""},
                                           seq++, i});
                    }
                }
            }
        }
        truth.signs.push_back(std::move(signs));

        std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
            if (a.trade.timestamp != b.trade.timestamp) return a.trade.timestamp < b.trade.timestamp;
            return a.seq < b.seq;
        });
        auto& trades = month_trades[static_cast<std::size_t>(m)];
        trades.reserve(pending.size());
        for (auto& p : pending) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "ORD%08llu", static_cast<unsigned long long>(order_counter++));
            p.trade.order_id = buf;
            per_inst[static_cast<std::size_t>(m)][static_cast<std::size_t>(p.inst)].push_back(trades.size());
            trades.push_back(std::move(p.trade));
        }
    }

    // Resting orders: pair trades on both sides of each boundary under a
    // shared order id, the footnote mechanism the unscrambler relies on.
    std::uint64_t resting_counter = 0;
    for (int b = 0; b + 1 < config.months; ++b) {
        std::mt19937_64 rng(derive_seed(config.seed, "rest", static_cast<std::uint64_t>(b)));
        std::poisson_distribution<int> poisson(config.resting_order_rate);
        std::map<int, int> planted;
        for (int i = 0; i < n; ++i) {
            const int want = poisson(rng);
            const auto& before = per_inst[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
            const auto& after = per_inst[static_cast<std::size_t>(b) + 1][static_cast<std::size_t>(i)];
            const int count = std::min({want, static_cast<int>(before.size()), static_cast<int>(after.size())});
            for (int k = 0; k < count; ++k) {
                char buf[16];
                std::snprintf(buf, sizeof(buf), "RST%08llu", static_cast<unsigned long long>(resting_counter++));
                month_trades[static_cast<std::size_t>(b)][before[before.size() - 1 - static_cast<std::size_t>(k)]]
                    .order_id = buf;
                month_trades[static_cast<std::size_t>(b) + 1][after[static_cast<std::size_t>(k)]].order_id = buf;
            }
            if (count > 0) planted[i] = count;
        }
        truth.planted_orders.push_back(std::move(planted));
    }

    for (auto& trades : month_trades)
        out.trades.insert(out.trades.end(), trades.begin(), trades.end());
    return out;
}

namespace {

using nlohmann::json;

json config_to_json(const SynthConfig& c) {
    return json{{"n_crowd", c.n_crowd},
                {"n_dealer", c.n_dealer},
                {"months", c.months},
                {"days_per_month", c.days_per_month},
                {"factor_strength", c.factor_strength},
                {"second_factor_strength", c.second_factor_strength},
                {"activity", c.activity},
                {"volume_scale", c.volume_scale},
                {"resting_order_rate", c.resting_order_rate},
                {"seed", c.seed}};
}

SynthConfig config_from_json(const json& j) {
    SynthConfig c;
    c.n_crowd = j.at("n_crowd").get<int>();
    c.n_dealer = j.at("n_dealer").get<int>();
    c.months = j.at("months").get<int>();
    c.days_per_month = j.at("days_per_month").get<int>();
    c.factor_strength = j.at("factor_strength").get<double>();
    c.second_factor_strength = j.at("second_factor_strength").get<double>();
    c.activity = j.at("activity").get<double>();
    c.volume_scale = j.at("volume_scale").get<double>();
    c.resting_order_rate = j.at("resting_order_rate").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

}  // namespace

void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
    json j;
    j["config"] = config_to_json(truth.config);
    j["group"] = truth.group;
    {
        std::vector<std::string> months;
        for (const auto& m : truth.months) months.push_back(to_string(m));
        j["months"] = months;
    }
    {
        std::vector<std::string> days;
        for (const auto& d : truth.days) days.push_back(to_string(d));
        j["days"] = days;
    }
    j["code_of"] = truth.code_of;
    {
        std::vector<std::vector<int>> factor;
        for (const auto& f : truth.factor) factor.emplace_back(f.begin(), f.end());
        j["factor"] = factor;
    }
    {
        std::vector<std::vector<std::vector<int>>> signs;
        for (const auto& s : truth.signs) {
            std::vector<std::vector<int>> mat;
            for (Eigen::Index r = 0; r < s.rows(); ++r) {
                std::vector<int> row(static_cast<std::size_t>(s.cols()));
                for (Eigen::Index c = 0; c < s.cols(); ++c) row[static_cast<std::size_t>(c)] = s(r, c);
                mat.push_back(std::move(row));
            }
            signs.push_back(std::move(mat));
        }
        j["signs"] = signs;
    }
    {
        std::vector<std::map<std::string, int>> planted;
        for (const auto& p : truth.planted_orders) {
            std::map<std::string, int> entry;
            for (const auto& [id, count] : p) entry[std::to_string(id)] = count;
            planted.push_back(std::move(entry));
        }
        j["planted_orders"] = planted;
    }
    out << j.dump(1) << '\n';
}

GroundTruth read_ground_truth(std::istream& in) {
    json j;
    in >> j;
    GroundTruth truth;
    truth.config = config_from_json(j.at("config"));
    truth.group = j.at("group").get<std::vector<int>>();
    for (const auto& m : j.at("months")) {
        const auto parsed = parse_month(m.get<std::string>());
        if (!parsed) throw std::runtime_error("bad month in ground truth");
        truth.months.push_back(*parsed);
    }
    for (const auto& d : j.at("days")) {
        const auto parsed = parse_date(d.get<std::string>());
        if (!parsed) throw std::runtime_error("bad date in ground truth");
        truth.days.push_back(*parsed);
    }
    truth.code_of = j.at("code_of").get<std::vector<std::vector<std::string>>>();
    for (const auto& f : j.at("factor")) {
        const auto ints = f.get<std::vector<int>>();
        truth.factor.emplace_back(ints.begin(), ints.end());
    }
    for (const auto& s : j.at("signs")) {
        const auto mat = s.get<std::vector<std::vector<int>>>();
        TernaryMatrix values(static_cast<Eigen::Index>(mat.size()),
                             static_cast<Eigen::Index>(mat.empty() ? 0 : mat.front().size()));
        for (std::size_t r = 0; r < mat.size(); ++r)
            for (std::size_t c = 0; c < mat[r].size(); ++c)
                values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    static_cast<std::int8_t>(mat[r][c]);
        truth.signs.push_back(std::move(values));
    }
    for (const auto& p : j.at("planted_orders")) {
        std::map<int, int> entry;
        for (const auto& [key, value] : p.items()) entry[std::stoi(key)] = value.get<int>();
        truth.planted_orders.push_back(std::move(entry));
    }
    return truth;
}

double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("rand_index: size mismatch");
    const std::size_t n = a.size();
    if (n < 2) return 1.0;
    long agree = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            ++total;
            if ((a[i] == a[j]) == (b[i] == b[j])) ++agree;
        }
    return static_cast<double>(agree) / static_cast<double>(total);
}

Scorecard ground_truth_compare(const std::vector<MonthClustering>& clusterings,
                               const std::vector<LinkMap>& links, const std::vector<Track>& tracks,
                               const std::vector<MinorityRow>& minority, const GroundTruth& truth,
                               double flag_threshold) {
    Scorecard card;
    card.flag_threshold = flag_threshold;

    std::map<Month, int> month_index;
    for (std::size_t i = 0; i < truth.months.size(); ++i)
        month_index[truth.months[i]] = static_cast<int>(i);

    for (const auto& mc : clusterings) {
        const auto it = month_index.find(mc.month);
        if (it == month_index.end()) continue;
        std::vector<int> planted, found;
        for (std::size_t leaf = 0; leaf < mc.codes.size(); ++leaf) {
            const int id = truth.true_id(it->second, mc.codes[leaf]);
            if (id < 0) continue;
            planted.push_back(truth.group[static_cast<std::size_t>(id)]);
            found.push_back(mc.cut2.label_of_leaf[leaf]);
        }
        card.months.push_back(mc.month);
        card.rand_index.push_back(rand_index(found, planted));
    }

    long supported = 0;
    for (const auto& p : truth.planted_orders)
        for (const auto& [id, count] : p)
            if (count > 0) ++supported;
    const long overall =
        static_cast<long>(truth.months.size() > 1 ? truth.months.size() - 1 : 0) *
        truth.config.n_institutions();

    for (const auto& map : links) {
        const auto it = month_index.find(map.from);
        if (it == month_index.end()) continue;
        for (const auto& [old_code, new_code] : map.links) {
            ++card.links_recovered;
            const int id1 = truth.true_id(it->second, old_code);
            const int id2 = truth.true_id(it->second + 1, new_code);
            if (id1 >= 0 && id1 == id2) ++card.links_correct;
        }
    }
    card.link_precision = card.links_recovered == 0
                              ? 1.0
                              : static_cast<double>(card.links_correct) / card.links_recovered;
    card.link_recall_supported =
        supported == 0 ? 1.0 : static_cast<double>(card.links_correct) / static_cast<double>(supported);
    card.link_recall_overall =
        overall == 0 ? 1.0 : static_cast<double>(card.links_correct) / static_cast<double>(overall);

    for (const auto& track : tracks) {
        const auto it = month_index.find(track.first);
        if (it == month_index.end()) continue;
        int seen = -2;
        bool mixed = false;
        for (std::size_t k = 0; k < track.codes.size(); ++k) {
            const int id = truth.true_id(it->second + static_cast<int>(k), track.codes[k]);
            if (seen == -2) seen = id;
            else if (id != seen) mixed = true;
        }
        if (mixed) ++card.false_joins;
    }

    for (const auto& row : minority) {
        const auto it = month_index.find(row.first_month);
        if (it == month_index.end()) continue;
        const int id = truth.true_id(it->second, row.code);
        if (id < 0 || truth.group[static_cast<std::size_t>(id)] != 1) continue;
        ++card.dealers_tested;
        if (row.prob_nonrandom > flag_threshold) ++card.dealers_flagged;
    }
    card.minority_dealer_hit_rate =
        card.dealers_tested == 0 ? 0.0
                                 : static_cast<double>(card.dealers_flagged) / card.dealers_tested;
    return card;
}

}  // namespace stratcorr
