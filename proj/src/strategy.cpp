#include "stratcorr/strategy.hpp"

#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>

#include "stratcorr/csv.hpp"

namespace stratcorr {

double net_volume(std::span<const TradeRecord> trades) {
    double net = 0.0;
    for (const auto& t : trades) net += t.signed_volume;
    return net;
}

int ternary_sign(double net, bool was_active) {
    if (!was_active) return 0;
    if (net > 0.0) return 1;
    if (net < 0.0) return -1;
    return 0;
}

StrategyBuild build_strategy_matrix(const MonthSample& sample, double activity_fraction) {
    const int t_cols = static_cast<int>(sample.buckets.size());
    if (t_cols == 0) throw EmptySampleError("month sample has no buckets");

    // First-appearance order over the assigned trades.
    std::vector<std::string> codes;
    std::map<std::string, int> row_of;
    for (const auto& trade : sample.trades) {
        if (row_of.emplace(trade.institution, static_cast<int>(codes.size())).second)
            codes.push_back(trade.institution);
    }

    const int n_all = static_cast<int>(codes.size());
    Eigen::MatrixXd net = Eigen::MatrixXd::Zero(n_all, t_cols);
    Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> active =
        Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_all, t_cols);
    for (std::size_t i = 0; i < sample.trades.size(); ++i) {
        const int row = row_of[sample.trades[i].institution];
        const int col = sample.bucket_of[i];
        net(row, col) += sample.trades[i].signed_volume;
        active(row, col) = 1;
    }

    // Strict "> fraction*T"; the epsilon keeps an exact-tie count (e.g. 2 of
    // T=6 under the 1/3 rule) excluded despite the rounding of fraction*T.
    const double threshold = activity_fraction * t_cols + 1e-9;

    StrategyBuild out;
    out.matrix.instrument = sample.instrument;
    out.matrix.venue = sample.venue;
    out.matrix.month = sample.month;
    out.matrix.bucket_labels.reserve(sample.buckets.size());
    for (const auto& b : sample.buckets)
        out.matrix.bucket_labels.push_back(bucket_label(b, sample.first_hour));

    std::vector<int> kept;
    for (int r = 0; r < n_all; ++r) {
        const int n_active = active.row(r).sum();
        if (static_cast<double>(n_active) > threshold) {
            kept.push_back(r);
            out.matrix.institutions.push_back(codes[r]);
        } else {
            out.excluded.push_back({codes[r], n_active});
        }
    }
    if (kept.empty()) throw EmptySampleError("activity filter removed every institution");

    out.matrix.values.resize(static_cast<Eigen::Index>(kept.size()), t_cols);
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (int c = 0; c < t_cols; ++c)
            out.matrix.values(static_cast<Eigen::Index>(i), c) =
                static_cast<std::int8_t>(ternary_sign(net(kept[i], c), active(kept[i], c) != 0));
    return out;
}

void write_strategy_matrix(std::ostream& out, const StrategyMatrix& m) {
    out << m.instrument << ',' << to_string(m.venue) << ',' << to_string(m.month) << ','
        << m.rows() << ',' << m.cols() << '\n';
    out << "#buckets";
    for (const auto& b : m.bucket_labels) out << ',' << b;
    out << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out << m.institutions[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < m.cols(); ++c) out << ',' << int(m.values(r, c));
        out << '\n';
    }
}

StrategyMatrix read_strategy_matrix(std::istream& in) {
    std::string line;
    // Leading "# ..." lines (config hash, seed) are tolerated metadata.
    do {
        if (!std::getline(in, line)) throw SchemaError("empty strategy matrix file");
        if (!line.empty() && line.back() == '\r') line.pop_back();
    } while (!line.empty() && line.front() == '#');
    const auto head = split_csv(line);
    if (head.size() != 5) throw SchemaError("strategy matrix header must be instrument,venue,month,N,T");

    StrategyMatrix m;
    m.instrument = head[0];
    const auto venue = parse_venue(head[1]);
    const auto month = parse_month(head[2]);
    if (!venue || !month) throw SchemaError("bad venue or month in strategy matrix header");
    m.venue = *venue;
    m.month = *month;
    const int n = std::atoi(head[3].c_str());
    const int t = std::atoi(head[4].c_str());
    if (n <= 0 || t <= 0) throw SchemaError("non-positive N or T in strategy matrix header");

    m.values.resize(n, t);
    int row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("#buckets", 0) == 0) {
            const auto cells = split_csv(line);
            if (static_cast<int>(cells.size()) == t + 1)
                m.bucket_labels.assign(cells.begin() + 1, cells.end());
            continue;
        }
        const auto cells = split_csv(line);
        if (static_cast<int>(cells.size()) != t + 1)
            throw SchemaError("strategy matrix row has wrong length");
        if (row >= n) throw SchemaError("strategy matrix has more rows than declared");
        m.institutions.push_back(cells[0]);
        for (int c = 0; c < t; ++c) {
            const int v = std::atoi(cells[static_cast<std::size_t>(c) + 1].c_str());
            if (v < -1 || v > 1) throw SchemaError("strategy matrix value outside {-1,0,1}");
            m.values(row, c) = static_cast<std::int8_t>(v);
        }
        ++row;
    }
    if (row != n) throw SchemaError("strategy matrix has fewer rows than declared");
    if (m.bucket_labels.empty()) {
        m.bucket_labels.reserve(static_cast<std::size_t>(t));
        for (int c = 0; c < t; ++c) m.bucket_labels.push_back("t" + std::to_string(c));
    }
    return m;
}

}  // namespace stratcorr
