#include "stratcorr/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace stratcorr {

std::string to_string(Linkage l) { return l == Linkage::complete ? "complete" : "single"; }

Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& rho) {
    if (rho.rows() != rho.cols()) throw ContractViolation("distance_matrix: not square");
    Eigen::MatrixXd d = (2.0 * (1.0 - rho.array())).cwiseMax(0.0).sqrt().matrix();
    d.diagonal().setZero();
    return d;
}

Dendrogram linkage_cluster(const Eigen::MatrixXd& dist, const std::vector<std::string>& codes,
                           Linkage linkage) {
    const int n = static_cast<int>(dist.rows());
    if (n < 2) throw DegenerateInputError("clustering needs at least 2 leaves");
    if (dist.cols() != n || static_cast<int>(codes.size()) != n)
        throw ContractViolation("distance matrix and code list disagree");

    Dendrogram dend;
    dend.leaves = codes;
    dend.merges.reserve(static_cast<std::size_t>(n - 1));

    // Active clusters carry their node id and smallest leaf index; pairwise
    // distances update by the Lance-Williams rule for the chosen linkage
    // (max for complete, min for single), which reproduces the max/min over
    // original member pairs exactly.
    struct Active {
        int node;
        int min_leaf;
    };
    std::vector<Active> active(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) active[static_cast<std::size_t>(i)] = {i, i};
    Eigen::MatrixXd d = dist;
    std::vector<int> alive(static_cast<std::size_t>(n));
    std::iota(alive.begin(), alive.end(), 0);

    for (int step = 0; step < n - 1; ++step) {
        double best = std::numeric_limits<double>::infinity();
        int bi = -1, bj = -1;  // indices into `alive`
        for (std::size_t a = 0; a < alive.size(); ++a)
            for (std::size_t b = a + 1; b < alive.size(); ++b) {
                const double dij = d(alive[a], alive[b]);
                int lo = active[static_cast<std::size_t>(alive[a])].min_leaf;
                int hi = active[static_cast<std::size_t>(alive[b])].min_leaf;
                if (lo > hi) std::swap(lo, hi);
                if (dij < best) {
                    best = dij;
                    bi = static_cast<int>(a);
                    bj = static_cast<int>(b);
                } else if (dij == best && bi >= 0) {
                    int cur_lo = active[static_cast<std::size_t>(alive[static_cast<std::size_t>(bi)])].min_leaf;
                    int cur_hi = active[static_cast<std::size_t>(alive[static_cast<std::size_t>(bj)])].min_leaf;
                    if (cur_lo > cur_hi) std::swap(cur_lo, cur_hi);
                    if (lo < cur_lo || (lo == cur_lo && hi < cur_hi)) {
                        bi = static_cast<int>(a);
                        bj = static_cast<int>(b);
                    }
                }
            }

        const int ia = alive[static_cast<std::size_t>(bi)];
        const int ib = alive[static_cast<std::size_t>(bj)];
        Active& ca = active[static_cast<std::size_t>(ia)];
        Active& cb = active[static_cast<std::size_t>(ib)];
        const bool a_left = ca.min_leaf < cb.min_leaf;
        dend.merges.push_back({a_left ? ca.node : cb.node, a_left ? cb.node : ca.node, best});

        // Fold cluster ib into ia.
        for (int other : alive) {
            if (other == ia || other == ib) continue;
            const double da = d(ia, other), db = d(ib, other);
            const double nd = linkage == Linkage::complete ? std::max(da, db) : std::min(da, db);
            d(ia, other) = nd;
            d(other, ia) = nd;
        }
        ca.node = n + step;
        ca.min_leaf = std::min(ca.min_leaf, cb.min_leaf);
        alive.erase(alive.begin() + bj);
    }
    return dend;
}

namespace {

// Leaves of the subtree rooted at `node`, left-to-right.
void collect(const Dendrogram& dend, int node, std::vector<int>& out) {
    const int n = static_cast<int>(dend.leaves.size());
    if (node < n) {
        out.push_back(node);
        return;
    }
    const Merge& m = dend.merges[static_cast<std::size_t>(node - n)];
    collect(dend, m.left, out);
    collect(dend, m.right, out);
}

ClusterCut finalize_cut(const Dendrogram& dend, std::vector<std::vector<int>> clusters, double height) {
    ClusterCut out;
    out.height = height;
    for (auto& c : clusters) std::sort(c.begin(), c.end());
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    out.clusters = std::move(clusters);
    out.label_of_leaf.assign(dend.leaves.size(), -1);
    for (std::size_t c = 0; c < out.clusters.size(); ++c)
        for (int leaf : out.clusters[c]) out.label_of_leaf[static_cast<std::size_t>(leaf)] = static_cast<int>(c);

    if (out.clusters.size() == 2) {
        const std::size_t s0 = out.clusters[0].size(), s1 = out.clusters[1].size();
        if (s0 != s1) {
            out.majority = s0 > s1 ? 0 : 1;
        } else {
            // Size tie: the cluster holding the lexicographically smallest
            // code is the majority.
            const auto smallest_code = [&](const std::vector<int>& c) {
                std::string best = dend.leaves[static_cast<std::size_t>(c.front())];
                for (int leaf : c) best = std::min(best, dend.leaves[static_cast<std::size_t>(leaf)]);
                return best;
            };
            out.majority = smallest_code(out.clusters[0]) < smallest_code(out.clusters[1]) ? 0 : 1;
        }
        out.minority = 1 - out.majority;
    }
    return out;
}

}  // namespace

ClusterCut cut(const Dendrogram& dend, double height) {
    const int n = static_cast<int>(dend.leaves.size());
    std::vector<std::vector<int>> clusters;
    std::vector<int> root(static_cast<std::size_t>(n + dend.merges.size()), -1);
    std::vector<std::vector<int>> members(root.size());
    for (int i = 0; i < n; ++i) members[static_cast<std::size_t>(i)] = {i};
    std::vector<bool> open(root.size(), false);
    for (int i = 0; i < n; ++i) open[static_cast<std::size_t>(i)] = true;

    for (std::size_t m = 0; m < dend.merges.size(); ++m) {
        const Merge& mg = dend.merges[m];
        if (!(mg.height < height)) break;  // merges applied strictly below the cut
        const std::size_t node = static_cast<std::size_t>(n + static_cast<int>(m));
        auto& acc = members[node];
        acc = std::move(members[static_cast<std::size_t>(mg.left)]);
        auto& rhs = members[static_cast<std::size_t>(mg.right)];
        acc.insert(acc.end(), rhs.begin(), rhs.end());
        rhs.clear();
        open[static_cast<std::size_t>(mg.left)] = false;
        open[static_cast<std::size_t>(mg.right)] = false;
        open[node] = true;
    }
    for (std::size_t i = 0; i < open.size(); ++i)
        if (open[i] && !members[i].empty()) clusters.push_back(members[i]);
    return finalize_cut(dend, std::move(clusters), height);
}

ClusterCut cut_k(const Dendrogram& dend, int k) {
    const int n = static_cast<int>(dend.leaves.size());
    if (k < 1 || k > n) throw ContractViolation("cut_k: k outside [1, N]");
    const int applied = n - k;
    std::vector<std::vector<int>> clusters;
    std::vector<bool> used(static_cast<std::size_t>(n + applied), false);
    // Roots after undoing the last k-1 merges: the nodes among
    // {0..n+applied-1} not consumed by the first n-k merges.
    for (int m = 0; m < applied; ++m) {
        const Merge& mg = dend.merges[static_cast<std::size_t>(m)];
        used[static_cast<std::size_t>(mg.left)] = true;
        used[static_cast<std::size_t>(mg.right)] = true;
    }
    for (int node = 0; node < n + applied; ++node) {
        if (used[static_cast<std::size_t>(node)]) continue;
        std::vector<int> leaves;
        collect(dend, node, leaves);
        clusters.push_back(std::move(leaves));
    }
    const double height = applied > 0 ? dend.merges[static_cast<std::size_t>(applied - 1)].height : 0.0;
    return finalize_cut(dend, std::move(clusters), height);
}

std::vector<int> leaf_order(const Dendrogram& dend) {
    const int n = static_cast<int>(dend.leaves.size());
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    if (dend.merges.empty()) {
        for (int i = 0; i < n; ++i) order.push_back(i);
        return order;
    }
    collect(dend, n + static_cast<int>(dend.merges.size()) - 1, order);
    return order;
}

}  // namespace stratcorr
