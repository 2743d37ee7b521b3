#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "stratcorr/types.hpp"

namespace stratcorr {

enum class Linkage { complete, single };

std::string to_string(Linkage l);

// d_ij = sqrt(2 * (1 - rho_ij)); zero diagonal, range [0, 2].
Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& rho);

// Merge of two active clusters. Node ids follow the usual convention:
// leaves are 0..N-1, the m-th merge creates node N+m. `left` is always the
// side containing the smaller leaf index.
struct Merge {
    int left = 0;
    int right = 0;
    double height = 0.0;
};

struct Dendrogram {
    std::vector<std::string> leaves;
    std::vector<Merge> merges;  // N-1 entries, non-decreasing heights
};

// Agglomerative clustering; at every step the pair of clusters at minimal
// linkage distance merges. Ties break deterministically toward the pair
// with the lowest leaf indices. Throws DegenerateInputError for N < 2.
Dendrogram linkage_cluster(const Eigen::MatrixXd& dist, const std::vector<std::string>& codes,
                           Linkage linkage = Linkage::complete);

inline Dendrogram complete_linkage(const Eigen::MatrixXd& dist, const std::vector<std::string>& codes) {
    return linkage_cluster(dist, codes, Linkage::complete);
}

// Partition of the leaves. `clusters` are ordered by smallest member leaf
// index; majority/minority are indices into `clusters`, set only when the
// cut yields exactly two clusters (minority = smaller; a size tie makes the
// cluster holding the lexicographically smallest code the majority).
struct ClusterCut {
    double height = 0.0;
    std::vector<std::vector<int>> clusters;
    std::vector<int> label_of_leaf;
    int majority = -1;
    int minority = -1;
};

// Connected components of merges strictly below `height`.
ClusterCut cut(const Dendrogram& dend, double height);

// Exactly k clusters: the last k-1 merges undone. 1 <= k <= N.
ClusterCut cut_k(const Dendrogram& dend, int k);

// Display permutation: in-order traversal of the merge tree, left subtree
// first. Reordering a correlation matrix by it groups clusters into
// contiguous blocks.
std::vector<int> leaf_order(const Dendrogram& dend);

}  // namespace stratcorr
