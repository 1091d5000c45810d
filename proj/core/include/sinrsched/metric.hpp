#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace sinrsched {

// Node set with pairwise distances. Two backings:
//  - Euclidean point sets in dimension 1, 2 or 3;
//  - an explicit symmetric distance matrix (arbitrary metric space, e.g.
//    tree metrics), validated for metric axioms on construction with
//    absolute tolerance 1e-9 on the triangle inequality.
class Metric {
 public:
  static constexpr double kTriangleTol = 1e-9;

  static Metric euclidean(int dim,
                          std::vector<std::pair<std::string, std::vector<double>>> points);
  static Metric matrix(std::vector<std::string> ids, std::vector<std::vector<double>> d);

  int node_count() const { return static_cast<int>(ids_.size()); }
  // Index of a node id, or -1 when absent.
  int try_index_of(const std::string& id) const;
  // Same, but throws Error(UnknownLink) naming the id.
  int index_of(const std::string& id) const;
  const std::string& node_id(int idx) const { return ids_[static_cast<size_t>(idx)]; }

  double distance(int i, int j) const {
    if (euclidean_) return euclidean_distance(i, j);
    return dist_[static_cast<size_t>(i) * ids_.size() + static_cast<size_t>(j)];
  }

  bool is_euclidean() const { return euclidean_; }
  int dim() const { return dim_; }
  // Coordinates of a node (euclidean metrics only), dim() entries.
  const double* coords(int idx) const { return &coords_[static_cast<size_t>(idx) * 3]; }
  const std::vector<std::string>& node_ids() const { return ids_; }

 private:
  Metric() = default;
  double euclidean_distance(int i, int j) const;
  void build_index();

  bool euclidean_ = true;
  int dim_ = 0;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<double> coords_;  // euclidean: node-major, padded to 3
  std::vector<double> dist_;    // matrix: row-major node_count^2
};

}  // namespace sinrsched
