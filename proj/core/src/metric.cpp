#include "sinrsched/metric.hpp"

#include <cmath>
#include <cstddef>

#include "sinrsched/error.hpp"

namespace sinrsched {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::MetricInvalid, msg); }

}  // namespace

void Metric::build_index() {
  index_.reserve(ids_.size());
  for (size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i].empty()) invalid("empty node id");
    auto [it, inserted] = index_.emplace(ids_[i], static_cast<int>(i));
    (void)it;
    if (!inserted) invalid("duplicate node id '" + ids_[i] + "'");
  }
}

Metric Metric::euclidean(int dim,
                         std::vector<std::pair<std::string, std::vector<double>>> points) {
  if (dim < 1 || dim > 3) invalid("euclidean dimension must be 1, 2 or 3");
  Metric m;
  m.euclidean_ = true;
  m.dim_ = dim;
  m.ids_.reserve(points.size());
  m.coords_.assign(points.size() * 3, 0.0);
  for (size_t i = 0; i < points.size(); ++i) {
    auto& [id, xs] = points[i];
    if (static_cast<int>(xs.size()) != dim)
      invalid("node '" + id + "' has " + std::to_string(xs.size()) + " coordinates, expected " +
              std::to_string(dim));
    for (int k = 0; k < dim; ++k) {
      if (!std::isfinite(xs[static_cast<size_t>(k)]))
        invalid("node '" + id + "' has a non-finite coordinate");
      m.coords_[i * 3 + static_cast<size_t>(k)] = xs[static_cast<size_t>(k)];
    }
    m.ids_.push_back(std::move(id));
  }
  m.build_index();
  return m;
}

double Metric::euclidean_distance(int i, int j) const {
  const double* a = coords(i);
  const double* b = coords(j);
  double s = 0.0;
  for (int k = 0; k < dim_; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

Metric Metric::matrix(std::vector<std::string> ids, std::vector<std::vector<double>> d) {
  const size_t n = ids.size();
  if (d.size() != n) invalid("distance matrix row count does not match id count");
  Metric m;
  m.euclidean_ = false;
  m.ids_ = std::move(ids);
  m.build_index();
  m.dist_.assign(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    if (d[i].size() != n) invalid("distance matrix row " + std::to_string(i) + " is not square");
    for (size_t j = 0; j < n; ++j) {
      const double v = d[i][j];
      if (!std::isfinite(v) || v < 0.0)
        invalid("d[" + std::to_string(i) + "][" + std::to_string(j) + "] is negative or not finite");
      m.dist_[i * n + j] = v;
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (m.dist_[i * n + i] > kTriangleTol)
      invalid("d[" + std::to_string(i) + "][" + std::to_string(i) + "] must be 0");
    m.dist_[i * n + i] = 0.0;
  }
  // Symmetrize: values must agree within tolerance; the upper triangle wins
  // so identical inputs always yield identical in-memory tables.
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if (std::fabs(m.dist_[i * n + j] - m.dist_[j * n + i]) > kTriangleTol)
        invalid("d[" + std::to_string(i) + "][" + std::to_string(j) + "] is not symmetric");
      m.dist_[j * n + i] = m.dist_[i * n + j];
    }
  // Triangle inequality, absolute tolerance. O(n^3) but construction-only.
  for (size_t k = 0; k < n; ++k) {
    const double* dk = &m.dist_[k * n];
    for (size_t i = 0; i < n; ++i) {
      const double dik = m.dist_[i * n + k];
      const double* di = &m.dist_[i * n];
      for (size_t j = 0; j < n; ++j) {
        if (di[j] > dik + dk[j] + kTriangleTol)
          invalid("triangle inequality violated for nodes (" + m.ids_[i] + ", " + m.ids_[j] +
                  ", " + m.ids_[k] + ")");
      }
    }
  }
  return m;
}

int Metric::try_index_of(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

int Metric::index_of(const std::string& id) const {
  const int idx = try_index_of(id);
  if (idx < 0) throw Error(ErrorKind::UnknownLink, "unknown node id '" + id + "'");
  return idx;
}

}  // namespace sinrsched
