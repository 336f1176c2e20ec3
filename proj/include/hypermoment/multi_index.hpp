#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

#include "hypermoment/common.hpp"

namespace hypermoment {

using MultiIndex = std::vector<int>;

inline int grade(const MultiIndex& a) {
  return std::accumulate(a.begin(), a.end(), 0);
}

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline std::int64_t multi_factorial(const MultiIndex& a) {
  std::int64_t r = 1;
  for (int ai : a) r *= factorial(ai);
  return r;
}

// Number of distinct orderings of the digits of a: |a|!/a!, exact for |a| <= 20.
inline std::int64_t permutation_count(const MultiIndex& a) {
  std::int64_t r = 1;
  int seen = 0;
  for (int ai : a) {
    for (int i = 1; i <= ai; ++i) r = r * (seen + i) / i;
    seen += ai;
  }
  return r;
}

// 1-based position within the graded enumeration (grades ascending,
// descending lexicographic within each grade).
inline int ordinal(const MultiIndex& a) {
  const int D = static_cast<int>(a.size());
  std::int64_t n = 1;
  int tail = 0;
  for (int i = 1; i <= D; ++i) {
    tail += a[D - i];
    n += binomial(tail + i - 1, i);
  }
  return static_cast<int>(n);
}

// Drop the leading component.
inline MultiIndex hat(const MultiIndex& a) {
  if (a.empty()) throw ValidationError("hat: empty multi-index");
  return MultiIndex(a.begin() + 1, a.end());
}

// Zero the leading component.
inline MultiIndex tilde(const MultiIndex& a) {
  if (a.empty()) throw ValidationError("tilde: empty multi-index");
  MultiIndex t = a;
  t[0] = 0;
  return t;
}

inline MultiIndex unit_index(int D, int i) {
  MultiIndex a(D, 0);
  a[i] += 1;
  return a;
}

inline MultiIndex shifted(MultiIndex a, int i, int by) {
  a[i] += by;
  return a;
}

// Direction digits of a, non-decreasing, 1-based: (2,1) -> (1,1,2).
inline std::vector<int> direction_digits(const MultiIndex& a) {
  std::vector<int> phi;
  for (int d = 0; d < static_cast<int>(a.size()); ++d)
    phi.insert(phi.end(), a[d], d + 1);
  return phi;
}

// Multi-index whose d-th entry counts occurrences of digit d in phi.
inline MultiIndex digit_counts(const std::vector<int>& phi, int D) {
  MultiIndex a(D, 0);
  for (int d : phi) {
    if (d < 1 || d > D) throw ValidationError("digit_counts: digit out of range");
    ++a[d - 1];
  }
  return a;
}

namespace detail {

inline void enumerate_grade(int D, int m, MultiIndex& cur, int pos,
                            std::vector<MultiIndex>& out) {
  if (pos == D - 1) {
    cur[pos] = m;
    out.push_back(cur);
    return;
  }
  for (int v = m; v >= 0; --v) {
    cur[pos] = v;
    enumerate_grade(D, m - v, cur, pos + 1, out);
  }
}

}  // namespace detail

// All multi-indices with D components and grade <= M, in ordinal order.
inline std::vector<MultiIndex> enumerate_indices(int D, int M) {
  std::vector<MultiIndex> out;
  if (D == 0) {
    out.push_back({});
    return out;
  }
  MultiIndex cur(D, 0);
  for (int m = 0; m <= M; ++m) detail::enumerate_grade(D, m, cur, 0, out);
  return out;
}

class IndexTable {
 public:
  IndexTable(int D, int M) : D_(D), M_(M), indices_(enumerate_indices(D, M)) {
    for (int i = 0; i < static_cast<int>(indices_.size()); ++i)
      pos_[indices_[i]] = i;
  }

  int dim() const { return D_; }
  int order() const { return M_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const MultiIndex& index(int pos) const { return indices_[pos]; }
  bool contains(const MultiIndex& a) const { return pos_.count(a) != 0; }

  // 0-based position; ordinal(a) == position(a) + 1.
  int position(const MultiIndex& a) const {
    auto it = pos_.find(a);
    if (it == pos_.end()) throw ValidationError("multi-index outside table");
    return it->second;
  }

 private:
  int D_, M_;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, int> pos_;
};

inline const IndexTable& index_table(int D, int M) {
  static std::map<std::pair<int, int>, std::unique_ptr<IndexTable>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({D, M});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(D, M), std::make_unique<IndexTable>(D, M))
             .first;
  return *it->second;
}

}  // namespace hypermoment
