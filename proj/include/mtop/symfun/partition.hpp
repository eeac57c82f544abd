#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "mtop/core.hpp"

namespace mtop::symfun {

// Young diagram stored as weakly decreasing row lengths, trailing zeros
// trimmed.
class Partition {
 public:
  Partition() = default;
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] < 0) throw ConfigError("partition parts must be non-negative");
      if (i > 0 && parts_[i] > parts_[i - 1])
        throw ConfigError("partition parts must be weakly decreasing");
    }
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  }

  const std::vector<int>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  // Number of nonzero rows, i.e. the first column height.
  int length() const { return static_cast<int>(parts_.size()); }
  int first_row() const { return parts_.empty() ? 0 : parts_.front(); }
  int first_column() const { return length(); }
  int size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

  // Row i (0-based); rows past the end are zero.
  int operator[](int i) const {
    return (i >= 0 && i < length()) ? parts_[static_cast<std::size_t>(i)] : 0;
  }

  bool is_row() const { return length() <= 1; }
  bool is_column() const { return first_row() <= 1; }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(parts_[i]);
    }
    return s + ")";
  }

  auto operator<=>(const Partition&) const = default;
  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> parts_;
};

inline Partition conjugate(const Partition& lambda) {
  std::vector<int> cols(static_cast<std::size_t>(lambda.first_row()), 0);
  for (int row : lambda.parts())
    for (int j = 0; j < row; ++j) ++cols[static_cast<std::size_t>(j)];
  return Partition(std::move(cols));
}

inline Partition row_partition(int s) { return s > 0 ? Partition{s} : Partition{}; }

inline Partition column_partition(int a) {
  return Partition(std::vector<int>(static_cast<std::size_t>(std::max(a, 0)), 1));
}

// All partitions of n with at most max_rows rows and parts at most max_part,
// in reverse lexicographic order ((n) first).
inline std::vector<Partition> partitions_of(int n, int max_rows = 1 << 20,
                                            int max_part = 1 << 20) {
  std::vector<Partition> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int remaining, int cap) {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) >= max_rows) return;
    for (int p = std::min(remaining, cap); p >= 1; --p) {
      cur.push_back(p);
      rec(remaining - p, p);
      cur.pop_back();
    }
  };
  if (n < 0) return out;
  rec(n, std::min(n, max_part));
  return out;
}

// All partitions with |lambda| <= max_size and at most max_rows rows, ordered
// by size, then as in partitions_of.
inline std::vector<Partition> partitions_up_to(int max_size, int max_rows = 1 << 20) {
  std::vector<Partition> out;
  for (int n = 0; n <= max_size; ++n) {
    auto level = partitions_of(n, max_rows);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

}  // namespace mtop::symfun
