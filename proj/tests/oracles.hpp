#pragma once

// Deliberately naive reference implementations, independent of the library
// code they check.

#include "dusk/types.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

namespace dusk::oracle {

/// Every string over the first `alphabet` letters with length <= max_len.
inline std::vector<std::string> all_strings(int alphabet, int max_len) {
  std::vector<std::string> out{""};
  std::size_t begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (int c = 0; c < alphabet; ++c) out.push_back(out[i] + static_cast<char>('a' + c));
    }
    begin = end;
  }
  return out;
}

/// Edit distances from `source` to every string in `universe`, by breadth-first
/// search over single-character insertions, deletions and substitutions that
/// stay inside the universe.
inline std::unordered_map<std::string, int> edit_distances_bfs(
    const std::string& source, const std::vector<std::string>& universe, int alphabet) {
  std::size_t max_len = 0;
  for (const auto& s : universe) max_len = std::max(max_len, s.size());
  std::unordered_map<std::string, int> dist{{source, 0}};
  std::deque<std::string> queue{source};
  auto visit = [&](const std::string& next, int d) {
    if (next.size() > max_len || dist.contains(next)) return;
    dist.emplace(next, d);
    queue.push_back(next);
  };
  while (!queue.empty()) {
    const std::string s = queue.front();
    queue.pop_front();
    const int d = dist[s] + 1;
    for (std::size_t i = 0; i <= s.size(); ++i) {
      for (int c = 0; c < alphabet; ++c) {
        visit(s.substr(0, i) + static_cast<char>('a' + c) + s.substr(i), d);
      }
      if (i < s.size()) {
        visit(s.substr(0, i) + s.substr(i + 1), d);
        for (int c = 0; c < alphabet; ++c) {
          std::string t = s;
          t[i] = static_cast<char>('a' + c);
          visit(t, d);
        }
      }
    }
  }
  return dist;
}

/// Textbook recursive definition with memoization.
inline int levenshtein_recursive(const std::string& a, const std::string& b) {
  std::map<std::pair<std::size_t, std::size_t>, int> memo;
  std::function<int(std::size_t, std::size_t)> d = [&](std::size_t i, std::size_t j) -> int {
    if (i == 0) return static_cast<int>(j);
    if (j == 0) return static_cast<int>(i);
    if (auto it = memo.find({i, j}); it != memo.end()) return it->second;
    const int v = std::min({d(i - 1, j) + 1, d(i, j - 1) + 1,
                            d(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1)});
    memo[{i, j}] = v;
    return v;
  };
  return d(a.size(), b.size());
}

inline double angle_gap(double a, double b) {
  double d = std::fabs(a - b);
  while (d > 2 * std::numbers::pi) d -= 2 * std::numbers::pi;
  return std::min(d, 2 * std::numbers::pi - d);
}

/// DTW by direct recursion over the last aligned pair.
inline double dtw_recursive(const std::vector<double>& a, const std::vector<double>& b) {
  std::map<std::pair<std::size_t, std::size_t>, double> memo;
  std::function<double(std::size_t, std::size_t)> d = [&](std::size_t i, std::size_t j) -> double {
    const double cost = angle_gap(a[i], b[j]);
    if (i == 0 && j == 0) return cost;
    if (auto it = memo.find({i, j}); it != memo.end()) return it->second;
    double best = std::numeric_limits<double>::infinity();
    if (i > 0) best = std::min(best, d(i - 1, j));
    if (j > 0) best = std::min(best, d(i, j - 1));
    if (i > 0 && j > 0) best = std::min(best, d(i - 1, j - 1));
    memo[{i, j}] = cost + best;
    return cost + best;
  };
  return d(a.size() - 1, b.size() - 1);
}

/// Index of the nearest point, ties to the lowest index.
inline std::size_t nearest(const std::vector<Vec2d>& points, const Vec2d& p) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if ((points[i] - p).squaredNorm() < (points[best] - p).squaredNorm()) best = i;
  }
  return best;
}

/// Least squares of y on [x1, x2, 1] through the 3x3 normal equations solved
/// by Cramer's rule.
inline std::array<double, 3> ols_normal_equations(const std::vector<double>& x1,
                                                  const std::vector<double>& x2,
                                                  const std::vector<double>& y) {
  double m[3][3] = {};
  double v[3] = {};
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r[3] = {x1[i], x2[i], 1.0};
    for (int p = 0; p < 3; ++p) {
      v[p] += r[p] * y[i];
      for (int q = 0; q < 3; ++q) m[p][q] += r[p] * r[q];
    }
  }
  auto det = [](double a[3][3]) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  const double d = det(m);
  std::array<double, 3> out{};
  for (int k = 0; k < 3; ++k) {
    double mk[3][3];
    for (int p = 0; p < 3; ++p) {
      for (int q = 0; q < 3; ++q) mk[p][q] = q == k ? v[p] : m[p][q];
    }
    out[static_cast<std::size_t>(k)] = det(mk) / d;
  }
  return out;
}

/// Words of `words` starting with `prefix`, sorted.
inline std::vector<std::string> prefix_scan(const std::vector<std::string>& words,
                                            const std::string& prefix) {
  std::vector<std::string> out;
  for (const auto& w : words) {
    if (w.compare(0, prefix.size(), prefix) == 0 && w.size() >= prefix.size()) out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dusk::oracle
