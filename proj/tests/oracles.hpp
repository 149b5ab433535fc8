#pragma once

// Reference computations used only by tests. Each one takes a different
// route from the library code it checks.

#include <cctype>
#include <cmath>
#include <sstream>
#include <optional>
#include <string>
#include <vector>

namespace qags::oracle {

using Tokens = std::vector<std::string>;

// Overlap by pairwise matching with a used-flag array (no hashing).
inline std::size_t multiset_overlap(const Tokens& a, const Tokens& b) {
  std::vector<bool> used(b.size(), false);
  std::size_t overlap = 0;
  for (const auto& x : a) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && b[j] == x) {
        used[j] = true;
        ++overlap;
        break;
      }
    }
  }
  return overlap;
}

// ASCII-only normalizer for hand-checked fixtures: lowercase, drop
// punctuation bytes, drop a/an/the.
inline Tokens ascii_normalize(const std::string& s) {
  std::string cleaned;
  for (unsigned char c : s) {
    if (std::ispunct(c)) continue;
    cleaned += static_cast<char>(std::tolower(c));
  }
  std::istringstream in(cleaned);
  Tokens out;
  for (std::string w; in >> w;) {
    if (w != "a" && w != "an" && w != "the") out.push_back(w);
  }
  return out;
}

// nullopt = no answer. Tokens must already be in normalized form.
inline double f1(const std::optional<Tokens>& a, const std::optional<Tokens>& b) {
  if (!a || !b) return (!a && !b) ? 1.0 : 0.0;
  if (a->empty() || b->empty()) return (a->empty() && b->empty()) ? 1.0 : 0.0;
  const auto o = multiset_overlap(*a, *b);
  if (o == 0) return 0.0;
  const double p = static_cast<double>(o) / static_cast<double>(a->size());
  const double r = static_cast<double>(o) / static_cast<double>(b->size());
  return 2.0 * p * r / (p + r);
}

inline double em(const std::optional<Tokens>& a, const std::optional<Tokens>& b) {
  if (!a || !b) return (!a && !b) ? 1.0 : 0.0;
  if (a->size() != b->size()) return 0.0;
  for (std::size_t i = 0; i < a->size(); ++i) {
    if ((*a)[i] != (*b)[i]) return 0.0;
  }
  return 1.0;
}

// Moment form: (E[xy] - E[x]E[y]) / sqrt(Var x * Var y).
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double vx = sxx / n - (sx / n) * (sx / n);
  const double vy = syy / n - (sy / n) * (sy / n);
  return cov / std::sqrt(vx * vy);
}

// Units are lists of binary values; units with < 2 values are not pairable.
// D_o from ordered within-unit pairs weighted 1/(m_u - 1); D_e from every
// ordered pair of pairable values in the whole dataset.
inline double krippendorff_alpha(const std::vector<std::vector<int>>& units) {
  std::vector<int> pooled;
  double disagree_within = 0.0;
  for (const auto& u : units) {
    if (u.size() < 2) continue;
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (i != j && u[i] != u[j]) d += 1.0;
      }
    }
    disagree_within += d / static_cast<double>(u.size() - 1);
    pooled.insert(pooled.end(), u.begin(), u.end());
  }
  const double n = static_cast<double>(pooled.size());
  double disagree_all = 0.0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    for (std::size_t j = 0; j < pooled.size(); ++j) {
      if (i != j && pooled[i] != pooled[j]) disagree_all += 1.0;
    }
  }
  const double observed = disagree_within / n;
  const double expected = disagree_all / (n * (n - 1.0));
  return 1.0 - observed / expected;
}

}  // namespace qags::oracle
