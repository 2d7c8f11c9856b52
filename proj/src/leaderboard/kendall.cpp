#include "prefboard/leaderboard/kendall.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "prefboard/core/error.hpp"

namespace prefboard::leaderboard {

namespace {

int sign(double x) { return (x > 0.0) - (x < 0.0); }

/// C - D over all pairs.
long score(std::span<const double> a, std::span<const double> b, long* c = nullptr,
           long* d = nullptr) {
  long con = 0;
  long dis = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const int s = sign(a[i] - a[j]) * sign(b[i] - b[j]);
      con += s > 0;
      dis += s < 0;
    }
  }
  if (c) *c = con;
  if (d) *d = dis;
  return con - dis;
}

struct TieTerms {
  double pairs = 0.0;  // sum t(t-1)/2
  double v2 = 0.0;     // sum t(t-1)(t-2)
  double v5 = 0.0;     // sum t(t-1)(2t+5)
};

TieTerms tie_terms(std::span<const double> x) {
  std::map<double, double> counts;
  for (double v : x) counts[v] += 1.0;
  TieTerms t;
  for (const auto& [v, c] : counts) {
    if (c < 2.0) continue;
    t.pairs += c * (c - 1.0) / 2.0;
    t.v2 += c * (c - 1.0) * (c - 2.0);
    t.v5 += c * (c - 1.0) * (2.0 * c + 5.0);
  }
  return t;
}

}  // namespace

KendallResult kendall_tau(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("rankings differ in length");
  if (a.size() < 2) throw ValidationError("Kendall tau needs at least two items");
  const double n = static_cast<double>(a.size());
  KendallResult r;
  const long s = score(a, b, &r.concordant, &r.discordant);
  const auto ta = tie_terms(a);
  const auto tb = tie_terms(b);
  const double n0 = n * (n - 1.0) / 2.0;
  const double denom = std::sqrt((n0 - ta.pairs) * (n0 - tb.pairs));
  if (denom == 0.0) {
    r.tau_b = 0.0;
    r.p_value = 1.0;
    r.p_method = a.size() < 10 ? "exact" : "normal";
    return r;
  }
  r.tau_b = static_cast<double>(s) / denom;

  if (a.size() < 10) {
    r.p_method = "exact";
    std::vector<std::size_t> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> shuffled(b.size());
    long extreme = 0;
    long total = 0;
    do {
      for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = b[perm[i]];
      extreme += std::labs(score(a, shuffled)) >= std::labs(s);
      ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    r.p_value = static_cast<double>(extreme) / static_cast<double>(total);
    return r;
  }

  r.p_method = "normal";
  const double m = n * (n - 1.0);
  const double var = (m * (2.0 * n + 5.0) - ta.v5 - tb.v5) / 18.0 +
                     (2.0 * ta.pairs * tb.pairs) / m + ta.v2 * tb.v2 / (9.0 * m * (n - 2.0));
  const double z = static_cast<double>(s) / std::sqrt(var);
  r.p_value = std::erfc(std::abs(z) / std::sqrt(2.0));
  return r;
}

KendallResult kendall_tau(const std::map<std::string, int>& rank_a,
                          const std::map<std::string, int>& rank_b) {
  if (rank_a.size() != rank_b.size()) throw ValidationError("rankings cover different items");
  std::vector<double> a;
  std::vector<double> b;
  for (const auto& [item, r] : rank_a) {
    const auto it = rank_b.find(item);
    if (it == rank_b.end()) throw ValidationError("item " + item + " missing from second ranking");
    a.push_back(r);
    b.push_back(it->second);
  }
  return kendall_tau(a, b);
}

}  // namespace prefboard::leaderboard
