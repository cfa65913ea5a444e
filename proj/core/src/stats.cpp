#include "copro/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "copro/error.hpp"

namespace copro::stats {

std::string_view significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::vector<double> ranks_with_ties(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "ranks of an empty list");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share the mean of ranks i+1..j+1
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

namespace {

// Sum of (t^3 - t) over tie groups.
double tie_term(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    const double t = static_cast<double>(j - i);
    sum += t * t * t - t;
    i = j;
  }
  return sum;
}

TestResult finish(double statistic, double p, std::vector<std::size_t> n, std::string note) {
  p = std::clamp(p, 0.0, 1.0);
  return {statistic, p, std::move(n), std::move(note), std::string(significance_stars(p))};
}

// Number of arrangements with each value of U_a for sample sizes (m, n).
std::vector<double> mwu_null_counts(std::size_t m, std::size_t n) {
  // table[i][j] = distribution for sizes (i, j)
  std::vector<std::vector<std::vector<double>>> table(m + 1, std::vector<std::vector<double>>(n + 1));
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      auto& dist = table[i][j];
      dist.assign(i * j + 1, 0.0);
      if (i == 0 || j == 0) {
        dist[0] = 1.0;
        continue;
      }
      // Largest element belongs to a: it beats all j of b.
      const auto& with_a = table[i - 1][j];
      for (std::size_t u = 0; u < with_a.size(); ++u) dist[u + j] += with_a[u];
      const auto& with_b = table[i][j - 1];
      for (std::size_t u = 0; u < with_b.size(); ++u) dist[u] += with_b[u];
    }
  }
  return table[m][n];
}

}  // namespace

TestResult kruskal_wallis(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw Error(ErrorKind::TooFewGroups, "kruskal_wallis needs at least 2 groups");
  std::vector<double> pooled;
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) {
    if (g.empty()) throw Error(ErrorKind::EmptyInput, "kruskal_wallis group is empty");
    pooled.insert(pooled.end(), g.begin(), g.end());
    sizes.push_back(g.size());
  }
  const double n_total = static_cast<double>(pooled.size());
  if (pooled.size() < 3) throw Error(ErrorKind::EmptyInput, "kruskal_wallis needs N >= 3");
  const double df = static_cast<double>(groups.size() - 1);
  const double correction = 1.0 - tie_term(pooled) / (n_total * n_total * n_total - n_total);
  if (correction <= 0.0) {
    return finish(0.0, 1.0, std::move(sizes), "two-sided; all values equal, p = 1 by convention");
  }
  const std::vector<double> ranks = ranks_with_ties(pooled);
  double sum = 0.0;
  std::size_t offset = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double r = 0.0;
    for (std::size_t i = 0; i < sizes[g]; ++i) r += ranks[offset + i];
    offset += sizes[g];
    sum += r * r / static_cast<double>(sizes[g]);
  }
  double h = 12.0 / (n_total * (n_total + 1.0)) * sum - 3.0 * (n_total + 1.0);
  h = std::max(0.0, h / correction);
  return finish(h, chi_square_sf(h, df), std::move(sizes), "tie-corrected H, chi-square upper tail");
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, MwuMethod method) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptyInput, "mann_whitney_u needs two non-empty samples");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const double n_total = static_cast<double>(na + nb);
  const std::vector<double> ranks = ranks_with_ties(pooled);
  const double ra = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(na), 0.0);
  const double ua = ra - static_cast<double>(na) * (static_cast<double>(na) + 1.0) / 2.0;
  const double ub = static_cast<double>(na * nb) - ua;
  const double u = std::min(ua, ub);
  const double ties = tie_term(pooled);

  if (method == MwuMethod::Auto) method = (na + nb <= 20 && ties == 0.0) ? MwuMethod::Exact : MwuMethod::Normal;

  if (method == MwuMethod::Exact) {
    if (ties != 0.0) throw Error(ErrorKind::DomainError, "exact Mann-Whitney requires tie-free samples");
    const std::vector<double> counts = mwu_null_counts(na, nb);
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    double below = 0.0;
    const auto u_int = static_cast<std::size_t>(std::llround(u));
    for (std::size_t k = 0; k <= u_int; ++k) below += counts[k];
    return finish(u, std::min(1.0, 2.0 * below / total), {na, nb}, "two-sided exact null distribution");
  }

  const double mu = static_cast<double>(na * nb) / 2.0;
  const double var =
      static_cast<double>(na * nb) / 12.0 * ((n_total + 1.0) - ties / (n_total * (n_total - 1.0)));
  if (var <= 0.0) return finish(u, 1.0, {na, nb}, "two-sided; all values equal, p = 1 by convention");
  const double d = u - mu;
  const double cc = d > 0 ? 0.5 : (d < 0 ? -0.5 : 0.0);
  const double z = (d - cc) / std::sqrt(var);
  return finish(u, std::min(1.0, 2.0 * normal_sf(std::fabs(z))), {na, nb},
                "two-sided normal approximation, tie-corrected, continuity 0.5");
}

TestResult spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::LengthMismatch, "spearman_rho inputs differ in length");
  if (x.size() < 3) throw Error(ErrorKind::EmptyInput, "spearman_rho needs n >= 3");
  const std::vector<double> rx = ranks_with_ties(x);
  const std::vector<double> ry = ranks_with_ties(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::ConstantInput, "spearman_rho of a constant input");
  const double rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const std::size_t size = x.size();
  if (std::fabs(rho) >= 1.0 - 1e-12) {
    return finish(rho, 0.0, {size}, "two-sided; |rho| = 1, p = 0 by convention");
  }
  const double df = n - 2.0;
  const double t = rho * std::sqrt(df / (1.0 - rho * rho));
  return finish(rho, 2.0 * t_sf(std::fabs(t), df), {size}, "two-sided t approximation");
}

}  // namespace copro::stats
