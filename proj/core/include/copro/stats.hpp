#pragma once

// Rank-based non-parametric tests and the p-value kernels they rely on.
// All tests are two-sided.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace copro::stats {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::vector<std::size_t> n;
  std::string method_note;
  std::string stars;
};

/// "***" for p < 0.001, "**" for p < 0.01, "*" for p < 0.05, else "".
std::string_view significance_stars(double p);

/// Average ranks (1-based) with ties sharing the mean of their positions.
/// Throws Error(EmptyInput).
std::vector<double> ranks_with_ties(std::span<const double> values);

/// Kruskal-Wallis H with tie correction; chi-square (k-1 df) p-value.
TestResult kruskal_wallis(std::span<const std::vector<double>> groups);

enum class MwuMethod { Auto, Exact, Normal };

/// U = min(U_a, U_b). Auto uses the exact null distribution when
/// n_a + n_b <= 20 without ties, otherwise the tie-corrected normal
/// approximation with continuity correction.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          MwuMethod method = MwuMethod::Auto);

/// Spearman rho with a t-approximation p-value (n - 2 df).
TestResult spearman_rho(std::span<const double> x, std::span<const double> y);

// Upper-tail probabilities.
double chi_square_sf(double x, double df);
double normal_sf(double z);
double t_sf(double t, double df);

/// Regularized lower incomplete gamma P(a, x) and its complement.
double gamma_p(double a, double x);
double gamma_q(double a, double x);
/// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);
/// Quantile of the standard normal.
double normal_quantile(double p);
double normal_cdf(double z);

}  // namespace copro::stats
