#pragma once

// Synthetic corpus generator with skewed productivity and per-academic
// collaboration rates, rank-coupled to productivity through a Gaussian
// copula. Used to show how publication-weighted incidence departs from the
// academic-weighted mean propensity.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "copro/classify.hpp"
#include "copro/corpus.hpp"

namespace copro::synth {

/// Portable random source: std::mt19937_64 (sequence fixed by the standard)
/// with hand-written transforms, so streams match across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in (0, 1).
  double uniform_open();
  /// Integer in [0, n). n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal (Box-Muller, one value per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

enum class ProductivityKind { Constant, Lognormal, Pareto };

struct ProductivitySpec {
  ProductivityKind kind = ProductivityKind::Lognormal;
  double value = 10.0;  // constant
  double mu = 1.0;      // lognormal
  double sigma = 1.0;
  double alpha = 1.5;  // pareto
  double x_min = 1.0;
  std::uint32_t max_publications = 2000;
};

/// Latent per-academic rate: Beta(a, b), or a fixed value for everyone.
struct RateSpec {
  double a = 1.0;
  double b = 1.0;
  std::optional<double> fixed;
};

struct SynthConfig {
  std::uint64_t seed = 1;
  int n_fields = 4;
  int sds_per_field = 2;
  int academics_per_field = 500;
  ProductivitySpec productivity;
  /// Indexed by Form.
  std::array<RateSpec, 4> rates = {RateSpec{9.0, 1.0, {}}, RateSpec{3.0, 2.0, {}}, RateSpec{2.0, 2.0, {}},
                                   RateSpec{1.0, 3.0, {}}};
  /// Rank coupling between productivity and each form's latent rate, indexed by Form.
  std::array<double, 4> correlation = {0.0, 0.0, 0.0, 0.0};
  double shared_pub_rate = 0.0;
  int n_universities = 10;
  int n_domestic_orgs = 5;
  int n_foreign_orgs = 10;
  int partners_per_university = 5;
  int first_year = 2006;
  int last_year = 2010;
  std::string domestic_country = "IT";

  /// Throws Error(BadConfig).
  void validate() const;

  /// Lognormal(1, 1) productivity over 10 fields x 1,000 academics.
  static SynthConfig skew_preset();
};

/// Reads a JSON config object. Unknown keys are rejected. Throws Error(BadConfig).
SynthConfig parse_synth_config(std::istream& in);
SynthConfig parse_synth_config_text(std::string_view text);

/// Reserved UDA holding the same-university co-authors that realise
/// intramural collaboration.
inline constexpr std::string_view kPartnerUda = "PTN";

struct LatentAcademic {
  std::string academic_id;
  std::string uda;
  std::uint32_t drawn_productivity = 0;
  std::array<double, 4> rate{};  // indexed by Form
};

struct SynthOutput {
  CorpusInputs inputs;
  std::vector<LatentAcademic> academics;  // field academics only, generation order
  std::vector<std::string> field_udas;
};

/// Deterministic for a given config.
SynthOutput generate(const SynthConfig& config);
Corpus generate_corpus(const SynthConfig& config);

/// Share of all publications held by the most productive `fraction` of academics.
double top_share(std::vector<std::uint32_t> productivity, double fraction);

struct DivergenceRow {
  Form form = Form::C;
  double mean_propensity = 0.0;
  double incidence = 0.0;
  double delta = 0.0;  // percentage points
  /// Sign of the population covariance between p and realised propensity.
  int cov_sign = 0;
  /// -100 * cov(p, propensity) / mean(p): the delta predicted for disjoint authorship.
  double predicted_delta = 0.0;
};

/// Pools all configured fields (the partner UDA excluded).
std::vector<DivergenceRow> divergence_experiment(const SynthConfig& config, std::span<const Form> forms);
std::vector<DivergenceRow> divergence_experiment(const Corpus& corpus, std::span<const std::string> field_udas,
                                                 std::span<const Form> forms);

}  // namespace copro::synth
