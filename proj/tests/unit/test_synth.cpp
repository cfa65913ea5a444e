#include <doctest.h>

#include <cmath>
#include <sstream>

#include "copro/error.hpp"
#include "copro/indicators.hpp"
#include "copro/report.hpp"
#include "copro/synth.hpp"

using namespace copro;
using namespace copro::synth;

namespace {

std::string serialize(const CorpusInputs& in) {
  std::ostringstream out;
  write_publications(out, in.publications);
  write_academics(out, in.academics);
  write_organizations(out, in.organizations);
  write_taxonomy(out, in.taxonomy);
  return out.str();
}

bool bad_config(const SynthConfig& c) {
  try {
    c.validate();
  } catch (const Error& e) {
    return e.kind() == ErrorKind::BadConfig;
  }
  return false;
}

bool bad_text(std::string_view text) {
  try {
    parse_synth_config_text(text);
  } catch (const Error& e) {
    return e.kind() == ErrorKind::BadConfig;
  }
  return false;
}

const DivergenceRow& row_for(const std::vector<DivergenceRow>& rows, Form f) {
  for (const auto& r : rows) {
    if (r.form == f) return r;
  }
  throw std::logic_error("form missing");
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("rng is reproducible and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto k = a.below(7);
    CHECK(k == b.below(7));
    CHECK(k < 7);
  }
  double sum = 0.0, sq = 0.0;
  Rng n(3);
  for (int i = 0; i < 100000; ++i) {
    const double z = n.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::fabs(sum / 100000) < 0.02);
  CHECK(std::fabs(sq / 100000 - 1.0) < 0.02);
}

TEST_CASE("same seed gives a byte-identical corpus") {
  SynthConfig c;
  c.academics_per_field = 120;
  c.shared_pub_rate = 0.2;
  c.seed = 2024;
  const std::string first = serialize(generate(c).inputs);
  CHECK(first == serialize(generate(c).inputs));
  c.seed = 2025;
  CHECK(first != serialize(generate(c).inputs));
}

TEST_CASE("generated corpora always validate") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    SynthConfig c;
    c.seed = seed;
    c.n_fields = 1 + static_cast<int>(seed % 4);
    c.sds_per_field = 1 + static_cast<int>(seed % 3);
    c.academics_per_field = 40;
    c.shared_pub_rate = (seed % 5) / 5.0;
    c.productivity.kind = static_cast<ProductivityKind>(seed % 3);
    c.correlation = {0.0, seed % 2 ? -0.7 : 0.7, 0.3, seed % 3 ? 0.9 : -0.9};
    const SynthOutput out = generate(c);
    CHECK_NOTHROW(build_corpus(out.inputs));
    CHECK(out.academics.size() == static_cast<std::size_t>(c.n_fields * c.academics_per_field));
    CHECK(out.field_udas.size() == static_cast<std::size_t>(c.n_fields));
    for (const auto& p : out.inputs.publications) {
      CHECK(p.year >= c.first_year);
      CHECK(p.year <= c.last_year);
    }
  }
}

TEST_CASE("flags realise the configured rate") {
  SynthConfig c;
  c.n_fields = 1;
  c.academics_per_field = 4000;
  c.productivity.kind = ProductivityKind::Constant;
  c.productivity.value = 10;
  c.rates[static_cast<std::size_t>(Form::CEF)] = RateSpec{1.0, 1.0, 0.3};
  const Corpus corpus = generate_corpus(c);
  const auto inc = incidence(corpus, FieldScope::uda("F01"), Form::CEF);
  CHECK(inc.n_pubs_union == 40000);
  // Binomial sd is about 0.0023.
  CHECK(std::fabs(inc.incidence - 0.3) < 0.012);

  const ProfileTable profiles = build_profiles(corpus);
  CHECK(std::fabs(field_summary(corpus, profiles, FieldScope::uda("F01"), Form::CEF).mean - 0.3) < 0.012);
}

TEST_CASE("skew preset concentrates output") {
  const SynthOutput out = generate(SynthConfig::skew_preset());
  std::vector<std::uint32_t> p;
  for (const auto& a : out.academics) p.push_back(a.drawn_productivity);
  CHECK(p.size() == 10000);
  CHECK(top_share(p, 0.29) >= 0.60);
  CHECK(top_share({1, 1, 1, 1}, 0.5) == doctest::Approx(0.5));
  CHECK(top_share({10, 0, 0, 0}, 0.25) == doctest::Approx(1.0));
}

TEST_CASE("divergence direction follows the covariance") {
  const std::array<Form, 4> forms = kAllForms;

  SUBCASE("no coupling, no divergence") {
    SynthConfig c = SynthConfig::skew_preset();
    const auto rows = divergence_experiment(c, forms);
    for (const auto& r : rows) CHECK(std::fabs(r.delta) < 1.0);
  }
  SUBCASE("positive coupling on CEF") {
    SynthConfig c = SynthConfig::skew_preset();
    c.correlation[static_cast<std::size_t>(Form::CEF)] = 0.8;
    const auto& r = row_for(divergence_experiment(c, forms), Form::CEF);
    CHECK(r.delta < 0.0);
    CHECK(r.cov_sign == 1);
  }
  SUBCASE("negative coupling on CI") {
    SynthConfig c = SynthConfig::skew_preset();
    c.correlation[static_cast<std::size_t>(Form::CI)] = -0.8;
    const auto& r = row_for(divergence_experiment(c, forms), Form::CI);
    CHECK(r.delta > 0.0);
    CHECK(r.cov_sign == -1);
  }
  SUBCASE("disjoint authorship matches the covariance identity") {
    SynthConfig c = SynthConfig::skew_preset();
    c.correlation = {0.5, -0.6, 0.3, 0.8};
    for (const auto& r : divergence_experiment(c, forms)) {
      CHECK(std::fabs(r.delta - r.predicted_delta) < 1e-9);
      CHECK(r.delta == doctest::Approx(100.0 * (r.mean_propensity - r.incidence)));
    }
  }
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(SynthConfig{}.validate());
  CHECK_NOTHROW(SynthConfig::skew_preset().validate());
  auto with = [](auto edit) {
    SynthConfig c;
    edit(c);
    return c;
  };
  CHECK(bad_config(with([](SynthConfig& c) { c.n_fields = 0; })));
  CHECK(bad_config(with([](SynthConfig& c) { c.academics_per_field = 0; })));
  CHECK(bad_config(with([](SynthConfig& c) { c.shared_pub_rate = 1.5; })));
  CHECK(bad_config(with([](SynthConfig& c) { c.first_year = 2011; })));
  CHECK(bad_config(with([](SynthConfig& c) { c.correlation[3] = 1.2; })));
  CHECK(bad_config(with([](SynthConfig& c) { c.rates[1] = RateSpec{0.0, 1.0, {}}; })));
  CHECK(bad_config(with([](SynthConfig& c) { c.rates[3] = RateSpec{1.0, 1.0, 1.5}; })));
  CHECK(bad_config(with([](SynthConfig& c) { c.n_foreign_orgs = 0; })));
  CHECK(bad_config(with([](SynthConfig& c) { c.partners_per_university = 0; })));
  CHECK(bad_config(with([](SynthConfig& c) {
    c.productivity.kind = ProductivityKind::Lognormal;
    c.productivity.sigma = 0.0;
  })));
  CHECK_FALSE(bad_config(with([](SynthConfig& c) {
    c.n_foreign_orgs = 0;
    c.rates[3] = RateSpec{1.0, 1.0, 0.0};
  })));
}

TEST_CASE("config parsing") {
  const SynthConfig c = parse_synth_config_text(R"({
    "seed": 7, "n_fields": 3, "academics_per_field": 50,
    "productivity": {"kind": "pareto", "alpha": 2.0, "x_min": 2},
    "propensity": {"CEF": {"fixed": 0.25}, "CI": {"a": 2, "b": 5}},
    "productivity_propensity_correlation": 0.8,
    "shared_pub_rate": 0.1
  })");
  CHECK(c.seed == 7);
  CHECK(c.n_fields == 3);
  CHECK(c.academics_per_field == 50);
  CHECK(c.productivity.kind == ProductivityKind::Pareto);
  CHECK(c.productivity.alpha == 2.0);
  CHECK(c.rates[3].fixed == 0.25);
  CHECK(c.rates[1].a == 2.0);
  CHECK(c.rates[1].b == 5.0);
  CHECK(c.correlation[3] == 0.8);
  CHECK(c.correlation[1] == 0.0);
  CHECK(c.shared_pub_rate == 0.1);

  const SynthConfig d = parse_synth_config_text(R"({"productivity_propensity_correlation": {"CI": -0.8}})");
  CHECK(d.correlation[1] == -0.8);
  CHECK(d.correlation[3] == 0.0);

  CHECK(bad_text("{"));
  CHECK(bad_text("[]"));
  CHECK(bad_text(R"({"sede": 1})"));
  CHECK(bad_text(R"({"n_fields": "many"})"));
  CHECK(bad_text(R"({"productivity": {"kind": "weibull"}})"));
  CHECK(bad_text(R"({"propensity": {"CX": {"fixed": 0.1}}})"));
  CHECK(bad_text(R"({"propensity": {"CI": {"a": 1}}})"));
  CHECK(bad_text(R"({"shared_pub_rate": 2})"));
}

}  // TEST_SUITE
