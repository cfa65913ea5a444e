#include "copro/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <iterator>
#include <numeric>

#include <nlohmann/json.hpp>

#include "copro/error.hpp"
#include "copro/indicators.hpp"
#include "copro/stats.hpp"

namespace copro::synth {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  return std::min<std::uint64_t>(n - 1, static_cast<std::uint64_t>(uniform() * static_cast<double>(n)));
}

double Rng::normal() {
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void SynthConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::BadConfig, what); };
  if (n_fields < 1 || n_fields > 999) fail("n_fields must be in [1, 999]");
  if (sds_per_field < 1 || sds_per_field > 99) fail("sds_per_field must be in [1, 99]");
  if (academics_per_field < 1) fail("academics_per_field must be positive");
  if (n_universities < 1) fail("n_universities must be positive");
  if (n_domestic_orgs < 0 || n_foreign_orgs < 0 || partners_per_university < 0) fail("negative organization count");
  if (first_year > last_year) fail("first_year after last_year");
  if (domestic_country.empty()) fail("empty domestic_country");
  if (!(shared_pub_rate >= 0.0 && shared_pub_rate <= 1.0)) fail("shared_pub_rate outside [0, 1]");
  const auto& pr = productivity;
  switch (pr.kind) {
    case ProductivityKind::Constant:
      if (!(pr.value >= 0.0)) fail("constant productivity must be >= 0");
      break;
    case ProductivityKind::Lognormal:
      if (!(pr.sigma > 0.0) || !std::isfinite(pr.mu)) fail("lognormal needs finite mu and sigma > 0");
      break;
    case ProductivityKind::Pareto:
      if (!(pr.alpha > 0.0) || !(pr.x_min > 0.0)) fail("pareto needs alpha > 0 and x_min > 0");
      break;
  }
  for (Form f : kAllForms) {
    const RateSpec& r = rates[static_cast<std::size_t>(f)];
    if (r.fixed) {
      if (!(*r.fixed >= 0.0 && *r.fixed <= 1.0)) fail(std::string(to_string(f)) + " fixed rate outside [0, 1]");
    } else if (!(r.a > 0.0) || !(r.b > 0.0)) {
      fail(std::string(to_string(f)) + " beta parameters must be positive");
    }
    const double rho = correlation[static_cast<std::size_t>(f)];
    if (!(rho >= -1.0 && rho <= 1.0)) fail(std::string(to_string(f)) + " correlation outside [-1, 1]");
  }
  const RateSpec& ci = rates[static_cast<std::size_t>(Form::CI)];
  const bool ci_possible = !ci.fixed || *ci.fixed > 0.0;
  if (ci_possible && partners_per_university == 0) fail("intramural rate > 0 needs partners_per_university >= 1");
  const RateSpec& ced = rates[static_cast<std::size_t>(Form::CED)];
  if ((!ced.fixed || *ced.fixed > 0.0) && n_universities + n_domestic_orgs < 2) {
    fail("extramural domestic rate > 0 needs a second domestic organization");
  }
  const RateSpec& cef = rates[static_cast<std::size_t>(Form::CEF)];
  if ((!cef.fixed || *cef.fixed > 0.0) && n_foreign_orgs == 0) {
    fail("extramural international rate > 0 needs n_foreign_orgs >= 1");
  }
}

SynthConfig SynthConfig::skew_preset() {
  SynthConfig c;
  c.n_fields = 10;
  c.academics_per_field = 1000;
  c.productivity.kind = ProductivityKind::Lognormal;
  c.productivity.mu = 1.0;
  c.productivity.sigma = 1.0;
  return c;
}

namespace {

using nlohmann::json;

double number(const json& j, const char* key) {
  if (!j.is_number()) throw Error(ErrorKind::BadConfig, std::string(key) + " must be a number");
  return j.get<double>();
}

long long integer(const json& j, const char* key) {
  if (!j.is_number_integer()) throw Error(ErrorKind::BadConfig, std::string(key) + " must be an integer");
  return j.get<long long>();
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const char* where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorKind::BadConfig, "unknown key '" + key + "' in " + where);
    }
  }
}

Form form_key(const std::string& key) {
  auto f = parse_form(key);
  if (!f) throw Error(ErrorKind::BadConfig, "unknown form '" + key + "'");
  return *f;
}

ProductivitySpec parse_productivity(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::BadConfig, "productivity must be an object");
  reject_unknown(j, {"kind", "value", "mu", "sigma", "alpha", "x_min", "max_publications"}, "productivity");
  ProductivitySpec p;
  if (!j.contains("kind") || !j["kind"].is_string()) throw Error(ErrorKind::BadConfig, "productivity.kind missing");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "constant") {
    p.kind = ProductivityKind::Constant;
  } else if (kind == "lognormal") {
    p.kind = ProductivityKind::Lognormal;
  } else if (kind == "pareto") {
    p.kind = ProductivityKind::Pareto;
  } else {
    throw Error(ErrorKind::BadConfig, "productivity.kind must be constant, lognormal or pareto");
  }
  if (j.contains("value")) p.value = number(j["value"], "value");
  if (j.contains("mu")) p.mu = number(j["mu"], "mu");
  if (j.contains("sigma")) p.sigma = number(j["sigma"], "sigma");
  if (j.contains("alpha")) p.alpha = number(j["alpha"], "alpha");
  if (j.contains("x_min")) p.x_min = number(j["x_min"], "x_min");
  if (j.contains("max_publications")) {
    const auto m = integer(j["max_publications"], "max_publications");
    if (m < 0 || m > 1'000'000) throw Error(ErrorKind::BadConfig, "max_publications out of range");
    p.max_publications = static_cast<std::uint32_t>(m);
  }
  return p;
}

SynthConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::BadConfig, "config must be a JSON object");
  reject_unknown(j,
                 {"seed", "n_fields", "sds_per_field", "academics_per_field", "productivity", "propensity",
                  "productivity_propensity_correlation", "shared_pub_rate", "n_universities", "n_domestic_orgs",
                  "n_foreign_orgs", "partners_per_university", "first_year", "last_year", "domestic_country"},
                 "config");
  SynthConfig c;
  auto set_int = [&](const char* key, int& field) {
    if (j.contains(key)) field = static_cast<int>(integer(j[key], key));
  };
  if (j.contains("seed")) {
    const auto s = integer(j["seed"], "seed");
    if (s < 0) throw Error(ErrorKind::BadConfig, "seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  set_int("n_fields", c.n_fields);
  set_int("sds_per_field", c.sds_per_field);
  set_int("academics_per_field", c.academics_per_field);
  set_int("n_universities", c.n_universities);
  set_int("n_domestic_orgs", c.n_domestic_orgs);
  set_int("n_foreign_orgs", c.n_foreign_orgs);
  set_int("partners_per_university", c.partners_per_university);
  set_int("first_year", c.first_year);
  set_int("last_year", c.last_year);
  if (j.contains("productivity")) c.productivity = parse_productivity(j["productivity"]);
  if (j.contains("shared_pub_rate")) c.shared_pub_rate = number(j["shared_pub_rate"], "shared_pub_rate");
  if (j.contains("domestic_country")) {
    if (!j["domestic_country"].is_string()) throw Error(ErrorKind::BadConfig, "domestic_country must be a string");
    c.domestic_country = j["domestic_country"].get<std::string>();
  }
  if (j.contains("propensity")) {
    const json& prop = j["propensity"];
    if (!prop.is_object()) throw Error(ErrorKind::BadConfig, "propensity must be an object");
    for (const auto& [key, spec] : prop.items()) {
      if (!spec.is_object()) throw Error(ErrorKind::BadConfig, "propensity." + key + " must be an object");
      reject_unknown(spec, {"a", "b", "fixed"}, "propensity entry");
      RateSpec r;
      if (spec.contains("fixed")) {
        r.fixed = number(spec["fixed"], "fixed");
      } else {
        if (!spec.contains("a") || !spec.contains("b")) {
          throw Error(ErrorKind::BadConfig, "propensity." + key + " needs a and b, or fixed");
        }
        r.a = number(spec["a"], "a");
        r.b = number(spec["b"], "b");
      }
      c.rates[static_cast<std::size_t>(form_key(key))] = r;
    }
  }
  if (j.contains("productivity_propensity_correlation")) {
    const json& corr = j["productivity_propensity_correlation"];
    if (corr.is_number()) {
      c.correlation[static_cast<std::size_t>(Form::CEF)] = corr.get<double>();
    } else if (corr.is_object()) {
      for (const auto& [key, value] : corr.items()) {
        c.correlation[static_cast<std::size_t>(form_key(key))] = number(value, "correlation");
      }
    } else {
      throw Error(ErrorKind::BadConfig, "productivity_propensity_correlation must be a number or an object");
    }
  }
  c.validate();
  return c;
}

std::string code(const char* prefix, int n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, n);
  return buf;
}

// Inverse of the Beta(a, b) CDF by safeguarded Newton.
double beta_quantile(double a, double b, double u) {
  double lo = 0.0;
  double hi = 1.0;
  double x = a / (a + b);
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  for (int i = 0; i < 100; ++i) {
    const double f = stats::beta_inc(a, b, x) - u;
    if (std::fabs(f) < 1e-13) break;
    (f > 0 ? hi : lo) = x;
    const double pdf = std::exp(log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
    double next = x - f / pdf;
    if (!(pdf > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo < 1e-15) break;
    x = next;
  }
  return x;
}

std::uint32_t draw_productivity(const ProductivitySpec& spec, double z) {
  double x = 0.0;
  switch (spec.kind) {
    case ProductivityKind::Constant:
      x = spec.value;
      break;
    case ProductivityKind::Lognormal:
      x = std::exp(spec.mu + spec.sigma * z);
      break;
    case ProductivityKind::Pareto:
      x = spec.x_min * std::pow(stats::normal_sf(z), -1.0 / spec.alpha);
      break;
  }
  if (!std::isfinite(x)) x = spec.max_publications;
  const double rounded = std::round(std::clamp(x, 0.0, static_cast<double>(spec.max_publications)));
  return static_cast<std::uint32_t>(rounded);
}

double draw_rate(const RateSpec& spec, double z) {
  if (spec.fixed) return *spec.fixed;
  const double u = std::clamp(stats::normal_cdf(z), 1e-15, 1.0 - 1e-15);
  return beta_quantile(spec.a, spec.b, u);
}

constexpr const char* kForeignCountries[] = {"US", "DE", "FR", "GB", "ES", "NL", "CH", "JP", "CN", "CA"};

}  // namespace

SynthConfig parse_synth_config(std::istream& in) {
  const std::string text(std::istreambuf_iterator<char>(in), {});
  return parse_synth_config_text(text);
}

SynthConfig parse_synth_config_text(std::string_view text) {
  const auto j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::BadConfig, "config is not valid JSON");
  return config_from_json(j);
}

SynthOutput generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  SynthOutput out;
  CorpusInputs& in = out.inputs;
  in.domestic_country = config.domestic_country;

  std::vector<std::string> universities;
  std::vector<std::string> domestic_orgs;  // universities + research organizations
  std::vector<std::string> foreign_orgs;
  for (int u = 1; u <= config.n_universities; ++u) {
    universities.push_back(code("UNI", u, 3));
    in.organizations.push_back({universities.back(), config.domestic_country, true});
    domestic_orgs.push_back(universities.back());
  }
  for (int r = 1; r <= config.n_domestic_orgs; ++r) {
    in.organizations.push_back({code("RES", r, 3), config.domestic_country, false});
    domestic_orgs.push_back(in.organizations.back().org_id);
  }
  for (int f = 1; f <= config.n_foreign_orgs; ++f) {
    std::string country = kForeignCountries[(f - 1) % std::size(kForeignCountries)];
    if (country == config.domestic_country) country = "ZZ";
    in.organizations.push_back({code("FOR", f, 3), country, false});
    foreign_orgs.push_back(in.organizations.back().org_id);
  }

  // Partner pool: identified colleagues at each university, outside the fields.
  std::vector<std::vector<std::string>> partners(universities.size());
  if (config.partners_per_university > 0) {
    const std::string sds = std::string(kPartnerUda) + "/01";
    in.taxonomy.add(sds, std::string(kPartnerUda));
    for (std::size_t u = 0; u < universities.size(); ++u) {
      for (int k = 1; k <= config.partners_per_university; ++k) {
        partners[u].push_back(universities[u] + "-" + code("P", k, 4));
        in.academics.push_back({partners[u].back(), universities[u], sds, {}});
      }
    }
  }

  struct Member {
    std::size_t university;
    std::size_t field;
  };
  std::vector<Member> members;
  std::vector<std::vector<std::size_t>> field_members(static_cast<std::size_t>(config.n_fields));
  for (int f = 1; f <= config.n_fields; ++f) {
    const std::string uda = code("F", f, 2);
    out.field_udas.push_back(uda);
    for (int s = 1; s <= config.sds_per_field; ++s) in.taxonomy.add(uda + code("/", s, 2), uda);
    for (int i = 0; i < config.academics_per_field; ++i) {
      const std::size_t uni = rng.below(universities.size());
      const double z_p = rng.normal();
      LatentAcademic latent;
      latent.academic_id = uda + "-" + code("A", i + 1, 5);
      latent.uda = uda;
      latent.drawn_productivity = draw_productivity(config.productivity, z_p);
      for (Form form : kAllForms) {
        const auto k = static_cast<std::size_t>(form);
        const double rho = config.correlation[k];
        const double z = rho * z_p + std::sqrt(std::max(0.0, 1.0 - rho * rho)) * rng.normal();
        latent.rate[k] = draw_rate(config.rates[k], z);
      }
      const std::string sds = uda + code("/", i % config.sds_per_field + 1, 2);
      in.academics.push_back({latent.academic_id, universities[uni], sds, {}});
      field_members[static_cast<std::size_t>(f - 1)].push_back(members.size());
      members.push_back({uni, static_cast<std::size_t>(f - 1)});
      out.academics.push_back(std::move(latent));
    }
  }

  std::size_t pub_counter = 0;
  const int year_span = config.last_year - config.first_year + 1;
  for (std::size_t m = 0; m < members.size(); ++m) {
    const LatentAcademic& a = out.academics[m];
    const std::size_t home = members[m].university;
    const auto& rate = a.rate;
    for (std::uint32_t k = 0; k < a.drawn_productivity; ++k) {
      Publication pub;
      pub.pub_id = code("S", static_cast<int>(++pub_counter), 8);
      pub.year = config.first_year + static_cast<int>(rng.below(static_cast<std::uint64_t>(year_span)));
      const bool ci = rng.uniform() < rate[1];
      const bool ced = rng.uniform() < rate[2];
      const bool cef = rng.uniform() < rate[3];
      const bool collaborative = rng.uniform() < rate[0] || ci || ced || cef;

      pub.academic_authors.push_back(a.academic_id);
      pub.org_addresses.push_back(universities[home]);
      if (ci) {
        const auto& pool = partners[home];
        pub.academic_authors.push_back(pool[rng.below(pool.size())]);
      }
      if (collaborative && config.shared_pub_rate > 0.0 && rng.uniform() < config.shared_pub_rate) {
        const auto& peers = field_members[members[m].field];
        for (int attempt = 0; attempt < 8 && peers.size() > 1; ++attempt) {
          const std::size_t b = peers[rng.below(peers.size())];
          if (b == m || (!ci && members[b].university == home)) continue;
          pub.academic_authors.push_back(out.academics[b].academic_id);
          if (ced && members[b].university != home) pub.org_addresses.push_back(universities[members[b].university]);
          break;
        }
      }
      if (ced && pub.org_addresses.size() == 1) {
        std::size_t o;
        do {
          o = rng.below(domestic_orgs.size());
        } while (domestic_orgs[o] == universities[home]);
        pub.org_addresses.push_back(domestic_orgs[o]);
      }
      if (cef) pub.org_addresses.push_back(foreign_orgs[rng.below(foreign_orgs.size())]);

      int n_authors = static_cast<int>(pub.academic_authors.size());
      if (collaborative) {
        n_authors += static_cast<int>(ced) + static_cast<int>(cef) + static_cast<int>(rng.below(3));
        n_authors = std::max(n_authors, 2);
      }
      pub.n_authors = n_authors;
      in.publications.push_back(std::move(pub));
    }
  }
  return out;
}

Corpus generate_corpus(const SynthConfig& config) { return build_corpus(generate(config).inputs); }

double top_share(std::vector<std::uint32_t> productivity, double fraction) {
  if (productivity.empty()) throw Error(ErrorKind::EmptyInput, "top_share of an empty population");
  std::sort(productivity.begin(), productivity.end(), std::greater<>());
  const double total = std::accumulate(productivity.begin(), productivity.end(), 0.0);
  if (total == 0.0) return 0.0;
  const auto top = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(productivity.size())));
  const double held = std::accumulate(productivity.begin(), productivity.begin() + static_cast<std::ptrdiff_t>(top), 0.0);
  return held / total;
}

std::vector<DivergenceRow> divergence_experiment(const Corpus& corpus, std::span<const std::string> field_udas,
                                                 std::span<const Form> forms) {
  const ProfileTable profiles = build_profiles(corpus);
  std::vector<AcademicIndex> members;
  for (const auto& uda : field_udas) {
    auto span = corpus.academics_in_uda(uda);
    members.insert(members.end(), span.begin(), span.end());
  }
  std::sort(members.begin(), members.end());

  std::vector<DivergenceRow> rows;
  for (Form form : forms) {
    const ComparisonRow cmp = compare(corpus, profiles, members, form, "pooled");
    double n = 0.0, sum_p = 0.0, sum_r = 0.0, sum_pr = 0.0;
    for (AcademicIndex a : members) {
      const CollaborationProfile& row = profiles[a];
      if (row.p == 0) continue;
      const double r = static_cast<double>(row.count(form)) / row.p;
      n += 1.0;
      sum_p += row.p;
      sum_r += r;
      sum_pr += row.p * r;
    }
    const double mean_p = sum_p / n;
    const double cov = sum_pr / n - mean_p * (sum_r / n);
    DivergenceRow out;
    out.form = form;
    out.mean_propensity = cmp.mean_propensity;
    out.incidence = cmp.incidence;
    out.delta = cmp.delta;
    out.cov_sign = cov > 0 ? 1 : (cov < 0 ? -1 : 0);
    out.predicted_delta = -100.0 * cov / mean_p;
    rows.push_back(out);
  }
  return rows;
}

std::vector<DivergenceRow> divergence_experiment(const SynthConfig& config, std::span<const Form> forms) {
  SynthOutput generated = generate(config);
  const Corpus corpus = build_corpus(std::move(generated.inputs));
  return divergence_experiment(corpus, generated.field_udas, forms);
}

}  // namespace copro::synth
