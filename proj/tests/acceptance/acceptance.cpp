// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "cli.hpp"
#include "copro/correlation.hpp"
#include "copro/indicators.hpp"
#include "copro/ingest.hpp"
#include "copro/report.hpp"
#include "copro/stats.hpp"
#include "copro/synth.hpp"
#include "copro/worked_example.hpp"
#include "support/random_corpus.hpp"
#include "support/special_oracles.hpp"

using namespace copro;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    } else if (!ok) {
      detail += "; " + what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string one_decimal(double fraction) { return format_percent(fraction); }

// 1
Outcome worked_example() {
  Outcome o;
  const auto t0 = Clock::now();
  const Corpus corpus = build_corpus(two_researcher_example());
  const ProfileTable profiles = build_profiles(corpus);
  const auto scope = FieldScope::uda(kExampleUda);
  const double alpha = propensities(profiles.at(corpus, kExampleAlpha)).cef;
  const double beta = propensities(profiles.at(corpus, kExampleBeta)).cef;
  const auto summary = field_summary(corpus, profiles, scope, Form::CEF);
  const auto inc = incidence(corpus, scope, Form::CEF);
  const double elapsed = seconds_since(t0);
  o.require(one_decimal(alpha) == "17.4", "alpha CEF " + one_decimal(alpha));
  o.require(one_decimal(beta) == "23.1", "beta CEF " + one_decimal(beta));
  o.require(one_decimal(summary.mean) == "20.2", "mean " + one_decimal(summary.mean));
  o.require(inc.n_pubs_union == 28, "union " + std::to_string(inc.n_pubs_union));
  o.require(inc.n_pubs_with_form == 4, "international " + std::to_string(inc.n_pubs_with_form));
  o.require(one_decimal(inc.incidence) == "14.3", "incidence " + one_decimal(inc.incidence));
  o.require(elapsed < 1.0, "runtime " + fmt("%.3f s", elapsed));
  if (o.pass) {
    o.detail = "CEF 17.4 / 23.1, mean 20.2, union 28, international 4, incidence 14.3 in " + fmt("%.4f s", elapsed);
  }
  return o;
}

// 2 and 3 share the corpora.
struct OracleRun {
  Outcome equivalence;
  Outcome bounds;
};

OracleRun oracle_and_bounds() {
  OracleRun r;
  std::mt19937_64 rng(20240101);
  std::size_t mismatches = 0, violations = 0, pairs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const CorpusInputs in = testing::random_corpus(rng);
    const auto expected = testing::oracle_profiles(in);
    const Corpus corpus = build_corpus(in);
    const ProfileTable profiles = build_profiles(corpus);
    for (const auto& row : profiles) {
      ++pairs;
      if (!(row == expected.at(row.academic_id))) ++mismatches;
      if (!(row.cip <= row.cp && row.cedp <= row.cp && row.cefp <= row.cp && row.cp <= row.p)) ++violations;
      if (row.p == 0) continue;
      const auto s = propensities(row);
      const bool ordered = s.ci <= s.c && s.ced <= s.c && s.cef <= s.c && s.c <= 1.0 && s.ci >= 0.0 &&
                           s.ced >= 0.0 && s.cef >= 0.0;
      if (!ordered) ++violations;
    }
    for (const auto& pub : in.publications) {
      if (pub.n_authors != 1) continue;
      for (const auto& a : pub.academic_authors) {
        if (!(classify_for(corpus, pub.pub_id, a) == PubForms{})) ++violations;
      }
    }
  }

  // Single author with a domestic and a foreign address.
  CorpusInputs solo;
  solo.taxonomy.add("X/01", "X");
  solo.organizations = {{"uniX", "IT", true}, {"orgY", "US", false}};
  solo.academics = {{"a", "uniX", "X/01", {}}};
  solo.publications = {{"p", 2008, 1, {"a"}, {"uniX", "orgY"}}};
  const Corpus sc = build_corpus(solo);
  const bool footnote_case = classify_for(sc, "p", "a") == PubForms{};

  r.equivalence.require(mismatches == 0, std::to_string(mismatches) + " mismatching profiles");
  if (r.equivalence.pass) {
    r.equivalence.detail = "1000 corpora, " + std::to_string(pairs) + " profiles identical to the brute-force recount";
  }
  r.bounds.require(violations == 0, std::to_string(violations) + " bound violations");
  r.bounds.require(footnote_case, "single-author multi-address publication flagged");
  if (r.bounds.pass) r.bounds.detail = "0 violations; single-author multi-address publication sets no flag";
  return r;
}

// 4
Outcome disjoint_identity() {
  Outcome o;
  std::mt19937_64 rng(77);
  double worst_weighted = 0.0, worst_delta = 0.0;
  int corpora = 0;
  while (corpora < 200) {
    const Corpus corpus = build_corpus(testing::random_corpus(rng, {.disjoint = true}));
    const auto members = field_members(corpus, FieldScope::all());
    if (union_publications(corpus, members).empty()) continue;
    ++corpora;
    const ProfileTable profiles = build_profiles(corpus);
    for (Form f : kAllForms) {
      double sp = 0.0, spr = 0.0, sr = 0.0, n = 0.0;
      std::vector<std::pair<double, double>> pr;
      for (auto a : members) {
        const auto& row = profiles[a];
        if (row.p == 0) continue;
        const double r = static_cast<double>(row.count(f)) / row.p;
        pr.emplace_back(row.p, r);
        sp += row.p;
        spr += row.p * r;
        sr += r;
        n += 1.0;
      }
      const double mp = sp / n, mr = sr / n;
      double cov = 0.0;
      for (const auto& [p, r] : pr) cov += (p - mp) * (r - mr);
      cov /= n;
      const auto row = compare(corpus, profiles, members, f, "T");
      worst_weighted = std::max(worst_weighted, std::fabs(row.incidence - spr / sp));
      worst_delta = std::max(worst_delta, std::fabs(row.delta - (-100.0 * cov / mp)));
    }
  }
  o.require(worst_weighted < 1e-12, "weighted mean gap " + fmt("%.3g", worst_weighted));
  o.require(worst_delta < 1e-9, "delta gap " + fmt("%.3g", worst_delta));
  if (o.pass) {
    o.detail = "200 corpora, max |incidence - weighted mean| " + fmt("%.2g", worst_weighted) +
               ", max delta gap " + fmt("%.2g", worst_delta);
  }
  return o;
}

// 5
Outcome stats_kernel() {
  using namespace copro::stats;
  Outcome o;
  const std::vector<std::vector<double>> groups = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  const auto kw = kruskal_wallis(groups);
  o.require(std::fabs(kw.statistic - 7.2) < 1e-12 && std::fabs(kw.p_value - 0.027324) < 1e-5,
            "Kruskal-Wallis " + fmt("%.6f", kw.p_value));
  const auto mw = mann_whitney_u(std::vector<double>{1, 2}, std::vector<double>{3, 4});
  o.require(std::fabs(mw.p_value - 1.0 / 3.0) < 1e-9, "Mann-Whitney " + fmt("%.9f", mw.p_value));
  const auto sp = spearman_rho(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 1, 3, 4});
  o.require(std::fabs(sp.statistic - 0.9487) < 1e-4, "Spearman " + fmt("%.6f", sp.statistic));

  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = 0.5 * i, df = 1.0 + (i * 7) % 30;
    const double z = -8.0 + 16.0 * i / 99.0;
    const double t = -10.0 + 20.0 * i / 99.0, tdf = 1.0 + (i * 11) % 50;
    worst = std::max(worst, std::fabs(chi_square_sf(x, df) - static_cast<double>(testing::chi_square_sf_series(x, df))));
    worst = std::max(worst, std::fabs(normal_sf(z) - static_cast<double>(testing::normal_sf_series(z))));
    worst = std::max(worst, std::fabs(t_sf(t, tdf) - static_cast<double>(testing::t_sf_quadrature(t, tdf))));
  }
  o.require(worst < 1e-8, "kernel error " + fmt("%.3g", worst));

  std::mt19937_64 rng(5);
  int broken = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<double>> g(3), h(3);
    for (std::size_t k = 0; k < 3; ++k) {
      g[k].resize(5 + rng() % 20);
      for (double& v : g[k]) v = static_cast<double>(rng() % 25) - 12.0;
      for (double v : g[k]) h[k].push_back(v * v * v);
    }
    const auto a = kruskal_wallis(g), b = kruskal_wallis(h);
    const auto c = mann_whitney_u(g[0], g[1]), d = mann_whitney_u(h[0], h[1]);
    const std::size_t n = std::min(g[0].size(), g[2].size());
    const std::vector<double> x(g[0].begin(), g[0].begin() + static_cast<std::ptrdiff_t>(n));
    const std::vector<double> y(g[2].begin(), g[2].begin() + static_cast<std::ptrdiff_t>(n));
    const std::vector<double> x3(h[0].begin(), h[0].begin() + static_cast<std::ptrdiff_t>(n));
    const std::vector<double> y3(h[2].begin(), h[2].begin() + static_cast<std::ptrdiff_t>(n));
    const auto e = spearman_rho(x, y), f = spearman_rho(x3, y3);
    if (a.statistic != b.statistic || a.p_value != b.p_value || a.stars != b.stars) ++broken;
    if (c.statistic != d.statistic || c.p_value != d.p_value || c.stars != d.stars) ++broken;
    if (e.statistic != f.statistic || e.p_value != f.p_value || e.stars != f.stars) ++broken;
  }
  o.require(broken == 0, std::to_string(broken) + " transform-sensitive results");
  if (o.pass) {
    o.detail = "H 7.2 p " + fmt("%.6f", kw.p_value) + ", MWU p " + fmt("%.6f", mw.p_value) + ", rho " +
               fmt("%.4f", sp.statistic) + ", kernel max error " + fmt("%.2g", worst) + ", x^3 invariance exact";
  }
  return o;
}

// 6
Outcome divergence_direction() {
  Outcome o;
  int cef_ok = 0, ci_ok = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    synth::SynthConfig cef = synth::SynthConfig::skew_preset();
    cef.seed = seed;
    cef.correlation[static_cast<std::size_t>(Form::CEF)] = 0.8;
    const std::array<Form, 1> f_cef = {Form::CEF};
    if (synth::divergence_experiment(cef, f_cef).at(0).delta < 0.0) ++cef_ok;

    synth::SynthConfig ci = synth::SynthConfig::skew_preset();
    ci.seed = seed;
    ci.correlation[static_cast<std::size_t>(Form::CI)] = -0.8;
    const std::array<Form, 1> f_ci = {Form::CI};
    if (synth::divergence_experiment(ci, f_ci).at(0).delta > 0.0) ++ci_ok;
  }
  o.require(cef_ok >= 19, "CEF negative in " + std::to_string(cef_ok) + "/20");
  o.require(ci_ok >= 19, "CI positive in " + std::to_string(ci_ok) + "/20");
  if (o.pass) {
    o.detail = "delta CEF < 0 in " + std::to_string(cef_ok) + "/20 seeds, delta CI > 0 in " + std::to_string(ci_ok) +
               "/20 seeds";
  }
  return o;
}

void write_files(const CorpusInputs& in, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream p(dir / "publications.jsonl", std::ios::binary);
  write_publications(p, in.publications);
  std::ofstream a(dir / "academics.csv", std::ios::binary);
  write_academics(a, in.academics);
  std::ofstream o(dir / "organizations.csv", std::ios::binary);
  write_organizations(o, in.organizations);
  std::ofstream t(dir / "taxonomy.csv", std::ios::binary);
  write_taxonomy(t, in.taxonomy);
}

CorpusFiles files_in(const fs::path& dir) {
  return {dir / "publications.jsonl", dir / "academics.csv", dir / "organizations.csv", dir / "taxonomy.csv"};
}

// Ten fields plus the partner pool give eleven UDAs.
synth::SynthConfig large_scale_config() {
  synth::SynthConfig c;
  c.seed = 2011;
  c.n_fields = 10;
  c.sds_per_field = 4;
  c.academics_per_field = 3800;
  c.productivity.kind = synth::ProductivityKind::Lognormal;
  c.productivity.mu = 1.25;
  c.productivity.sigma = 0.9;
  c.shared_pub_rate = 0.15;
  c.n_universities = 60;
  c.partners_per_university = 8;
  c.n_domestic_orgs = 40;
  c.n_foreign_orgs = 80;
  return c;
}

// 7
Outcome large_scale(const fs::path& work) {
  Outcome o;
  const fs::path dir = work / "scale";
  write_files(synth::generate(large_scale_config()).inputs, dir);

  const auto t0 = Clock::now();
  LoadReport load;
  const Corpus corpus = build_corpus(load_corpus_inputs(files_in(dir), {}, load));
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  const ProfileTable profiles = build_profiles(corpus, threads);
  std::ostringstream sink;
  for (Level level : {Level::Uda, Level::Sds}) {
    ReportOptions opt;
    opt.level = level;
    write_csv(sink, emit_population_table(corpus, opt));
    write_csv(sink, emit_comparison_table(corpus, profiles, opt));
    write_csv(sink, emit_correlation_table(corpus, profiles, opt));
    write_csv(sink, emit_indices_table(corpus, opt));
    for (Form f : kAllForms) {
      write_csv(sink, emit_summary_table(corpus, profiles, opt, f));
      write_csv(sink, emit_incidence_table(corpus, opt, f));
      write_csv(sink, emit_tests_table(corpus, profiles, opt, f));
    }
  }
  const double elapsed = seconds_since(t0);

  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  const double peak_mb = static_cast<double>(usage.ru_maxrss) / 1024.0;

  std::size_t productive = 0;
  for (const auto& row : profiles) productive += row.p > 0;
  const std::size_t n_pubs = corpus.publications().size();
  const std::size_t n_udas = corpus.taxonomy().udas().size();

  o.require(load.clean(), "ingest rejected lines");
  o.require(n_pubs >= 197460, "publications " + std::to_string(n_pubs));
  o.require(productive >= 36211, "productive academics " + std::to_string(productive));
  o.require(n_udas == 11, "UDAs " + std::to_string(n_udas));
  o.require(elapsed < 30.0, "runtime " + fmt("%.1f s", elapsed));
  o.require(peak_mb < 2048.0, "peak memory " + fmt("%.0f MB", peak_mb));
  if (o.pass) {
    o.detail = std::to_string(n_pubs) + " publications, " + std::to_string(productive) + " productive academics, " +
               std::to_string(n_udas) + " UDAs; ingest to all reports in " + fmt("%.2f s", elapsed) +
               ", peak RSS " + fmt("%.0f MB", peak_mb);
  }
  return o;
}

// 8
Outcome determinism(const fs::path& work) {
  Outcome o;
  const fs::path dir = work / "determinism";
  synth::SynthConfig c;
  c.seed = 8;
  c.academics_per_field = 300;
  c.shared_pub_rate = 0.2;
  write_files(synth::generate(c).inputs, dir);
  const CorpusFiles f = files_in(dir);
  std::size_t bytes = 0;
  for (const char* sub : {"ingest", "summary", "incidence", "compare", "correlate", "tests", "indices"}) {
    for (const char* level : {"uda", "sds"}) {
      const std::vector<std::string> args = {sub,          "--by",     level,         "--format",
                                             "csv",        "--threads", "4",          "--pubs",
                                             f.publications.string(), "--academics", f.academics.string(),
                                             "--orgs",     f.organizations.string(),  "--taxonomy",
                                             f.taxonomy.string()};
      std::ostringstream out1, out2, err;
      const int c1 = cli::run(args, out1, err);
      const int c2 = cli::run(args, out2, err);
      o.require(c1 == 0 && c2 == 0, std::string(sub) + " exited non-zero");
      o.require(out1.str() == out2.str(), std::string(sub) + " --by " + level + " differs between runs");
      bytes += out1.str().size();
    }
  }
  if (o.pass) o.detail = "14 report runs repeated, " + std::to_string(bytes) + " CSV bytes identical";
  return o;
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / ("copro-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(work);

  std::vector<std::pair<std::string, Outcome>> results;
  auto guarded = [&](const std::string& name, const std::function<Outcome()>& fn) {
    try {
      results.emplace_back(name, fn());
    } catch (const std::exception& e) {
      results.emplace_back(name, Outcome{false, std::string("exception: ") + e.what()});
    }
  };

  guarded("worked example reproduction", worked_example);
  OracleRun oracle;
  try {
    oracle = oracle_and_bounds();
  } catch (const std::exception& e) {
    oracle.equivalence = oracle.bounds = Outcome{false, std::string("exception: ") + e.what()};
  }
  results.emplace_back("classification oracle equivalence", oracle.equivalence);
  results.emplace_back("indicator bounds", oracle.bounds);
  guarded("disjoint-authorship identity", disjoint_identity);
  guarded("statistics kernel", stats_kernel);
  guarded("divergence direction", divergence_direction);
  guarded("large-corpus pipeline", [&] { return large_scale(work); });
  guarded("deterministic output", [&] { return determinism(work); });

  fs::remove_all(work);

  int failed = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& [name, outcome] = results[i];
    std::printf("%s %zu %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, name.c_str(), outcome.detail.c_str());
    failed += !outcome.pass;
  }
  return failed == 0 ? 0 : 1;
}
