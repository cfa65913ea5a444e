#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "copro/classify.hpp"
#include "copro/corpus.hpp"
#include "copro/error.hpp"
#include "copro/indicators.hpp"
#include "copro/ingest.hpp"
#include "copro/report.hpp"
#include "copro/synth.hpp"
#include "copro/worked_example.hpp"

namespace copro::cli {

namespace {

struct CorpusFlags {
  std::string pubs;
  std::string academics;
  std::string orgs;
  std::string taxonomy;
  std::string country = "IT";
  std::string years;
  bool header = false;
};

struct ReportFlags {
  std::string by = "uda";
  std::string form = "C";
  std::string format = "table";
  bool no_field_filter = false;
  double threshold = 0.5;
  std::string out;
  unsigned threads = 1;
};

// Fills corpus flags the user did not pass from the JSON defaults file.
void apply_defaults(CorpusFlags& flags, const CLI::App& sub, std::ostream& err) {
  const char* path = std::getenv(kConfigEnv);
  if (path == nullptr || *path == '\0') return;
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UsageError, std::string("cannot open ") + kConfigEnv + " file " + path);
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorKind::UsageError, std::string(kConfigEnv) + " file is not a JSON object");
  }
  const std::map<std::string, std::string*> strings = {
      {"pubs", &flags.pubs},         {"academics", &flags.academics}, {"orgs", &flags.orgs},
      {"taxonomy", &flags.taxonomy}, {"country", &flags.country},     {"years", &flags.years},
  };
  for (const auto& [key, value] : j.items()) {
    if (auto it = strings.find(key); it != strings.end()) {
      if (!value.is_string()) throw Error(ErrorKind::UsageError, "default '" + key + "' must be a string");
      if (sub.count("--" + key) == 0) *it->second = value.get<std::string>();
    } else if (key == "header") {
      if (!value.is_boolean()) throw Error(ErrorKind::UsageError, "default 'header' must be a boolean");
      if (sub.count("--header") == 0) flags.header = value.get<bool>();
    } else {
      err << "warning: ignoring unknown key '" << key << "' in " << path << '\n';
    }
  }
}

void add_corpus_options(CLI::App& sub, CorpusFlags& flags) {
  sub.add_option("--pubs", flags.pubs, "Publications file (one JSON object per line)");
  sub.add_option("--academics", flags.academics, "Academics file: academic_id,university_id,sds");
  sub.add_option("--orgs", flags.orgs, "Organizations file: org_id,country_code,is_university");
  sub.add_option("--taxonomy", flags.taxonomy, "Taxonomy file: sds_code,uda_code");
  sub.add_option("--country", flags.country, "Domestic country code")->capture_default_str();
  sub.add_option("--years", flags.years, "Inclusive publication year range A:B");
  sub.add_flag("--header", flags.header, "Input files start with a header line");
}

void add_report_options(CLI::App& sub, ReportFlags& flags, bool with_form) {
  sub.add_option("--by", flags.by, "Field level")->check(CLI::IsMember({"uda", "sds"}))->capture_default_str();
  if (with_form) {
    sub.add_option("--form", flags.form, "Collaboration form")
        ->check(CLI::IsMember({"C", "CI", "CED", "CEF"}))
        ->capture_default_str();
  }
  sub.add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"csv", "table", "objects"}))
      ->capture_default_str();
  sub.add_flag("--no-field-filter", flags.no_field_filter, "Keep SDSs below the productive-share threshold");
  sub.add_option("--threshold", flags.threshold, "Productive-share threshold of the field filter")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sub.add_option("--out", flags.out, "Write the report to FILE instead of stdout");
  sub.add_option("--threads", flags.threads, "Worker threads for profile building")->check(CLI::Range(1u, 256u));
}

struct LoadedCorpus {
  Corpus corpus;
  LoadReport report;
};

void print_report(std::ostream& err, const char* name, const ParseReport& r) {
  err << name << ": accepted " << r.accepted << ", rejected " << r.rejected.size() << '\n';
  for (const auto& issue : r.rejected) err << "  line " << issue.line << ": " << issue.reason() << '\n';
}

LoadedCorpus load(const CorpusFlags& flags, std::ostream& err) {
  for (const auto& [name, value] : {std::pair{"--pubs", &flags.pubs},
                                    {"--academics", &flags.academics},
                                    {"--orgs", &flags.orgs},
                                    {"--taxonomy", &flags.taxonomy}}) {
    if (value->empty()) {
      throw Error(ErrorKind::UsageError, std::string(name) + " is required (or set it in " + kConfigEnv + ")");
    }
  }
  ParseOptions options;
  options.has_header = flags.header;
  LoadReport report;
  CorpusInputs inputs = load_corpus_inputs({flags.pubs, flags.academics, flags.orgs, flags.taxonomy}, options, report);
  inputs.domestic_country = flags.country;
  if (!flags.years.empty()) {
    inputs.publications = filter_by_years(std::move(inputs.publications), parse_year_range(flags.years));
  }
  print_report(err, "taxonomy", report.taxonomy);
  print_report(err, "organizations", report.organizations);
  print_report(err, "academics", report.academics);
  print_report(err, "publications", report.publications);
  return {build_corpus(std::move(inputs)), std::move(report)};
}

ReportOptions report_options(const ReportFlags& flags) {
  ReportOptions o;
  o.level = flags.by == "sds" ? Level::Sds : Level::Uda;
  o.field_filter = !flags.no_field_filter;
  o.threshold = flags.threshold;
  return o;
}

OutputFormat output_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "objects") return OutputFormat::Objects;
  return OutputFormat::Table;
}

void emit(const ReportTable& table, const ReportFlags& flags, std::ostream& out) {
  if (flags.out.empty()) {
    write_table(out, table, output_format(flags.format));
    return;
  }
  std::ofstream file(flags.out, std::ios::binary);
  if (!file) throw Error(ErrorKind::UnreadableStream, "cannot write " + flags.out);
  write_table(file, table, output_format(flags.format));
}

void write_corpus_files(const CorpusInputs& in, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error(ErrorKind::UnreadableStream, "cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("publications.jsonl");
    write_publications(f, in.publications);
  }
  {
    auto f = open("academics.csv");
    write_academics(f, in.academics);
  }
  {
    auto f = open("organizations.csv");
    write_organizations(f, in.organizations);
  }
  {
    auto f = open("taxonomy.csv");
    write_taxonomy(f, in.taxonomy);
  }
}

ReportTable example_table(const Corpus& corpus) {
  const ProfileTable profiles = build_profiles(corpus);
  const CollaborationProfile& alpha = profiles.at(corpus, kExampleAlpha);
  const CollaborationProfile& beta = profiles.at(corpus, kExampleBeta);
  const IncidenceSummary inc = incidence(corpus, FieldScope::uda(kExampleUda), Form::CEF);
  const FieldSummary mean = field_summary(corpus, profiles, FieldScope::uda(kExampleUda), Form::CEF);

  ReportTable t;
  t.title = "Propensity vs incidence of international collaboration (CEF), two researchers of one UDA";
  t.headers = {"", "Researcher alpha", "Researcher beta", "UDA " + std::string(kExampleUda)};
  t.add_row({"p", std::to_string(alpha.p), std::to_string(beta.p), std::to_string(inc.n_pubs_union)});
  t.add_row({"cefp", std::to_string(alpha.cefp), std::to_string(beta.cefp), std::to_string(inc.n_pubs_with_form)});
  t.add_row({"CEF", format_percent(propensities(alpha).cef) + "%", format_percent(propensities(beta).cef) + "%",
             format_percent(inc.incidence) + "%"});
  t.footnotes.push_back("Shared publications: " +
                        std::to_string(alpha.p + beta.p - inc.n_pubs_union) + " (both researchers in the byline).");
  t.footnotes.push_back("Mean propensity CEF: " + format_percent(mean.mean) + "%");
  t.footnotes.push_back("Incidence CEF: " + std::to_string(inc.n_pubs_with_form) + " / " +
                        std::to_string(inc.n_pubs_union) + " = " + format_percent(inc.incidence) + "%");
  t.footnotes.push_back("Delta (mean - incidence): " + format_points(100.0 * (mean.mean - inc.incidence)) +
                        " percentage points");
  return t;
}

ReportTable divergence_table(const std::vector<synth::DivergenceRow>& rows) {
  ReportTable t;
  t.title = "Synthetic corpus: mean propensity vs incidence";
  t.headers = {"Form", "Mean propensity", "Incidence", "Delta", "Predicted delta", "cov(p, propensity) sign"};
  for (const auto& r : rows) {
    t.add_row({std::string(to_string(r.form)), format_percent(r.mean_propensity), format_percent(r.incidence),
               format_points(r.delta), format_points(r.predicted_delta),
               r.cov_sign > 0 ? "+" : (r.cov_sign < 0 ? "-" : "0")});
  }
  t.footnotes.push_back("Predicted delta = -100 cov(p, propensity) / mean(p); exact for disjoint authorship.");
  return t;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Collaboration propensity and incidence indicators from co-authorship corpora", "copro"};
  app.require_subcommand(1);
  app.fallthrough(false);

  CorpusFlags corpus_flags;
  ReportFlags report_flags;

  auto* ingest = app.add_subcommand("ingest", "Validate the corpus files and print the population table");
  add_corpus_options(*ingest, corpus_flags);
  add_report_options(*ingest, report_flags, false);
  std::string dump_flags;
  ingest->add_option("--dump-flags", dump_flags, "Write per (publication, academic) form flags to FILE");

  std::map<std::string, CLI::App*> reports;
  for (const auto& [name, help, with_form] :
       {std::tuple{"summary", "Mean, % = 0 and % = 100 of a propensity per field", true},
        std::tuple{"incidence", "Publication-based incidence of a form per field", true},
        std::tuple{"compare", "Mean propensity vs incidence for all forms", false},
        std::tuple{"correlate", "Spearman correlation among the four propensities", false},
        std::tuple{"tests", "Kruskal-Wallis and pairwise Mann-Whitney tests across fields", true},
        std::tuple{"indices", "Classical co-authorship indices per field", false}}) {
    auto* sub = app.add_subcommand(name, help);
    add_corpus_options(*sub, corpus_flags);
    add_report_options(*sub, report_flags, with_form);
    reports[name] = sub;
  }

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus and write the four input files");
  std::string synth_config_path;
  std::string synth_out;
  std::optional<std::uint64_t> synth_seed;
  bool synth_preset = false;
  bool synth_report = false;
  synth_cmd->add_option("--config", synth_config_path, "Generator config (JSON object)");
  synth_cmd->add_flag("--skew-preset", synth_preset, "Use the lognormal(1, 1) skew preset");
  synth_cmd->add_option("--seed", synth_seed, "Override the config seed");
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  synth_cmd->add_flag("--report", synth_report, "Print the propensity vs incidence divergence table");
  synth_cmd->add_option("--format", report_flags.format, "Output format of --report")
      ->check(CLI::IsMember({"csv", "table", "objects"}));

  auto* example = app.add_subcommand("example", "Worked examples");
  std::string example_name;
  std::string example_out;
  example->add_option("name", example_name, "Example name")->required()->check(CLI::IsMember({"table9"}));
  example->add_option("--out", example_out, "Also write the example corpus files to DIR");
  example->add_option("--format", report_flags.format, "Output format")
      ->check(CLI::IsMember({"csv", "table", "objects"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (example->parsed()) {
      const CorpusInputs inputs = two_researcher_example();
      if (!example_out.empty()) write_corpus_files(inputs, example_out);
      const Corpus corpus = build_corpus(inputs);
      write_table(out, example_table(corpus), output_format(report_flags.format));
      return 0;
    }

    if (synth_cmd->parsed()) {
      synth::SynthConfig config = synth_preset ? synth::SynthConfig::skew_preset() : synth::SynthConfig{};
      if (!synth_config_path.empty()) {
        std::ifstream in(synth_config_path);
        if (!in) throw Error(ErrorKind::UnreadableStream, "cannot open " + synth_config_path);
        config = synth::parse_synth_config(in);
      }
      if (synth_seed) config.seed = *synth_seed;
      synth::SynthOutput generated = synth::generate(config);
      write_corpus_files(generated.inputs, synth_out);
      err << "wrote " << generated.inputs.publications.size() << " publications, "
          << generated.inputs.academics.size() << " academics to " << synth_out << '\n';
      if (synth_report) {
        const Corpus corpus = build_corpus(std::move(generated.inputs));
        const auto rows = synth::divergence_experiment(corpus, generated.field_udas, kAllForms);
        write_table(out, divergence_table(rows), output_format(report_flags.format));
      }
      return 0;
    }

    CLI::App* active = ingest->parsed() ? ingest : nullptr;
    for (const auto& [name, sub] : reports) {
      if (sub->parsed()) active = sub;
    }
    apply_defaults(corpus_flags, *active, err);
    LoadedCorpus loaded = load(corpus_flags, err);
    const Corpus& corpus = loaded.corpus;
    const ReportOptions options = report_options(report_flags);
    const Form form = *parse_form(report_flags.form);

    if (active == ingest) {
      if (!dump_flags.empty()) {
        std::ofstream f(dump_flags, std::ios::binary);
        if (!f) throw Error(ErrorKind::UnreadableStream, "cannot write " + dump_flags);
        write_flag_dump(f, corpus);
      }
      emit(emit_population_table(corpus, options), report_flags, out);
      return loaded.report.clean() ? 0 : 1;
    }
    if (active == reports["incidence"]) {
      emit(emit_incidence_table(corpus, options, form), report_flags, out);
      return 0;
    }
    if (active == reports["indices"]) {
      emit(emit_indices_table(corpus, options), report_flags, out);
      return 0;
    }
    const ProfileTable profiles = build_profiles(corpus, report_flags.threads);
    if (active == reports["summary"]) {
      emit(emit_summary_table(corpus, profiles, options, form), report_flags, out);
    } else if (active == reports["compare"]) {
      emit(emit_comparison_table(corpus, profiles, options), report_flags, out);
    } else if (active == reports["correlate"]) {
      emit(emit_correlation_table(corpus, profiles, options), report_flags, out);
    } else if (active == reports["tests"]) {
      emit(emit_tests_table(corpus, profiles, options, form), report_flags, out);
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::UsageError ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace copro::cli
