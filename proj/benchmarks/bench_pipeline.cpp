#include <benchmark/benchmark.h>

#include <map>
#include <sstream>

#include "copro/classify.hpp"
#include "copro/indicators.hpp"
#include "copro/ingest.hpp"
#include "copro/report.hpp"
#include "copro/synth.hpp"

namespace {

using namespace copro;

synth::SynthConfig config_for(int academics_per_field) {
  synth::SynthConfig c;
  c.n_fields = 6;
  c.sds_per_field = 3;
  c.academics_per_field = academics_per_field;
  c.shared_pub_rate = 0.15;
  return c;
}

const Corpus& cached_corpus(int academics_per_field) {
  static std::map<int, Corpus> cache;
  auto it = cache.find(academics_per_field);
  if (it == cache.end()) it = cache.emplace(academics_per_field, synth::generate_corpus(config_for(academics_per_field))).first;
  return it->second;
}

void BM_BuildCorpus(benchmark::State& state) {
  const CorpusInputs inputs = synth::generate(config_for(static_cast<int>(state.range(0)))).inputs;
  for (auto _ : state) benchmark::DoNotOptimize(build_corpus(inputs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(inputs.publications.size()));
}
BENCHMARK(BM_BuildCorpus)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_BuildProfiles(benchmark::State& state) {
  const Corpus& corpus = cached_corpus(2000);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_profiles(corpus, threads));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.publications().size()));
}
BENCHMARK(BM_BuildProfiles)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_ParsePublications(benchmark::State& state) {
  const Corpus& corpus = cached_corpus(500);
  std::ostringstream text;
  write_publications(text, corpus.publications());
  const std::string data = text.str();
  for (auto _ : state) {
    std::istringstream in(data);
    benchmark::DoNotOptimize(parse_publications(in));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_ParsePublications)->Unit(benchmark::kMillisecond);

void BM_ComparisonTable(benchmark::State& state) {
  const Corpus& corpus = cached_corpus(2000);
  const ProfileTable profiles = build_profiles(corpus);
  ReportOptions options;
  options.level = state.range(0) ? Level::Sds : Level::Uda;
  for (auto _ : state) benchmark::DoNotOptimize(emit_comparison_table(corpus, profiles, options));
}
BENCHMARK(BM_ComparisonTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TestsTable(benchmark::State& state) {
  const Corpus& corpus = cached_corpus(2000);
  const ProfileTable profiles = build_profiles(corpus);
  ReportOptions options;
  options.level = Level::Sds;
  for (auto _ : state) benchmark::DoNotOptimize(emit_tests_table(corpus, profiles, options, Form::CEF));
}
BENCHMARK(BM_TestsTable)->Unit(benchmark::kMillisecond);

}  // namespace
