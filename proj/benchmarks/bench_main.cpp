#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "solq/eval.hpp"
#include "solq/frontend/elaborate.hpp"
#include "solq/frontend/parser.hpp"
#include "solq/mzn.hpp"
#include "solq/translate.hpp"

namespace {

using namespace solq;
namespace fe = solq::frontend;

std::string source(const std::string& name) {
  std::ifstream in(std::string(SOLQ_PROGRAMS_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fe::Catalog catalog(const std::string& name) {
  fe::Catalog cat;
  fe::ElabOptions opts;
  opts.base_dir = SOLQ_PROGRAMS_DIR;
  fe::elaborate(fe::parse_program(source(name)), cat, opts);
  return cat;
}

const RankedQuery& query(const fe::Catalog& cat, const std::string& name) {
  return std::get<SolProjection>(*cat.find(name)).query;
}

void BM_ParseLatin(benchmark::State& state) {
  std::string text = source("latin.ra");
  for (auto _ : state) benchmark::DoNotOptimize(fe::parse_program(text));
}
BENCHMARK(BM_ParseLatin);

void BM_ElaborateMeal(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(catalog("meal.ra"));
}
BENCHMARK(BM_ElaborateMeal);

void BM_TranslateLatin(benchmark::State& state) {
  auto cat = catalog("latin.ra");
  const auto& q = query(cat, "solutionAsRelation");
  for (auto _ : state) benchmark::DoNotOptimize(phi::translate(q));
}
BENCHMARK(BM_TranslateLatin);

void BM_EmitEnergy(benchmark::State& state) {
  auto cat = catalog("energy.ra");
  FlatForm ff = phi::translate(query(cat, "LetsUseE"));
  for (auto _ : state) benchmark::DoNotOptimize(mzn::emit(ff));
}
BENCHMARK(BM_EmitEnergy);

void BM_BruteForceLatin(benchmark::State& state) {
  auto cat = catalog("latin.ra");
  FlatForm ff = phi::translate(query(cat, "solutionAsRelation"));
  QueryClass qc = classify(ff.meta, ff.flat);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_solve(ff.flat, qc));
}
BENCHMARK(BM_BruteForceLatin);

void BM_BruteForceCakes(benchmark::State& state) {
  auto cat = catalog("cakes.ra");
  FlatForm ff = phi::translate(query(cat, "LetsMakeBatch"));
  QueryClass qc = classify(ff.meta, ff.flat);
  BruteForceOptions opts;
  opts.jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_solve(ff.flat, qc, opts));
}
BENCHMARK(BM_BruteForceCakes)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BruteForceMeal(benchmark::State& state) {
  auto cat = catalog("meal.ra");
  FlatForm ff = phi::translate(query(cat, "LetsUsePlans"));
  QueryClass qc = classify(ff.meta, ff.flat);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_solve(ff.flat, qc));
}
BENCHMARK(BM_BruteForceMeal);

}  // namespace

BENCHMARK_MAIN();
