// Throughput of the pipeline stages on synthetic models of growing size.
#include <benchmark/benchmark.h>

#include <string>

#include "umlf/detector.hpp"
#include "umlf/docgen.hpp"
#include "umlf/expander.hpp"
#include "umlf/parser.hpp"
#include "umlf/validator.hpp"

namespace {

// `units` copies of a Factory Method cluster plus an untagged Unif shape,
// one package per copy.
std::string syntheticModel(int units, bool tagged)
{
  auto tag = [&](const std::string &role, int i) {
    return tagged ? " <<FacM-" + role + " @ F" + std::to_string(i) + ">>" : std::string();
  };
  std::string text = "model Bench {\n";
  for (int i = 0; i < units; ++i) {
    const auto n = std::to_string(i);
    text += "  package P" + n + " <<framework>> {\n";
    text += "    class Creator" + n + tag("Creator", i) + " abstract {\n";
    text += "      complete methods;\n";
    text += "      abstract make(): Product" + n + tag("facM", i) + "\n";
    text += "      run()" + tag("anOp", i) + " { calls self.make(), log.write(); }\n";
    text += "    }\n";
    text += "    interface Product" + n + tag("Product", i) + " { describe() }\n";
    text += "    class Item" + n + tag("ConcreteProduct", i) + " implements Product" + n + " { describe() { } }\n";
    text += "    class Maker" + n + tag("ConcreteCreator", i) + " extends Creator" + n + " {\n";
    text += "      make(): Item" + n + tag("facM", i) + " { }\n";
    text += "    }\n";
    text += "    class Printer" + n + " {\n";
    text += "      print() { calls self.header(), self.body(), out.describe(); }\n";
    text += "      abstract header()\n";
    text += "      abstract body()\n";
    text += "    }\n";
    text += "  }\n";
  }
  for (int i = 0; i < units; ++i) {
    const auto n = std::to_string(i);
    text += "  assoc out: P" + n + ".Printer" + n + " -> P" + n + ".Product" + n + " [1];\n";
  }
  text += "}\n";
  return text;
}

umlf::Model parsed(int units, bool tagged) { return *umlf::parseModel(syntheticModel(units, tagged)).model; }

void BM_Parse(benchmark::State &state)
{
  const auto text = syntheticModel(static_cast<int>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(umlf::parseModel(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Parse)->RangeMultiplier(4)->Range(1, 256);

void BM_Print(benchmark::State &state)
{
  const auto model = parsed(static_cast<int>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(umlf::printModel(model));
}
BENCHMARK(BM_Print)->RangeMultiplier(4)->Range(1, 256);

void BM_Validate(benchmark::State &state)
{
  const auto registry = umlf::Registry::withBuiltins();
  const auto model = parsed(static_cast<int>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(umlf::validateModel(model, registry));
}
BENCHMARK(BM_Validate)->RangeMultiplier(4)->Range(1, 256);

void BM_Expand(benchmark::State &state)
{
  const auto registry = umlf::Registry::withBuiltins();
  const auto model = parsed(static_cast<int>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(umlf::expandModel(model, registry));
}
BENCHMARK(BM_Expand)->RangeMultiplier(4)->Range(1, 256);

void BM_Detect(benchmark::State &state)
{
  const auto registry = umlf::Registry::withBuiltins();
  const auto model = parsed(static_cast<int>(state.range(0)), false);
  for (auto _ : state) benchmark::DoNotOptimize(umlf::detectCandidates(model, registry));
}
BENCHMARK(BM_Detect)->RangeMultiplier(4)->Range(1, 256);

void BM_Docgen(benchmark::State &state)
{
  const auto registry = umlf::Registry::withBuiltins();
  const auto model = parsed(static_cast<int>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(umlf::generateDocs(model, registry));
}
BENCHMARK(BM_Docgen)->RangeMultiplier(4)->Range(1, 64);

}  // namespace
BENCHMARK_MAIN();
