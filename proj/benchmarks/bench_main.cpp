#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "traceexpr/box.hpp"
#include "traceexpr/certify.hpp"
#include "traceexpr/dsl.hpp"
#include "traceexpr/iso.hpp"
#include "traceexpr/measure.hpp"
#include "traceexpr/polynomial.hpp"
#include "traceexpr/semantics.hpp"

using namespace traceexpr;

namespace {

MachineDoc load(const std::string &rel) {
	std::ifstream in(std::string(TRACEEXPR_CORPUS_DIR) + "/" + rel);
	std::stringstream ss;
	ss << in.rdbuf();
	return parse_machine(ss.str());
}

void BM_PolyIntegrate(benchmark::State &state) {
	const auto degree = static_cast<unsigned>(state.range(0));
	Polynomial x = Polynomial::variable(3, 0);
	Polynomial y = Polynomial::variable(3, 1);
	Polynomial z = Polynomial::variable(3, 2);
	Polynomial p = (x + y * Rational(2) + z * Rational(1, 3) + Polynomial::constant(3, Rational(1))).pow(degree);
	Box box({{Rational(0), Rational(1, 2)}, {Rational(1, 4), Rational(1)}, {Rational(0), Rational(3, 4)}});
	for (auto _ : state)
		benchmark::DoNotOptimize(poly_integrate(p, box));
	state.counters["terms"] = static_cast<double>(p.terms().size());
}
BENCHMARK(BM_PolyIntegrate)->DenseRange(2, 10, 4);

void BM_EnumerateRunsPa(benchmark::State &state) {
	const MachineDoc doc = load("pa_die.aut");
	const auto depth = static_cast<std::size_t>(state.range(0));
	std::size_t count = 0;
	for (auto _ : state) {
		auto runs = enumerate_runs(doc.machine, depth, std::nullopt);
		count = runs.size();
		benchmark::DoNotOptimize(runs);
	}
	state.counters["runs"] = static_cast<double>(count);
}
BENCHMARK(BM_EnumerateRunsPa)->DenseRange(2, 6, 2);

void BM_EnumerateRunsCycle(benchmark::State &state) {
	const Machine m(cycle_tapd());
	const auto depth = static_cast<std::size_t>(state.range(0));
	for (auto _ : state)
		benchmark::DoNotOptimize(enumerate_runs(m, depth, TimeSampling{CriticalDelays{}}));
}
BENCHMARK(BM_EnumerateRunsCycle)->DenseRange(2, 4, 1);

void BM_TapdTraceMeasures(benchmark::State &state) {
	const Machine m(cycle_tapd());
	const auto traces = traces_of(m, static_cast<std::size_t>(state.range(0)), TimeSampling{CriticalDelays{}});
	for (auto _ : state) {
		MeasureEngine engine(m, MeasureContext{});
		for (const auto &t : traces)
			benchmark::DoNotOptimize(engine.trace(t));
	}
	state.counters["traces"] = static_cast<double>(traces.size());
}
BENCHMARK(BM_TapdTraceMeasures)->DenseRange(1, 3, 1);

void BM_CollectionIso(benchmark::State &state) {
	const MachineDoc doc = load("pa_die.aut");
	const auto traces = traces_of(doc.machine, static_cast<std::size_t>(state.range(0)), std::nullopt);
	MeasureEngine engine(doc.machine, MeasureContext{});
	std::vector<MeasureResult> measures;
	for (const auto &t : traces)
		measures.push_back(engine.trace(t));
	const MeasuredCollection c{traces, measures};
	for (auto _ : state)
		benchmark::DoNotOptimize(collection_iso(c, c));
	state.counters["members"] = static_cast<double>(traces.size());
}
BENCHMARK(BM_CollectionIso)->DenseRange(1, 3, 1);

} // namespace
BENCHMARK_MAIN();
