#include <benchmark/benchmark.h>

#include "deltakit/dyadic.hpp"
#include "deltakit/freespace.hpp"
#include "deltakit/lp.hpp"
#include "deltakit/random.hpp"
#include "deltakit/rtree.hpp"
#include "deltakit/verify.hpp"

namespace {

using namespace deltakit;

FreeElement random_element(Rng& rng, const SpaceRef& space) {
  std::map<std::size_t, Rational> coeffs;
  for (int k = 0; k < 6; ++k) coeffs[rng.below(space->size())] += rng.rational(5, 3);
  return FreeElement(space, coeffs);
}

void BM_FreeNormTransport(benchmark::State& state) {
  Rng rng(1);
  const SpaceRef space = share(random_metric_space(rng, static_cast<std::size_t>(state.range(0))));
  const FreeElement mu = random_element(rng, space);
  for (auto _ : state) benchmark::DoNotOptimize(free_norm(mu));
}
BENCHMARK(BM_FreeNormTransport)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_FreeNormLinearProgram(benchmark::State& state) {
  Rng rng(1);
  const SpaceRef space = share(random_metric_space(rng, static_cast<std::size_t>(state.range(0))));
  const FreeElement mu = random_element(rng, space);
  for (auto _ : state) benchmark::DoNotOptimize(lipschitz_dual_value(mu));
}
BENCHMARK(BM_FreeNormLinearProgram)->Arg(4)->Arg(8);

void BM_ExampleA(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(example_a_report(state.range(0)));
}
BENCHMARK(BM_ExampleA)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_LProjectionSplit(benchmark::State& state) {
  Rng rng(2);
  auto tree = std::make_shared<const WeightedTree>(random_tree(rng, static_cast<std::size_t>(state.range(0))));
  const RTreeSubset whole = RTreeSubset::whole(tree);
  const FreeElement mu = random_element(rng, whole.space());
  for (auto _ : state) benchmark::DoNotOptimize(l_projection_split(whole, 0, tree->size() - 1, mu));
}
BENCHMARK(BM_LProjectionSplit)->Arg(5)->Arg(10)->Arg(20);

void BM_DyadicNorm(benchmark::State& state) {
  std::map<Node, Rational> f;
  std::map<Node, Rational> h;
  long k = 0;
  for (std::size_t d = 1; d <= static_cast<std::size_t>(state.range(0)); ++d) {
    for (const auto& t : nodes_at_depth(d)) (k++ % 2 == 0 ? f : h)[t] = make_rational(k % 5 - 2, 3);
  }
  const TreeSpanElement e(f, h);
  for (auto _ : state) benchmark::DoNotOptimize(l1_norm(e));
}
BENCHMARK(BM_DyadicNorm)->DenseRange(2, 8, 2);

void BM_DyadicNormByIntegration(benchmark::State& state) {
  const TreeSpanElement e =
      TreeSpanElement::f_node(Node::parse(std::string(static_cast<std::size_t>(state.range(0)), '0'))) +
      TreeSpanElement::h_node(Node::parse("1"));
  for (auto _ : state) benchmark::DoNotOptimize(l1_norm_by_integration(e));
}
BENCHMARK(BM_DyadicNormByIntegration)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
