#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ggk/constructions.hpp"
#include "ggk/finite_group.hpp"
#include "ggk/gog.hpp"
#include "ggk/pi1.hpp"
#include "ggk/tree.hpp"
#include "ggk/vcgroup.hpp"

using namespace ggk;

namespace {

// Single-vertex loop over Z whose two edge embeddings are multiplication by
// two and by three.  The fundamental group has genuinely non-trivial normal
// forms, which makes it a good reduction workload.
GraphOfGroups ascending_loop() {
  VCGroupPtr z = VCGroup::z_model();
  VCHom sq = VCHom::make(z, z, {}, {VCElement{0, 2, 0}});
  VCHom cube = VCHom::make(z, z, {}, {VCElement{0, 3, 0}});
  GeometricEdgeData edge{"l", "v", "v", z, sq, cube};
  return make_graph_of_groups({{"v", z}}, {edge});
}

// Random loop word at the unique vertex: vertex letters with small powers
// mixed with both orientations of the loop edge.
Pi1Word random_word(std::mt19937& rng, int length) {
  Pi1Word w;
  w.tokens.reserve(static_cast<size_t>(length));
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<long long> power(-3, 3);
  for (int i = 0; i < length; ++i) {
    switch (kind(rng)) {
      case 0:
        w.tokens.push_back(Pi1Token::vertex(0, VCElement{0, power(rng), 0}));
        break;
      case 1:
        w.tokens.push_back(Pi1Token::edge(0));
        break;
      default:
        w.tokens.push_back(Pi1Token::edge(1));
        break;
    }
  }
  return w;
}

}  // namespace

static void BM_SubgroupLattice(benchmark::State& state) {
  auto g = FiniteGroup::dihedral(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto subs = all_subgroups(g);
    benchmark::DoNotOptimize(subs.size());
  }
}
BENCHMARK(BM_SubgroupLattice)->Arg(4)->Arg(6)->Arg(8);

static void BM_WordReduction(benchmark::State& state) {
  const GraphOfGroups gog = ascending_loop();
  const SpanningTree tree = spanning_tree(gog.graph);
  std::mt19937 rng(20260816);
  std::vector<Pi1Word> words;
  words.reserve(64);
  for (int i = 0; i < 64; ++i)
    words.push_back(random_word(rng, static_cast<int>(state.range(0))));
  size_t next = 0;
  for (auto _ : state) {
    const NormalForm nf = reduce(gog, tree, words[next]);
    benchmark::DoNotOptimize(nf.steps.size());
    next = (next + 1) % words.size();
  }
}
BENCHMARK(BM_WordReduction)->Arg(8)->Arg(32)->Arg(128);

static void BM_BallConstruction(benchmark::State& state) {
  const GraphOfGroups gog = ascending_loop();
  for (auto _ : state) {
    const TreeBall b = ball(gog, 0, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(b.vertices.size());
  }
}
BENCHMARK(BM_BallConstruction)->Arg(3)->Arg(4)->Arg(5);

static void BM_CertifyAndCheck(benchmark::State& state) {
  const GraphOfGroups gog = ascending_loop();
  for (auto _ : state) {
    const Certificate cert = certify_fjcw(gog);
    benchmark::DoNotOptimize(check_certificate(cert).valid());
  }
}
BENCHMARK(BM_CertifyAndCheck);

BENCHMARK_MAIN();
