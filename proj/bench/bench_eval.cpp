// Benchmark: OpenMP enumeration kernels against their serial references.
// The values must match bit-exactly; the interesting number is the speedup.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "homkit/gadgets.hpp"
#include "homkit/matrix.hpp"
#include "homkit/multigraph.hpp"
#include "homkit/partition.hpp"

using namespace homkit;

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double timed(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return seconds(t0, std::chrono::steady_clock::now());
}

WeightMatrix bench_matrix(int q) {
  RatMatrix m(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      Rat a(1 + ((i * 7 + j * 3) % 5), 1 + ((i + j) % 2));
      Rat b(1 + ((j * 7 + i * 3) % 5), 1 + ((i + j) % 2));
      m.at(i, j) = a + b;
    }
  return WeightMatrix::from_mat(m);
}

}  // namespace

int main(int argc, char** argv) {
  int nv = argc > 1 ? std::atoi(argv[1]) : 13;
  int q = argc > 2 ? std::atoi(argv[2]) : 3;

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; both runs are serial\n");
#endif

  WeightMatrix m = bench_matrix(q);
  MultiGraph g = cycle_graph(nv);
  for (int v = 0; v + 2 < nv; v += 2) g.add_edge(v, v + 2);  // chords

  EvalOptions opt;
  opt.max_ops = Int("100000000000");

  std::printf("Z_M(G): q = %d, |V| = %d, |E| = %d\n", q, g.n, g.edge_count());

  Rat z_serial, z_parallel;
  double t_serial = timed([&] { z_serial = eval_bruteforce_serial(m, g, opt); });
  double t_parallel = timed([&] { z_parallel = eval_bruteforce(m, g, opt); });
  std::printf("  serial   %8.3f s\n", t_serial);
  std::printf("  parallel %8.3f s  (speedup %.2fx)\n", t_parallel,
              t_serial / t_parallel);
  std::printf("  values identical: %s\n", z_serial == z_parallel ? "yes" : "NO");
  if (z_serial != z_parallel) return 1;

  CountProfile c_serial, c_parallel;
  double tc_serial =
      timed([&] { c_serial = count_enumerate_serial(m, g, opt); });
  double tc_parallel = timed([&] { c_parallel = count_enumerate(m, g, opt); });
  std::printf("count profile (%zu distinct values):\n", c_serial.entries.size());
  std::printf("  serial   %8.3f s\n", tc_serial);
  std::printf("  parallel %8.3f s  (speedup %.2fx)\n", tc_parallel,
              tc_serial / tc_parallel);
  std::printf("  profiles identical: %s\n",
              c_serial == c_parallel ? "yes" : "NO");
  if (!(c_serial == c_parallel)) return 1;

  EdgeGadget k = stretch(nv > 12 ? 11 : nv - 2);
  RatMatrix s_serial, s_parallel;
  double ts_serial = timed([&] { s_serial = signature_serial(k, m, opt); });
  double ts_parallel = timed([&] { s_parallel = signature(k, m, opt); });
  std::printf("signature of a length-%d path gadget:\n", k.graph.edge_count());
  std::printf("  serial   %8.3f s\n", ts_serial);
  std::printf("  parallel %8.3f s  (speedup %.2fx)\n", ts_parallel,
              ts_serial / ts_parallel);
  std::printf("  signatures identical: %s\n",
              s_serial == s_parallel ? "yes" : "NO");
  return s_serial == s_parallel ? 0 : 1;
}
