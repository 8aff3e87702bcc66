#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "dq/enumerate.hpp"
#include "dq/mc.hpp"

using namespace dq;

namespace {

double now() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void bench_graph(const char* name, const GraphClass& gc, long samples,
                 int threads) {
  McOptions opt;
  opt.samples = samples;
  opt.seed = 7;

  double t0 = now();
  WeightResult serial = graph_weight_mc_serial(gc, opt);
  double t_serial = now() - t0;

  opt.threads = threads;
  t0 = now();
  WeightResult parallel = graph_weight_mc(gc, opt);
  double t_parallel = now() - t0;

  bool identical = serial.estimate == parallel.estimate &&
                   serial.std_error == parallel.std_error;
  std::printf(
      "%-14s %9ld samples  est %+.6f +- %.6f  serial %7.3fs  parallel %7.3fs  "
      "speedup %5.2fx  identical %s\n",
      name, samples, parallel.estimate, parallel.std_error, t_serial,
      t_parallel, t_parallel > 0 ? t_serial / t_parallel : 0.0,
      identical ? "yes" : "NO");
  if (!identical) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
  long samples = argc > 1 ? std::atol(argv[1]) : 2000000;
  int threads = argc > 2 ? std::atoi(argv[2]) : 0;

  auto wedge = enumerate_boundary_graphs(1, 1).at(0);
  bench_graph("wedge", wedge, samples, threads);

  auto double_wedge = enumerate_boundary_graphs(2, 1).at(0);
  bench_graph("double-wedge", double_wedge, samples, threads);

  auto order3 = enumerate_boundary_graphs(3, 2);
  if (!order3.empty())
    bench_graph("order-3", order3.front(), samples / 2, threads);

  return 0;
}
