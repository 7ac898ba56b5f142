// Compares the serial reference workers against the OpenMP workers on the
// same inputs and verifies they produce identical answers.

#include <chrono>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "mpc/families.hpp"
#include "mpc/harness.hpp"
#include "mpc/hc_engine.hpp"
#include "mpc/planner.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace {

double time_ms(const std::function<void()>& fn, int repeat) {
  double best = 1e300;
  for (int i = 0; i < repeat; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel worker benchmark"};
  std::string family = "C3";
  std::size_t n = 200000;
  std::uint64_t p = 64;
  int repeat = 3;
  app.add_option("--query", family, "family name (default C3)");
  app.add_option("--n", n, "domain size");
  app.add_option("--p", p, "number of servers");
  app.add_option("--repeat", repeat, "repetitions, best time wins");
  CLI11_PARSE(app, argc, argv);

  auto q = mpc::family_query(family);
  if (!q) {
    std::fprintf(stderr, "unknown family: %s\n", family.c_str());
    return 1;
  }

#if defined(_OPENMP)
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; both runs are serial\n");
#endif
  std::printf("query %s, n=%zu, p=%llu\n", q->name.c_str(), n,
              static_cast<unsigned long long>(p));

  mpc::MatchingDatabase db = mpc::generate(*q, n, 1);
  mpc::CoverSolution cover = mpc::optimal_cover(*q);
  mpc::SharePlan plan = mpc::make_share_plan(*q, cover, p, 7);
  mpc::BudgetSpec budget;

  mpc::RoundResult serial_result, parallel_result;
  double serial_ms = time_ms(
      [&] { serial_result = mpc::run_one_round(*q, db, plan, budget, mpc::ExecMode::serial); },
      repeat);
  double parallel_ms = time_ms(
      [&] {
        parallel_result = mpc::run_one_round(*q, db, plan, budget, mpc::ExecMode::parallel);
      },
      repeat);

  if (!(serial_result.answers == parallel_result.answers)) {
    std::fprintf(stderr, "FAIL: serial and parallel answers differ\n");
    return 1;
  }
  std::printf("one round: %zu answers, max load %llu tuples\n", serial_result.answers.size(),
              static_cast<unsigned long long>(serial_result.load.max_load_tuples));
  std::printf("  serial   %10.2f ms\n", serial_ms);
  std::printf("  parallel %10.2f ms   speedup %.2fx\n", parallel_ms, serial_ms / parallel_ms);

  // multi-round plan on a path query
  mpc::Query path = mpc::make_path_query(8);
  mpc::MatchingDatabase path_db = mpc::generate(path, n / 4, 1);
  mpc::RoundPlan rplan = mpc::build_plan(path, mpc::Rat(0));
  mpc::PlanExecution serial_plan, parallel_plan;
  double plan_serial_ms = time_ms(
      [&] {
        serial_plan = mpc::execute_plan(rplan, path_db, 16, budget, 7, mpc::ExecMode::serial);
      },
      repeat);
  double plan_parallel_ms = time_ms(
      [&] {
        parallel_plan =
            mpc::execute_plan(rplan, path_db, 16, budget, 7, mpc::ExecMode::parallel);
      },
      repeat);
  if (!(serial_plan.answers == parallel_plan.answers)) {
    std::fprintf(stderr, "FAIL: serial and parallel plan answers differ\n");
    return 1;
  }
  std::printf("plan %s depth %zu: %zu answers\n", path.name.c_str(), rplan.depth,
              serial_plan.answers.size());
  std::printf("  serial   %10.2f ms\n", plan_serial_ms);
  std::printf("  parallel %10.2f ms   speedup %.2fx\n", plan_parallel_ms,
              plan_serial_ms / plan_parallel_ms);
  return 0;
}
