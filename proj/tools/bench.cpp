#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mil/exec.hpp"
#include "mil/harness/scene.hpp"
#include "mil/harness/train.hpp"
#include "mil/rng.hpp"
#include "mil/verify.hpp"

// Times the sample-parallel surfaces under both execution policies and
// checks that they produce bit-identical results, which the deterministic
// in-order reductions are supposed to guarantee.

namespace {

template <typename Fn>
double seconds(Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int g_failures = 0;

void report(const char* name, double serial_s, double parallel_s, bool identical) {
  std::printf("%-18s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   %s\n", name, serial_s,
              parallel_s, parallel_s > 0 ? serial_s / parallel_s : 0.0,
              identical ? "bit-identical" : "MISMATCH");
  if (!identical) ++g_failures;
}

bool same_samples(const std::vector<mil::harness::SceneSample>& a,
                  const std::vector<mil::harness::SceneSample>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].image != b[i].image || !(a[i].label == b[i].label)) return false;
  return true;
}

bool same_grad(const mil::harness::ModelGrad& a, const mil::harness::ModelGrad& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].weights != b[i].weights || a[i].bias != b[i].bias) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel benchmark for the sample-level kernels"};
  int suite_trials = 200;
  int scene_count = 4000;
  int batch_size = 256;
  std::uint64_t seed = 17;
  app.add_option("--suite-trials", suite_trials, "gradcheck suite trials");
  app.add_option("--scenes", scene_count, "scene-generation sample count");
  app.add_option("--batch", batch_size, "batch-objective sample count");
  app.add_option("--seed", seed, "benchmark seed");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP: 'parallel' falls back to the serial loop\n");
#endif

  // Randomized property suite: per-trial work, reduced in trial order.
  mil::SuiteReport rs, rp;
  double ts = seconds([&] { rs = mil::run_gradcheck_suite(seed, suite_trials, mil::Exec::serial); });
  double tp =
      seconds([&] { rp = mil::run_gradcheck_suite(seed, suite_trials, mil::Exec::parallel); });
  report("gradcheck suite", ts, tp, mil::suite_report_text(rs) == mil::suite_report_text(rp));

  // Dataset generation: per-index split rng streams.
  auto glyphs = mil::harness::make_glyph_set(5);
  mil::Rng base(seed);
  std::vector<mil::harness::SceneSample> ss, sp;
  ts = seconds(
      [&] { ss = generate_scenes(base, scene_count, glyphs, 2, 24, 24, mil::Exec::serial); });
  tp = seconds(
      [&] { sp = generate_scenes(base, scene_count, glyphs, 2, 24, 24, mil::Exec::parallel); });
  report("scene generation", ts, tp, same_samples(ss, sp));

  // Batch objective: per-sample gradients folded in batch order.
  mil::harness::TrainConfig cfg;
  mil::Rng init(seed);
  auto params = mil::harness::init_params(
      mil::harness::default_architecture(cfg.num_classes), init);
  std::vector<mil::harness::SceneSample> batch(
      ss.begin(), ss.begin() + std::min<std::size_t>(batch_size, ss.size()));
  mil::harness::BatchObjective os, op;
  ts = seconds([&] { os = nll_objective(params, batch, mil::Exec::serial); });
  tp = seconds([&] { op = nll_objective(params, batch, mil::Exec::parallel); });
  report("batch objective", ts, tp, os.mean_cost == op.mean_cost && same_grad(os.grad, op.grad));

  if (g_failures > 0) {
    std::printf("%d surface(s) differ between policies\n", g_failures);
    return 1;
  }
  return 0;
}
