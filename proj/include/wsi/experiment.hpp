#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "wsi/corpus.hpp"
#include "wsi/induction.hpp"
#include "wsi/metrics.hpp"
#include "wsi/model.hpp"
#include "wsi/sampler.hpp"

namespace wsi {

// Runs fn(0..n_jobs-1) on a bounded pool; results land at their job index,
// so output order never depends on scheduling. First exception wins and is
// rethrown after the pool drains.
template <typename R>
std::vector<R> parallel_map(int n_jobs, int workers,
                            const std::function<R(int)>& fn) {
  std::vector<R> results(n_jobs);
  if (n_jobs == 0) return results;
  workers = std::max(1, std::min(workers, n_jobs));

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;

  auto body = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_jobs || failed.load()) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(body);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

// One finished chain, reduced to what reporting needs.
struct RunOutcome {
  SenseSolution solution;
  std::string snapshot;  // serialized final state
};

// All (corpus x run) chains, jobs ordered corpus-major. T follows the
// hyperparams as given; callers resolve any senses/topics coupling first.
std::vector<RunOutcome> run_all(const std::vector<const Corpus*>& corpora,
                                const Hyperparams& hyper, int workers);

// Metric names used in reports: FS, VM (hard labels vs hardened gold),
// FBC, FNMI (full graded distribution vs gold as given), percent scale.
// gold may be null: report then carries only induced counts.
EvalReport evaluate_outcomes(const std::vector<const Corpus*>& corpora,
                             const std::vector<RunOutcome>& outcomes,
                             const Clustering* gold, int runs);

// file names under out_dir: run<r>.hard.key, run<r>.graded.key,
// state_<lemma>_run<r>.json, report.tsv, report.json
void write_outcome_files(const std::string& out_dir,
                         const std::vector<const Corpus*>& corpora,
                         const std::vector<RunOutcome>& outcomes, int runs);

std::string sanitize_filename(const std::string& name);

}  // namespace wsi
