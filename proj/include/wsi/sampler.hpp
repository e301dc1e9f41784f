#pragma once

#include <string>
#include <vector>

#include "wsi/model.hpp"

namespace wsi {

// Reusable buffers so sweeps never allocate inside the token loop.
struct SweepScratch {
  std::vector<double> probs;    // conditional over codes / pairs / classes
  std::vector<double> sense_f;  // per-sense partial products (local pairs)
  std::vector<double> topic_f;  // per-topic partial products (local pairs)
};

// Conditionals are normalized to sum 1. Counts must already exclude the
// token (or pair) being resampled.

// switch model: entries 0..S-1 sense route, S..S+T-1 topic route
void global_conditional(const ModelState& state, int d, int w,
                        std::vector<double>& out);

// eight-factor pair conditional, entry k*T+j; result in scratch.probs.
// no_pairs drops the target-word factor.
void local_conditional(const ModelState& state, int d, int w_l, int w_t,
                       SweepScratch& scratch);

// plain collapsed LDA conditional over topics (lda variant, and the
// topic route of no_switch globals)
void topic_conditional(const ModelState& state, int d, int w,
                       std::vector<double>& out);

std::vector<double> global_conditional(const ModelState& state, int d, int w);
std::vector<double> local_conditional(const ModelState& state, int d, int w_l,
                                      int w_t);
std::vector<double> topic_conditional(const ModelState& state, int d, int w);

// One full Gibbs pass: instances in corpus order, globals then local pairs,
// each in token order; decrement, sample, increment.
void sweep(ModelState& state, RandomSource& rng, SweepScratch& scratch);
void sweep(ModelState& state, RandomSource& rng);

struct ChainResult {
  ModelState state;
  std::string rng_state;  // draw position after the final sweep
};

// Seeds from (hyper.seed, lemma, run_index), inits, runs hyper.iterations
// sweeps. Chains are independent of scheduling order.
ChainResult run_chain(const Corpus& corpus, const Hyperparams& hyper,
                      int run_index);

}  // namespace wsi
