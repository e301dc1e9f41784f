#include "wsi/sampler.hpp"

#include <cassert>

namespace wsi {

namespace {

void normalize(std::vector<double>& p) {
  double total = 0.0;
  for (double v : p) total += v;
  const double inv = 1.0 / total;
  for (double& v : p) v *= inv;
}

}  // namespace

void global_conditional(const ModelState& state, int d, int w,
                        std::vector<double>& out) {
  const int S = state.n_senses;
  const int T = state.n_topics;
  const int V = state.corpus->vocab.size();
  const double alpha = state.hyper.alpha;
  const double beta = state.hyper.beta;
  const double gamma = state.hyper.gamma;
  out.resize(S + T);

  // switch factor and the per-route document normalizer are constant within
  // a route; the overall 1/(dx_sum + 2*gamma) cancels in normalization
  const double sense_route =
      (state.c_dx(d, 0) + gamma) / (state.ds_sum[d] + S * alpha);
  const double topic_route =
      (state.c_dx(d, 1) + gamma) / (state.dt_sum[d] + T * alpha);
  for (int k = 0; k < S; ++k)
    out[k] = sense_route * (state.c_ds(d, k) + alpha) *
             (state.c_sw(k, w) + beta) / (state.sw_sum[k] + V * beta);
  for (int j = 0; j < T; ++j)
    out[S + j] = topic_route * (state.c_dt(d, j) + alpha) *
                 (state.c_tw(j, w) + beta) / (state.tw_sum[j] + V * beta);
  normalize(out);
}

void local_conditional(const ModelState& state, int d, int w_l, int w_t,
                       SweepScratch& scratch) {
  const int S = state.n_senses;
  const int T = state.n_topics;
  const int V = state.corpus->vocab.size();
  const double alpha = state.hyper.alpha;
  const double beta = state.hyper.beta;
  const bool with_target = state.hyper.variant != Variant::no_pairs;
  scratch.sense_f.resize(S);
  scratch.topic_f.resize(T);
  scratch.probs.resize(S * T);

  // Eight factors regrouped: everything depending on k alone, on j alone,
  // and the joint count. Factors constant across (k, j) are dropped; the
  // joint count appears cubed (row-, column- and total-normalized copies).
  for (int k = 0; k < S; ++k) {
    double f = (state.c_ds(d, k) + alpha) * (state.c_sw(k, w_l) + beta) /
               (state.sw_sum[k] + V * beta) / (state.st_row[k] + T * alpha);
    if (with_target)
      f *= (state.c_sw(k, w_t) + beta) / (state.sw_sum[k] + V * beta + 1);
    scratch.sense_f[k] = f;
  }
  for (int j = 0; j < T; ++j)
    scratch.topic_f[j] = (state.c_dt(d, j) + alpha) *
                         (state.c_tw(j, w_l) + beta) /
                         (state.tw_sum[j] + V * beta) /
                         (state.st_col[j] + S * alpha);
  for (int k = 0; k < S; ++k) {
    const double fk = scratch.sense_f[k];
    double* row = scratch.probs.data() + static_cast<size_t>(k) * T;
    for (int j = 0; j < T; ++j) {
      const double joint = state.c_st(k, j) + alpha;
      row[j] = fk * scratch.topic_f[j] * joint * joint * joint;
    }
  }
  normalize(scratch.probs);
}

void topic_conditional(const ModelState& state, int d, int w,
                       std::vector<double>& out) {
  const int T = state.n_topics;
  const int V = state.corpus->vocab.size();
  const double alpha = state.hyper.alpha;
  const double beta = state.hyper.beta;
  out.resize(T);
  for (int j = 0; j < T; ++j)
    out[j] = (state.c_dt(d, j) + alpha) * (state.c_tw(j, w) + beta) /
             (state.tw_sum[j] + V * beta);
  normalize(out);
}

std::vector<double> global_conditional(const ModelState& state, int d, int w) {
  std::vector<double> out;
  global_conditional(state, d, w, out);
  return out;
}

std::vector<double> local_conditional(const ModelState& state, int d, int w_l,
                                      int w_t) {
  SweepScratch scratch;
  local_conditional(state, d, w_l, w_t, scratch);
  return scratch.probs;
}

std::vector<double> topic_conditional(const ModelState& state, int d, int w) {
  std::vector<double> out;
  topic_conditional(state, d, w, out);
  return out;
}

void sweep(ModelState& state, RandomSource& rng, SweepScratch& scratch) {
  const Corpus& corpus = *state.corpus;
  const int S = state.n_senses;
  const int T = state.n_topics;
  const Variant variant = state.hyper.variant;

  for (int d = 0; d < corpus.size(); ++d) {
    Assignment& a = state.assignments[d];
    const std::vector<int>& ids = corpus.token_ids[d];

    if (variant == Variant::lda) {
      const int target_pos = corpus.instances[d].target_index;
      int i = 0;
      for (int pos = 0; pos < static_cast<int>(ids.size()); ++pos) {
        if (pos == target_pos) continue;
        const int w = ids[pos];
        state.add_class(d, w, a.global_code[i], -1);
        topic_conditional(state, d, w, scratch.probs);
        const int c =
            pick_index(scratch.probs.data(), T, 1.0, rng.next_double());
        state.add_class(d, w, c, +1);
        a.global_code[i++] = c;
      }
      continue;
    }

    const ContextSplit& split = corpus.splits[d];
    for (size_t i = 0; i < split.global.size(); ++i) {
      const int w = ids[split.global[i]];
      state.add_global(d, w, a.global_code[i], -1);
      int code;
      if (variant == Variant::no_switch) {
        topic_conditional(state, d, w, scratch.probs);
        code = S + pick_index(scratch.probs.data(), T, 1.0, rng.next_double());
      } else {
        global_conditional(state, d, w, scratch.probs);
        code = pick_index(scratch.probs.data(), S + T, 1.0, rng.next_double());
      }
      state.add_global(d, w, code, +1);
      a.global_code[i] = code;
    }
    for (size_t i = 0; i < split.local.size(); ++i) {
      const int w_l = ids[split.local[i]];
      state.add_pair(d, w_l, corpus.target_id, a.pair_sense[i], a.pair_topic[i],
                     -1);
      local_conditional(state, d, w_l, corpus.target_id, scratch);
      const int idx =
          pick_index(scratch.probs.data(), S * T, 1.0, rng.next_double());
      state.add_pair(d, w_l, corpus.target_id, idx / T, idx % T, +1);
      a.pair_sense[i] = idx / T;
      a.pair_topic[i] = idx % T;
    }
  }
}

void sweep(ModelState& state, RandomSource& rng) {
  SweepScratch scratch;
  sweep(state, rng, scratch);
}

ChainResult run_chain(const Corpus& corpus, const Hyperparams& hyper,
                      int run_index) {
  Rng rng(stream_seed(hyper.seed, corpus.target_lemma, run_index));
  ModelState state = init_state(corpus, hyper, rng);
  SweepScratch scratch;
  for (int it = 0; it < hyper.iterations; ++it) sweep(state, rng, scratch);
  assert(audit_counts(state));
  return {std::move(state), rng.state_string()};
}

}  // namespace wsi
