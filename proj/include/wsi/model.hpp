#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wsi/corpus.hpp"
#include "wsi/errors.hpp"
#include "wsi/rng.hpp"

namespace wsi {

// full: switch + target-neighbor pairs
// no_pairs: pair constraint removed (target word contributes nothing)
// no_switch: switch removed (all global tokens topic-generated)
// lda: plain collapsed LDA over every non-target token, classes as senses
enum class Variant { full, no_pairs, no_switch, lda };

Variant parse_variant(const std::string& name);  // ConfigError on unknown name
const char* variant_name(Variant v);

struct Hyperparams {
  double alpha = 0.1;  // prior on all sense/topic multinomials
  double beta = 0.01;  // prior on word multinomials
  double gamma = 0.3;  // prior on the switch
  int senses = 15;
  int topics = 30;  // runner keeps this at 2*senses unless set explicitly
  int window = 10;
  int iterations = 2000;
  int runs = 5;
  std::uint64_t seed = 1;
  Variant variant = Variant::full;

  void validate() const;  // ConfigError on out-of-range values
  bool operator==(const Hyperparams&) const = default;
};

// Latent assignments for one instance. Each global-context token carries one
// code: code < S means sense code, code >= S means topic (code - S). Each
// local token carries a (sense, topic) pair, aligned with split.local. The
// lda variant stores one class id per non-target token (token order) in
// global_code and leaves the pair vectors empty.
struct Assignment {
  std::vector<int> global_code;
  std::vector<int> pair_sense;
  std::vector<int> pair_topic;

  bool operator==(const Assignment&) const = default;
};

using CountsRM =
    Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CountsCM = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

// Collapsed-Gibbs sufficient statistics. Row-major where the sampler scans
// rows (per-document, per-sense-row), column-major where it scans a word
// column across senses/topics. Sum vectors are maintained incrementally by
// the add_* helpers and must never be touched directly.
struct ModelState {
  Hyperparams hyper;
  const Corpus* corpus = nullptr;  // non-owning; null in unbound snapshots
  int n_senses = 0;
  int n_topics = 0;  // for lda this equals senses: classes live topic-side

  CountsRM c_ds;  // D x S  doc-sense
  CountsRM c_dt;  // D x T  doc-topic
  CountsRM c_dx;  // D x 2  doc-switch (col 0: sense route, col 1: topic)
  CountsRM c_st;  // S x T  joint sense-topic (pairs only)
  CountsCM c_sw;  // S x V  sense-word
  CountsCM c_tw;  // T x V  topic-word

  Eigen::VectorXi ds_sum, dt_sum, dx_sum;  // per-document row totals
  Eigen::VectorXi sw_sum, tw_sum;          // per-sense / per-topic totals
  Eigen::VectorXi st_row, st_col;          // c_st row / column totals
  std::int64_t st_total = 0;

  std::vector<Assignment> assignments;

  // delta is +1 or -1; counts and cached sums move together
  void add_global(int d, int w, int code, int delta);
  void add_pair(int d, int w_l, int w_t, int k, int j, int delta);
  void add_class(int d, int w, int c, int delta);  // lda route
  void recompute_cached_sums();

  // counts, assignments and hyperparams; ignores the corpus binding
  bool operator==(const ModelState& other) const;
};

// Uniform random assignments consistent with the variant; counts built
// through the same add_* path the sampler uses.
ModelState init_state(const Corpus& corpus, const Hyperparams& hyper,
                      RandomSource& rng);

// Recomputes every count matrix from the assignments and compares.
bool audit_counts(const ModelState& state);

// JSON snapshot (versioned). rng_state preserves the chain's draw position.
std::string serialize_state(const ModelState& state, int run_index,
                            const std::string& rng_state);

// A deserialized snapshot; state.corpus is null until bound via to_state.
struct StateSnapshot {
  std::string lemma;
  int run_index = 0;
  std::string rng_state;
  std::vector<std::string> vocab_words;
  std::vector<std::string> instance_ids;
  ModelState state;

  // Validates that the corpus matches lemma, instance ids and vocabulary,
  // then returns the state bound to it. ValidationError on mismatch.
  ModelState to_state(const Corpus& corpus) const;
};

StateSnapshot deserialize_state(const std::string& bytes);  // DecodeError

}  // namespace wsi
