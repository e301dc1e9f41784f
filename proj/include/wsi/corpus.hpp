#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "wsi/errors.hpp"

namespace wsi {

// One usage of a target word: pre-tokenized, pre-lemmatized.
struct Instance {
  std::string instance_id;
  std::string target_lemma;
  std::vector<std::string> tokens;
  int target_index = 0;  // position of the target word within tokens

  void validate() const;  // throws ValidationError naming instance_id
};

// Token positions of an instance, split around the target.
// local: neighbors of the target (never the target itself)
// global: every remaining non-target position
struct ContextSplit {
  std::vector<int> local;
  std::vector<int> global;
};

class Vocabulary {
 public:
  int add(const std::string& word);          // id of word, inserting if new
  int id_of(const std::string& word) const;  // -1 when absent
  const std::string& word_of(int id) const { return words_.at(id); }
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
};

struct TargetNeighborPair {
  int target_id;
  int neighbor_id;
};

// All instances of one target lemma, with vocabulary and context splits.
struct Corpus {
  std::string target_lemma;
  int target_id = -1;
  std::vector<Instance> instances;
  Vocabulary vocab;
  std::vector<ContextSplit> splits;
  std::vector<std::vector<int>> token_ids;  // tokens mapped through vocab

  int size() const { return static_cast<int>(instances.size()); }
};

// positions in [target_index - window, target_index + window] minus the
// target, clipped to the token range; everything else is global
ContextSplit split_contexts(const Instance& instance, int window);

std::vector<TargetNeighborPair> extract_pairs(const Instance& instance,
                                              const ContextSplit& split,
                                              const Vocabulary& vocab);

// Window-based corpus construction: vocabulary over all tokens (instance
// order, then token order), splits from split_contexts.
Corpus make_corpus(const std::string& target_lemma,
                   std::vector<Instance> instances, int window);

// Same, with caller-supplied splits (used by the bibliographic adapter,
// where the split is structural rather than window-based).
Corpus make_corpus_presplit(const std::string& target_lemma,
                            std::vector<Instance> instances,
                            std::vector<ContextSplit> splits);

// Reads corpus-jsonl (instance_id, target, tokens, target_index), one corpus
// per distinct target lemma, sorted by lemma. Empty file -> empty vector.
std::vector<Corpus> load_corpus(const std::string& path, int window);

struct SyntheticCorpus {
  Corpus corpus;
  std::map<std::string, std::string> gold;  // instance_id -> sense label
};

// Seeded corpus from a known sense -> topic -> word process. Each sense owns
// a disjoint high-probability lexical word set (drawn near the target) and a
// disjoint block of topics whose words fill the far context. vocab_size
// budgets the content words; the target lemma is one extra type on top.
SyntheticCorpus generate_synthetic(int n_senses, int docs_per_sense,
                                   int topics_per_sense, int vocab_size,
                                   int doc_length, std::uint64_t seed);

void write_corpus_jsonl(const std::string& path,
                        const std::vector<const Corpus*>& corpora);
void write_gold_jsonl(const std::string& path,
                      const std::map<std::string, std::string>& gold);

}  // namespace wsi
