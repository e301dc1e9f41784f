#include "wsi/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "wsi/jsonl.hpp"
#include "wsi/rng.hpp"

namespace wsi {

void Instance::validate() const {
  if (tokens.empty())
    throw ValidationError("instance " + instance_id + ": empty token list");
  if (target_index < 0 || target_index >= static_cast<int>(tokens.size()))
    throw ValidationError("instance " + instance_id + ": target_index " +
                          std::to_string(target_index) +
                          " out of bounds for " +
                          std::to_string(tokens.size()) + " tokens");
  if (tokens[target_index] != target_lemma)
    throw ValidationError("instance " + instance_id + ": token at target_index is '" +
                          tokens[target_index] + "', expected target '" +
                          target_lemma + "'");
}

int Vocabulary::add(const std::string& word) {
  auto [it, inserted] = ids_.emplace(word, static_cast<int>(words_.size()));
  if (inserted) words_.push_back(word);
  return it->second;
}

int Vocabulary::id_of(const std::string& word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? -1 : it->second;
}

ContextSplit split_contexts(const Instance& instance, int window) {
  const int n = static_cast<int>(instance.tokens.size());
  const int t = instance.target_index;
  const int lo = std::max(0, t - window);
  const int hi = std::min(n - 1, t + window);
  ContextSplit split;
  for (int pos = 0; pos < n; ++pos) {
    if (pos == t) continue;
    (pos >= lo && pos <= hi ? split.local : split.global).push_back(pos);
  }
  return split;
}

std::vector<TargetNeighborPair> extract_pairs(const Instance& instance,
                                              const ContextSplit& split,
                                              const Vocabulary& vocab) {
  const int target_id = vocab.id_of(instance.tokens[instance.target_index]);
  std::vector<TargetNeighborPair> pairs;
  pairs.reserve(split.local.size());
  for (int pos : split.local)
    pairs.push_back({target_id, vocab.id_of(instance.tokens[pos])});
  return pairs;
}

namespace {

Corpus finish_corpus(const std::string& target_lemma,
                     std::vector<Instance> instances,
                     std::vector<ContextSplit> splits) {
  Corpus corpus;
  corpus.target_lemma = target_lemma;
  corpus.instances = std::move(instances);
  corpus.splits = std::move(splits);

  std::set<std::string> seen_ids;
  for (const Instance& inst : corpus.instances) {
    inst.validate();
    if (inst.target_lemma != target_lemma)
      throw ValidationError("instance " + inst.instance_id +
                            ": target '" + inst.target_lemma +
                            "' does not match corpus lemma '" + target_lemma + "'");
    if (!seen_ids.insert(inst.instance_id).second)
      throw ValidationError("duplicate instance_id '" + inst.instance_id +
                            "' for target '" + target_lemma + "'");
  }

  corpus.token_ids.reserve(corpus.instances.size());
  for (const Instance& inst : corpus.instances) {
    std::vector<int> ids;
    ids.reserve(inst.tokens.size());
    for (const std::string& tok : inst.tokens) ids.push_back(corpus.vocab.add(tok));
    corpus.token_ids.push_back(std::move(ids));
  }
  corpus.target_id = corpus.vocab.id_of(target_lemma);
  return corpus;
}

}  // namespace

Corpus make_corpus(const std::string& target_lemma,
                   std::vector<Instance> instances, int window) {
  if (window < 1) throw ConfigError("window must be >= 1");
  std::vector<ContextSplit> splits;
  splits.reserve(instances.size());
  for (const Instance& inst : instances) {
    inst.validate();
    splits.push_back(split_contexts(inst, window));
  }
  return finish_corpus(target_lemma, std::move(instances), std::move(splits));
}

Corpus make_corpus_presplit(const std::string& target_lemma,
                            std::vector<Instance> instances,
                            std::vector<ContextSplit> splits) {
  if (instances.size() != splits.size())
    throw ValidationError("presplit corpus: instance/split count mismatch");
  for (size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    const auto& split = splits[i];
    std::set<int> seen;
    seen.insert(inst.target_index);
    for (int pos : split.local)
      if (!seen.insert(pos).second)
        throw ValidationError("instance " + inst.instance_id +
                              ": split positions overlap");
    for (int pos : split.global)
      if (!seen.insert(pos).second)
        throw ValidationError("instance " + inst.instance_id +
                              ": split positions overlap");
    if (seen.size() != inst.tokens.size() || *seen.begin() != 0 ||
        *seen.rbegin() != static_cast<int>(inst.tokens.size()) - 1)
      throw ValidationError("instance " + inst.instance_id +
                            ": split does not cover all token positions");
  }
  return finish_corpus(target_lemma, std::move(instances), std::move(splits));
}

std::vector<Corpus> load_corpus(const std::string& path, int window) {
  std::map<std::string, std::vector<Instance>> by_lemma;
  for_each_jsonl(path, [&](int lineno, const nlohmann::json& obj) {
    Instance inst;
    try {
      inst.instance_id = obj.at("instance_id").get<std::string>();
      inst.target_lemma = obj.at("target").get<std::string>();
      inst.tokens = obj.at("tokens").get<std::vector<std::string>>();
      inst.target_index = obj.at("target_index").get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    inst.validate();
    by_lemma[inst.target_lemma].push_back(std::move(inst));
  });

  std::vector<Corpus> corpora;
  corpora.reserve(by_lemma.size());
  for (auto& [lemma, instances] : by_lemma)
    corpora.push_back(make_corpus(lemma, std::move(instances), window));
  return corpora;
}

namespace {

constexpr int kSynthWindow = 10;

std::string word_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "w%04d", i);
  return buf;
}

}  // namespace

SyntheticCorpus generate_synthetic(int n_senses, int docs_per_sense,
                                   int topics_per_sense, int vocab_size,
                                   int doc_length, std::uint64_t seed) {
  if (n_senses < 1 || docs_per_sense < 1 || topics_per_sense < 1 ||
      vocab_size < 1 || doc_length < 1)
    throw ConfigError("generate_synthetic: all counts must be >= 1");
  const int n_topics = n_senses * topics_per_sense;
  if (vocab_size < n_topics)
    throw ConfigError("generate_synthetic: vocab_size " +
                      std::to_string(vocab_size) + " < senses*topics " +
                      std::to_string(n_topics));

  // Content-word budget: ~30% sense-lexical words, ~50% topic words, the
  // remainder a shared noise pool. Word ids are assigned block-wise.
  const int lex_per_sense = std::max(1, (vocab_size * 3) / (10 * n_senses));
  const int top_per_topic = std::max(1, (vocab_size * 5) / (10 * n_topics));
  const int lex_base = 0;
  const int top_base = lex_base + lex_per_sense * n_senses;
  int noise_base = top_base + top_per_topic * n_topics;
  int noise_count = vocab_size - noise_base;
  if (noise_count < 1) {  // blocks filled the vocab; reuse the tail as noise
    noise_base = vocab_size - 1;
    noise_count = 1;
  }

  Rng rng(mix64(seed));
  // sense blocks carry flavor-correlated slices: a document biases its
  // lexical draws toward the slice matching its dominant topic, so senses
  // have internal sub-clusters that flat clusterings are tempted to split
  auto lex_word = [&](int sense, int flavor) {
    const int lo = sense * lex_per_sense;
    if (rng.next_double() < 0.55) {
      const int s_lo = flavor * lex_per_sense / topics_per_sense;
      const int s_hi = (flavor + 1) * lex_per_sense / topics_per_sense;
      const int s_n = std::max(1, s_hi - s_lo);
      return word_name(lex_base + lo + s_lo +
                       static_cast<int>(rng.next_below(s_n)));
    }
    return word_name(lex_base + lo +
                     static_cast<int>(rng.next_below(lex_per_sense)));
  };
  auto topic_word = [&](int topic) {
    return word_name(top_base + topic * top_per_topic +
                     static_cast<int>(rng.next_below(top_per_topic)));
  };
  auto noise_word = [&]() {
    return word_name(noise_base + static_cast<int>(rng.next_below(noise_count)));
  };

  // distinct lemma per true sense count so suites can share one corpus file
  const std::string target = "target" + std::to_string(n_senses);
  const int target_index = doc_length / 2;

  SyntheticCorpus out;
  std::vector<Instance> instances;
  int doc_id = 0;
  for (int sense = 0; sense < n_senses; ++sense) {
    for (int d = 0; d < docs_per_sense; ++d, ++doc_id) {
      // one dominant topic per document, from the sense's topic block
      const int flavor = static_cast<int>(rng.next_below(topics_per_sense));
      const int topic = sense * topics_per_sense + flavor;
      Instance inst;
      char idbuf[24];
      std::snprintf(idbuf, sizeof(idbuf), "t%d.d%05d", n_senses, doc_id);
      inst.instance_id = idbuf;
      inst.target_lemma = target;
      inst.target_index = target_index;
      inst.tokens.reserve(doc_length);
      for (int pos = 0; pos < doc_length; ++pos) {
        if (pos == target_index) {
          inst.tokens.push_back(target);
          continue;
        }
        const bool near = std::abs(pos - target_index) <= kSynthWindow;
        const double u = rng.next_double();
        if (near) {
          inst.tokens.push_back(u < 0.96 ? lex_word(sense, flavor)
                                         : noise_word());
        } else if (u < 0.65) {
          inst.tokens.push_back(topic_word(topic));
        } else if (u < 0.96) {
          inst.tokens.push_back(lex_word(sense, flavor));
        } else {
          inst.tokens.push_back(noise_word());
        }
      }
      out.gold[inst.instance_id] = "s" + std::to_string(sense);
      instances.push_back(std::move(inst));
    }
  }
  out.corpus = make_corpus(target, std::move(instances), kSynthWindow);
  return out;
}

void write_corpus_jsonl(const std::string& path,
                        const std::vector<const Corpus*>& corpora) {
  std::ofstream outf(path);
  if (!outf) throw IoError("cannot write file: " + path);
  for (const Corpus* corpus : corpora) {
    for (const Instance& inst : corpus->instances) {
      nlohmann::json obj;
      obj["instance_id"] = inst.instance_id;
      obj["target"] = inst.target_lemma;
      obj["tokens"] = inst.tokens;
      obj["target_index"] = inst.target_index;
      outf << obj.dump() << "\n";
    }
  }
}

void write_gold_jsonl(const std::string& path,
                      const std::map<std::string, std::string>& gold) {
  std::ofstream outf(path);
  if (!outf) throw IoError("cannot write file: " + path);
  for (const auto& [id, label] : gold) {
    nlohmann::json obj;
    obj["instance_id"] = id;
    obj["senses"] = nlohmann::json::object({{label, 1.0}});
    outf << obj.dump() << "\n";
  }
}

}  // namespace wsi
