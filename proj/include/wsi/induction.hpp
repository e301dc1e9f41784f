#pragma once

#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wsi/model.hpp"

namespace wsi {

// Point estimates read off a finished chain. For the lda variant the class
// (topic-side) counts play the sense role.
struct SenseSolution {
  std::string lemma;
  int n_senses = 0;
  std::vector<std::string> instance_ids;
  std::vector<std::string> vocab_words;
  std::vector<std::vector<double>> theta_sd;  // per instance, over senses
  std::vector<std::vector<double>> theta_ws;  // per sense, over words
  std::vector<bool> flat_instance;  // instance had zero sense-assigned tokens
  std::vector<bool> flat_sense;     // sense had zero word assignments
  std::vector<int> hard_label;      // argmax, ties to the lowest sense id
  std::set<int> induced_senses;     // senses that win at least one instance
};

// Unsmoothed normalized count row; zero rows come back uniform and are
// reported through the flat_* flags in make_solution.
std::vector<double> sense_distribution(const ModelState& state, int d);
std::vector<double> sense_word_distribution(const ModelState& state, int k);

SenseSolution make_solution(const ModelState& state);
SenseSolution make_solution(const StateSnapshot& snapshot);  // no corpus needed

// Top-n (word, probability) for sense k, probability descending, ties by
// vocab id; excluded words (typically the target lemma) are skipped.
std::vector<std::pair<std::string, double>> top_words(
    const SenseSolution& solution, int k, int n,
    const std::set<std::string>& exclude = {});

int induced_sense_count(const SenseSolution& solution);
int docs_for_sense(const SenseSolution& solution, int k);

// Thresholded, truncated and renormalized copy of theta_sd[d]. Falls back
// to the hard label when nothing clears min_weight.
std::map<int, double> graded_labels(const SenseSolution& solution, int d,
                                    int top_n, double min_weight);
std::map<int, double> graded_labels(const SenseSolution& solution, int d);

// Key lines: `lemma instance_id sense/weight [sense/weight ...]`.
// Hard lines carry a single `sense/1.0`; graded weights use 6 decimals.
void write_hard_key(std::ostream& out, const SenseSolution& solution);
void write_graded_key(std::ostream& out, const SenseSolution& solution,
                      int top_n, double min_weight);

}  // namespace wsi
