#pragma once

#include <map>
#include <string>
#include <vector>

#include "wsi/errors.hpp"

namespace wsi {

// instance_id -> label -> weight. Crisp clusterings carry exactly one label
// with weight 1; graded weights are nonnegative and sum to 1 per instance.
using Clustering = std::map<std::string, std::map<std::string, double>>;

// All metrics return values in [0, 1] and require the same instance set on
// both sides (ValidationError listing the symmetric difference otherwise).
// v_measure and paired_fscore additionally require crisp inputs.

// harmonic mean of entropy-based homogeneity and completeness (log base 2);
// H(gold)=0 -> h=1, H(pred)=0 -> c=1, h=c=0 -> V=0
double v_measure(const Clustering& gold, const Clustering& pred);

// F1 over same-cluster instance pairs; both pair sets empty -> 1,
// exactly one empty -> 0
double paired_fscore(const Clustering& gold, const Clustering& pred);

// B-cubed F1 generalized to graded labels via min-coupling pair agreement
// (self-pairs included); equals classic B-cubed on crisp inputs
double fuzzy_bcubed(const Clustering& gold, const Clustering& pred);

// mutual information of the expected label contingency, normalized by the
// larger marginal entropy; equals classic max-normalized NMI on crisp
// inputs; both marginal entropies zero -> 1
double fuzzy_nmi(const Clustering& gold, const Clustering& pred);

double geometric_avg(double a, double b);  // sqrt(a*b), input scale preserved

double delta_s(double induced_mean, double actual_mean);

// mean absolute difference of per-word sense counts; same key sets required
double cluster_error(const std::map<std::string, int>& induced,
                     const std::map<std::string, int>& actual);

double pairwise_f1(const Clustering& gold, const Clustering& pred);

// argmax per instance, ties toward the lexicographically smallest label
Clustering harden(const Clustering& clustering);

int distinct_labels(const Clustering& clustering);

// gold-jsonl: one object per line, keys instance_id and senses (label ->
// weight map, weights summing to 1)
Clustering load_gold_jsonl(const std::string& path);

// key lines `lemma instance_id sense/weight [sense/weight ...]`, grouped
// by lemma
std::map<std::string, Clustering> load_key_file(const std::string& path);

// the sub-clustering for the given ids; missing ids -> ValidationError
Clustering restrict_clustering(const Clustering& clustering,
                               const std::vector<std::string>& ids);

// Per-word metric values (percent scale), run-averaged upstream, plus the
// weights and sense counts needed to rebuild every aggregate.
struct EvalReport {
  std::map<std::string, std::map<std::string, double>> per_word;  // word -> metric -> value
  std::map<std::string, int> per_word_instances;
  std::map<std::string, double> per_word_induced;  // mean induced over runs
  std::map<std::string, double> per_word_actual;
  std::map<std::string, double> aggregates;
};

// Fills aggregates: <metric>_weighted (instance-weighted), <metric>_macro,
// AVG over the paired-F/V-measure pair, delta_S and cluster_error.
void finalize_report(EvalReport& report);

void write_report_tsv(const std::string& path, const EvalReport& report);
void write_report_json(const std::string& path, const EvalReport& report,
                       const std::map<std::string, std::string>& config_echo);

}  // namespace wsi
