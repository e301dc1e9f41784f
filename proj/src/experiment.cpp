#include "wsi/experiment.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>

namespace wsi {

std::vector<RunOutcome> run_all(const std::vector<const Corpus*>& corpora,
                                const Hyperparams& hyper, int workers) {
  const int runs = hyper.runs;
  const int n_jobs = static_cast<int>(corpora.size()) * runs;
  return parallel_map<RunOutcome>(n_jobs, workers, [&](int job) {
    const Corpus& corpus = *corpora[job / runs];
    const int run_index = job % runs;
    ChainResult chain = run_chain(corpus, hyper, run_index);
    RunOutcome out;
    out.solution = make_solution(chain.state);
    out.snapshot = serialize_state(chain.state, run_index, chain.rng_state);
    return out;
  });
}

EvalReport evaluate_outcomes(const std::vector<const Corpus*>& corpora,
                             const std::vector<RunOutcome>& outcomes,
                             const Clustering* gold, int runs) {
  EvalReport report;
  for (size_t c = 0; c < corpora.size(); ++c) {
    const Corpus& corpus = *corpora[c];
    const std::string& word = corpus.target_lemma;
    report.per_word_instances[word] = corpus.size();

    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const Instance& inst : corpus.instances)
      ids.push_back(inst.instance_id);

    Clustering gold_word, gold_hard;
    if (gold) {
      gold_word = restrict_clustering(*gold, ids);
      gold_hard = harden(gold_word);
      report.per_word_actual[word] = distinct_labels(gold_hard);
    }

    double induced = 0;
    std::map<std::string, double> sums;  // metric -> sum over runs
    for (int r = 0; r < runs; ++r) {
      const SenseSolution& sol = outcomes[c * runs + r].solution;
      induced += induced_sense_count(sol);
      if (!gold) continue;

      Clustering pred_hard, pred_graded;
      for (size_t d = 0; d < ids.size(); ++d) {
        pred_hard[ids[d]] = {{std::to_string(sol.hard_label[d]), 1.0}};
        std::map<std::string, double> w;
        for (const auto& [k, v] : graded_labels(sol, static_cast<int>(d)))
          w[std::to_string(k)] = v;
        pred_graded[ids[d]] = std::move(w);
      }
      sums["FS"] += 100.0 * paired_fscore(gold_hard, pred_hard);
      sums["VM"] += 100.0 * v_measure(gold_hard, pred_hard);
      sums["FBC"] += 100.0 * fuzzy_bcubed(gold_word, pred_graded);
      sums["FNMI"] += 100.0 * fuzzy_nmi(gold_word, pred_graded);
    }
    report.per_word_induced[word] = induced / runs;
    for (const auto& [name, sum] : sums)
      report.per_word[word][name] = sum / runs;
  }
  finalize_report(report);
  return report;
}

std::string sanitize_filename(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (unsigned char c : name)
    out.push_back(std::isalnum(c) || c == '-' || c == '.' ? c : '_');
  return out;
}

void write_outcome_files(const std::string& out_dir,
                         const std::vector<const Corpus*>& corpora,
                         const std::vector<RunOutcome>& outcomes, int runs) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory: " + out_dir);

  for (int r = 0; r < runs; ++r) {
    const std::string hard_path = out_dir + "/run" + std::to_string(r) + ".hard.key";
    const std::string graded_path =
        out_dir + "/run" + std::to_string(r) + ".graded.key";
    std::ofstream hard(hard_path), graded(graded_path);
    if (!hard) throw IoError("cannot write file: " + hard_path);
    if (!graded) throw IoError("cannot write file: " + graded_path);
    for (size_t c = 0; c < corpora.size(); ++c) {
      const SenseSolution& sol = outcomes[c * runs + r].solution;
      write_hard_key(hard, sol);
      write_graded_key(graded, sol, sol.n_senses, 0.0);
    }
  }

  for (size_t c = 0; c < corpora.size(); ++c) {
    for (int r = 0; r < runs; ++r) {
      const std::string path = out_dir + "/state_" +
                               sanitize_filename(corpora[c]->target_lemma) +
                               "_run" + std::to_string(r) + ".json";
      std::ofstream out(path);
      if (!out) throw IoError("cannot write file: " + path);
      out << outcomes[c * runs + r].snapshot << '\n';
    }
  }
}

}  // namespace wsi
