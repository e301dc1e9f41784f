#include "wsi/induction.hpp"

#include <algorithm>
#include <cstdio>

namespace wsi {

namespace {

// lda keeps its class counts in the topic matrices
bool topic_side(const ModelState& state) {
  return state.hyper.variant == Variant::lda;
}

// unsmoothed row normalization; all-zero -> uniform
std::vector<double> normalize_row(const int* row, int n, bool* flat) {
  long total = 0;
  for (int i = 0; i < n; ++i) total += row[i];
  std::vector<double> p(n);
  if (total == 0) {
    std::fill(p.begin(), p.end(), 1.0 / n);
    if (flat) *flat = true;
    return p;
  }
  for (int i = 0; i < n; ++i) p[i] = static_cast<double>(row[i]) / total;
  if (flat) *flat = false;
  return p;
}

}  // namespace

std::vector<double> sense_distribution(const ModelState& state, int d) {
  const CountsRM& m = topic_side(state) ? state.c_dt : state.c_ds;
  return normalize_row(m.row(d).data(), static_cast<int>(m.cols()), nullptr);
}

std::vector<double> sense_word_distribution(const ModelState& state, int k) {
  const CountsCM& m = topic_side(state) ? state.c_tw : state.c_sw;
  std::vector<int> row(m.cols());
  for (Eigen::Index w = 0; w < m.cols(); ++w) row[w] = m(k, w);
  return normalize_row(row.data(), static_cast<int>(row.size()), nullptr);
}

namespace {

SenseSolution build_solution(std::string lemma,
                             std::vector<std::string> instance_ids,
                             std::vector<std::string> vocab_words,
                             const CountsRM& ds, const CountsCM& sw) {
  const int D = static_cast<int>(ds.rows());
  const int S = static_cast<int>(ds.cols());
  const int V = static_cast<int>(sw.cols());

  SenseSolution sol;
  sol.lemma = std::move(lemma);
  sol.n_senses = S;
  sol.vocab_words = std::move(vocab_words);
  sol.instance_ids = std::move(instance_ids);

  sol.theta_sd.reserve(D);
  sol.flat_instance.resize(D);
  sol.hard_label.resize(D);
  for (int d = 0; d < D; ++d) {
    bool flat = false;
    sol.theta_sd.push_back(normalize_row(ds.row(d).data(), S, &flat));
    sol.flat_instance[d] = flat;
    const std::vector<double>& p = sol.theta_sd.back();
    int best = 0;
    for (int k = 1; k < S; ++k)
      if (p[k] > p[best]) best = k;
    sol.hard_label[d] = best;
    sol.induced_senses.insert(best);
  }

  sol.theta_ws.reserve(S);
  sol.flat_sense.resize(S);
  std::vector<int> row(V);
  for (int k = 0; k < S; ++k) {
    for (int w = 0; w < V; ++w) row[w] = sw(k, w);
    bool flat = false;
    sol.theta_ws.push_back(normalize_row(row.data(), V, &flat));
    sol.flat_sense[k] = flat;
  }
  return sol;
}

}  // namespace

SenseSolution make_solution(const ModelState& state) {
  const Corpus& corpus = *state.corpus;
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const Instance& inst : corpus.instances) ids.push_back(inst.instance_id);
  return build_solution(corpus.target_lemma, std::move(ids),
                        corpus.vocab.words(),
                        topic_side(state) ? state.c_dt : state.c_ds,
                        topic_side(state) ? state.c_tw : state.c_sw);
}

SenseSolution make_solution(const StateSnapshot& snapshot) {
  const ModelState& state = snapshot.state;
  return build_solution(snapshot.lemma, snapshot.instance_ids,
                        snapshot.vocab_words,
                        topic_side(state) ? state.c_dt : state.c_ds,
                        topic_side(state) ? state.c_tw : state.c_sw);
}

std::vector<std::pair<std::string, double>> top_words(
    const SenseSolution& solution, int k, int n,
    const std::set<std::string>& exclude) {
  const std::vector<double>& p = solution.theta_ws.at(k);
  std::vector<int> order;
  order.reserve(p.size());
  for (int w = 0; w < static_cast<int>(p.size()); ++w)
    if (!exclude.count(solution.vocab_words[w])) order.push_back(w);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return p[a] > p[b]; });
  std::vector<std::pair<std::string, double>> out;
  out.reserve(std::min<size_t>(n, order.size()));
  for (int w : order) {
    if (static_cast<int>(out.size()) == n) break;
    out.emplace_back(solution.vocab_words[w], p[w]);
  }
  return out;
}

int induced_sense_count(const SenseSolution& solution) {
  return static_cast<int>(solution.induced_senses.size());
}

int docs_for_sense(const SenseSolution& solution, int k) {
  return static_cast<int>(
      std::count(solution.hard_label.begin(), solution.hard_label.end(), k));
}

std::map<int, double> graded_labels(const SenseSolution& solution, int d,
                                    int top_n, double min_weight) {
  const std::vector<double>& p = solution.theta_sd.at(d);
  std::vector<int> keep;
  for (int k = 0; k < static_cast<int>(p.size()); ++k)
    if (p[k] >= min_weight && p[k] > 0.0) keep.push_back(k);
  std::stable_sort(keep.begin(), keep.end(),
                   [&](int a, int b) { return p[a] > p[b]; });
  if (static_cast<int>(keep.size()) > top_n) keep.resize(top_n);

  std::map<int, double> out;
  if (keep.empty()) {  // nothing cleared the threshold; fall back to argmax
    out[solution.hard_label[d]] = 1.0;
    return out;
  }
  double total = 0.0;
  for (int k : keep) total += p[k];
  for (int k : keep) out[k] = p[k] / total;
  return out;
}

std::map<int, double> graded_labels(const SenseSolution& solution, int d) {
  return graded_labels(solution, d, solution.n_senses, 0.0);
}

void write_hard_key(std::ostream& out, const SenseSolution& solution) {
  for (size_t d = 0; d < solution.instance_ids.size(); ++d)
    out << solution.lemma << ' ' << solution.instance_ids[d] << ' '
        << solution.hard_label[d] << "/1.0\n";
}

void write_graded_key(std::ostream& out, const SenseSolution& solution,
                      int top_n, double min_weight) {
  char buf[32];
  for (size_t d = 0; d < solution.instance_ids.size(); ++d) {
    out << solution.lemma << ' ' << solution.instance_ids[d];
    for (const auto& [k, w] :
         graded_labels(solution, static_cast<int>(d), top_n, min_weight)) {
      std::snprintf(buf, sizeof(buf), "%.6f", w);
      out << ' ' << k << '/' << buf;
    }
    out << '\n';
  }
}

}  // namespace wsi
