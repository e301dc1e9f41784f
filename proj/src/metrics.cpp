#include "wsi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wsi/jsonl.hpp"

namespace wsi {

namespace {

void require_same_instances(const Clustering& gold, const Clustering& pred,
                            const char* metric) {
  if (gold.size() == pred.size() &&
      std::equal(gold.begin(), gold.end(), pred.begin(),
                 [](const auto& a, const auto& b) { return a.first == b.first; }))
    return;
  std::ostringstream msg;
  msg << metric << ": instance sets differ;";
  int shown = 0;
  for (const auto& [id, _] : gold)
    if (!pred.count(id) && shown++ < 10) msg << " -" << id;
  for (const auto& [id, _] : pred)
    if (!gold.count(id) && shown++ < 10) msg << " +" << id;
  if (shown > 10) msg << " ...";
  throw ValidationError(msg.str());
}

const std::string& crisp_label(const std::pair<const std::string,
                                               std::map<std::string, double>>& e,
                               const char* metric) {
  if (e.second.size() != 1)
    throw ValidationError(std::string(metric) + ": instance " + e.first +
                          " is not crisp (" + std::to_string(e.second.size()) +
                          " labels)");
  return e.second.begin()->first;
}

// gold-by-pred contingency over crisp clusterings
struct Contingency {
  std::vector<std::vector<double>> n;  // n[g][p]
  std::vector<double> row, col;
  double total = 0;
};

Contingency contingency(const Clustering& gold, const Clustering& pred,
                        const char* metric) {
  require_same_instances(gold, pred, metric);
  std::map<std::string, int> gid, pid;
  for (const auto& e : gold) gid.emplace(crisp_label(e, metric), 0);
  for (const auto& e : pred) pid.emplace(crisp_label(e, metric), 0);
  int next = 0;
  for (auto& [_, i] : gid) i = next++;
  next = 0;
  for (auto& [_, i] : pid) i = next++;

  Contingency c;
  c.n.assign(gid.size(), std::vector<double>(pid.size(), 0.0));
  c.row.assign(gid.size(), 0.0);
  c.col.assign(pid.size(), 0.0);
  auto gp = gold.begin();
  auto pp = pred.begin();
  for (; gp != gold.end(); ++gp, ++pp) {
    const int g = gid.at(crisp_label(*gp, metric));
    const int p = pid.at(crisp_label(*pp, metric));
    c.n[g][p] += 1;
    c.row[g] += 1;
    c.col[p] += 1;
    c.total += 1;
  }
  return c;
}

double entropy(const std::vector<double>& counts, double total) {
  double h = 0;
  for (double x : counts)
    if (x > 0) h -= (x / total) * std::log2(x / total);
  return h;
}

// per-instance label weights, renormalized to sum 1
std::map<std::string, double> weights_of(
    const std::pair<const std::string, std::map<std::string, double>>& e,
    const char* metric) {
  double total = 0;
  for (const auto& [label, w] : e.second) {
    if (w < 0)
      throw ValidationError(std::string(metric) + ": instance " + e.first +
                            " has negative weight for label " + label);
    total += w;
  }
  if (!(total > 0))
    throw ValidationError(std::string(metric) + ": instance " + e.first +
                          " has no positive label weight");
  std::map<std::string, double> out;
  for (const auto& [label, w] : e.second)
    if (w > 0) out[label] = w / total;
  return out;
}

// overlap of two weight maps under min-coupling
double coverage(const std::map<std::string, double>& a,
                const std::map<std::string, double>& b) {
  double cov = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      cov += std::min(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return cov;
}

}  // namespace

double v_measure(const Clustering& gold, const Clustering& pred) {
  const Contingency c = contingency(gold, pred, "v_measure");
  const double h_gold = entropy(c.row, c.total);
  const double h_pred = entropy(c.col, c.total);

  double h_gold_given_pred = 0;
  for (size_t p = 0; p < c.col.size(); ++p) {
    if (c.col[p] == 0) continue;
    double h = 0;
    for (size_t g = 0; g < c.row.size(); ++g) {
      const double x = c.n[g][p];
      if (x > 0) h -= (x / c.col[p]) * std::log2(x / c.col[p]);
    }
    h_gold_given_pred += (c.col[p] / c.total) * h;
  }
  double h_pred_given_gold = 0;
  for (size_t g = 0; g < c.row.size(); ++g) {
    if (c.row[g] == 0) continue;
    double h = 0;
    for (size_t p = 0; p < c.col.size(); ++p) {
      const double x = c.n[g][p];
      if (x > 0) h -= (x / c.row[g]) * std::log2(x / c.row[g]);
    }
    h_pred_given_gold += (c.row[g] / c.total) * h;
  }

  const double hom = h_gold == 0 ? 1.0 : 1.0 - h_gold_given_pred / h_gold;
  const double com = h_pred == 0 ? 1.0 : 1.0 - h_pred_given_gold / h_pred;
  if (hom + com == 0) return 0.0;
  return 2.0 * hom * com / (hom + com);
}

double paired_fscore(const Clustering& gold, const Clustering& pred) {
  const Contingency c = contingency(gold, pred, "paired_fscore");
  auto pairs2 = [](double n) { return n * (n - 1) / 2; };
  double gold_pairs = 0, pred_pairs = 0, both = 0;
  for (double x : c.row) gold_pairs += pairs2(x);
  for (double x : c.col) pred_pairs += pairs2(x);
  for (const auto& row : c.n)
    for (double x : row) both += pairs2(x);

  if (gold_pairs == 0 && pred_pairs == 0) return 1.0;
  if (gold_pairs == 0 || pred_pairs == 0) return 0.0;
  const double precision = both / pred_pairs;
  const double recall = both / gold_pairs;
  if (precision + recall == 0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double fuzzy_bcubed(const Clustering& gold, const Clustering& pred) {
  require_same_instances(gold, pred, "fuzzy_bcubed");
  const size_t n = gold.size();
  std::vector<std::map<std::string, double>> wg, wp;
  wg.reserve(n);
  wp.reserve(n);
  for (const auto& e : gold) wg.push_back(weights_of(e, "fuzzy_bcubed"));
  for (const auto& e : pred) wp.push_back(weights_of(e, "fuzzy_bcubed"));

  // pairwise agreement of predicted vs gold label overlap, self included;
  // precision averages over pairs the prediction links, recall over pairs
  // the gold links
  double precision = 0, recall = 0;
  for (size_t i = 0; i < n; ++i) {
    double p_sum = 0, r_sum = 0;
    int p_cnt = 0, r_cnt = 0;
    for (size_t j = 0; j < n; ++j) {
      const double cp = coverage(wp[i], wp[j]);
      const double cg = coverage(wg[i], wg[j]);
      if (cp > 0) {
        p_sum += std::min(cp, cg) / cp;
        ++p_cnt;
      }
      if (cg > 0) {
        r_sum += std::min(cp, cg) / cg;
        ++r_cnt;
      }
    }
    precision += p_cnt ? p_sum / p_cnt : 0.0;
    recall += r_cnt ? r_sum / r_cnt : 0.0;
  }
  precision /= n;
  recall /= n;
  if (precision + recall == 0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double fuzzy_nmi(const Clustering& gold, const Clustering& pred) {
  require_same_instances(gold, pred, "fuzzy_nmi");
  const double n = static_cast<double>(gold.size());

  // expected contingency under independent per-instance label draws
  std::map<std::string, double> pg, pp;
  std::map<std::pair<std::string, std::string>, double> joint;
  auto ig = gold.begin();
  auto ip = pred.begin();
  for (; ig != gold.end(); ++ig, ++ip) {
    const auto wg = weights_of(*ig, "fuzzy_nmi");
    const auto wp = weights_of(*ip, "fuzzy_nmi");
    for (const auto& [l, a] : wg) {
      pg[l] += a / n;
      for (const auto& [c, b] : wp) joint[{l, c}] += a * b / n;
    }
    for (const auto& [c, b] : wp) pp[c] += b / n;
  }

  double h_g = 0, h_p = 0, mi = 0;
  for (const auto& [_, p] : pg)
    if (p > 0) h_g -= p * std::log2(p);
  for (const auto& [_, p] : pp)
    if (p > 0) h_p -= p * std::log2(p);
  for (const auto& [lc, p] : joint)
    if (p > 0) mi += p * std::log2(p / (pg[lc.first] * pp[lc.second]));

  // entropies below float noise mean a single label on both sides (the
  // marginal masses n*(1/n) need not hit 1.0 exactly)
  const double h_max = std::max(h_g, h_p);
  if (h_max < 1e-9) return 1.0;
  return std::min(1.0, std::max(0.0, mi) / h_max);
}

double geometric_avg(double a, double b) { return std::sqrt(a * b); }

double delta_s(double induced_mean, double actual_mean) {
  return std::abs(induced_mean - actual_mean);
}

double cluster_error(const std::map<std::string, int>& induced,
                     const std::map<std::string, int>& actual) {
  if (induced.size() != actual.size() ||
      !std::equal(induced.begin(), induced.end(), actual.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; }))
    throw ValidationError("cluster_error: word sets differ");
  if (induced.empty()) throw ValidationError("cluster_error: no words");
  double total = 0;
  auto ii = induced.begin();
  auto ia = actual.begin();
  for (; ii != induced.end(); ++ii, ++ia)
    total += std::abs(ii->second - ia->second);
  return total / static_cast<double>(induced.size());
}

double pairwise_f1(const Clustering& gold, const Clustering& pred) {
  return paired_fscore(gold, pred);
}

Clustering harden(const Clustering& clustering) {
  Clustering out;
  for (const auto& e : clustering) {
    if (e.second.empty())
      throw ValidationError("harden: instance " + e.first + " has no labels");
    auto best = e.second.begin();
    for (auto it = std::next(e.second.begin()); it != e.second.end(); ++it)
      if (it->second > best->second) best = it;  // ties keep the earlier key
    out[e.first] = {{best->first, 1.0}};
  }
  return out;
}

int distinct_labels(const Clustering& clustering) {
  std::map<std::string, int> seen;
  for (const auto& e : clustering)
    for (const auto& [label, w] : e.second)
      if (w > 0) seen.emplace(label, 0);
  return static_cast<int>(seen.size());
}

Clustering load_gold_jsonl(const std::string& path) {
  Clustering out;
  for_each_jsonl(path, [&](int lineno, const nlohmann::json& obj) {
    std::string id;
    std::map<std::string, double> senses;
    try {
      id = obj.at("instance_id").get<std::string>();
      senses = obj.at("senses").get<std::map<std::string, double>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (senses.empty())
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": instance " + id + " has no senses");
    for (const auto& [label, w] : senses)
      if (w < 0)
        throw ValidationError(path + ":" + std::to_string(lineno) +
                              ": negative weight for sense " + label);
    if (!out.emplace(id, std::move(senses)).second)
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": duplicate instance_id " + id);
  });
  return out;
}

std::map<std::string, Clustering> load_key_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  std::map<std::string, Clustering> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string lemma, id, part;
    if (!(fields >> lemma >> id)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError(path + ":" + std::to_string(lineno) + ": short key line");
    }
    std::map<std::string, double> senses;
    while (fields >> part) {
      const size_t slash = part.rfind('/');
      if (slash == std::string::npos || slash == 0 || slash + 1 == part.size())
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": bad sense/weight token '" + part + "'");
      double w = 0;
      try {
        size_t used = 0;
        w = std::stod(part.substr(slash + 1), &used);
        if (used != part.size() - slash - 1) throw std::invalid_argument(part);
      } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": bad weight in '" + part + "'");
      }
      senses[part.substr(0, slash)] = w;
    }
    if (senses.empty())
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": key line has no senses");
    if (!out[lemma].emplace(id, std::move(senses)).second)
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": duplicate instance " + id + " for " + lemma);
  }
  return out;
}

Clustering restrict_clustering(const Clustering& clustering,
                               const std::vector<std::string>& ids) {
  Clustering out;
  std::string missing;
  for (const std::string& id : ids) {
    auto it = clustering.find(id);
    if (it == clustering.end()) {
      if (missing.size() < 200) missing += " " + id;
      continue;
    }
    out[id] = it->second;
  }
  if (!missing.empty())
    throw ValidationError("instances missing from clustering:" + missing);
  return out;
}

void finalize_report(EvalReport& report) {
  report.aggregates.clear();

  std::map<std::string, int> metric_names;
  for (const auto& [_, metrics] : report.per_word)
    for (const auto& [name, __] : metrics) metric_names.emplace(name, 0);

  for (const auto& [name, _] : metric_names) {
    double weighted = 0, macro = 0;
    long total_inst = 0;
    int words = 0;
    for (const auto& [word, metrics] : report.per_word) {
      auto it = metrics.find(name);
      if (it == metrics.end()) continue;
      const int n = report.per_word_instances.count(word)
                        ? report.per_word_instances.at(word)
                        : 1;
      weighted += it->second * n;
      total_inst += n;
      macro += it->second;
      ++words;
    }
    if (!words) continue;
    report.aggregates[name + "_weighted"] = weighted / total_inst;
    report.aggregates[name + "_macro"] = macro / words;
  }

  for (const char* kind : {"_weighted", "_macro"}) {
    auto fs = report.aggregates.find(std::string("FS") + kind);
    auto vm = report.aggregates.find(std::string("VM") + kind);
    if (fs != report.aggregates.end() && vm != report.aggregates.end())
      report.aggregates[std::string("AVG") + kind] =
          geometric_avg(fs->second, vm->second);
  }

  if (!report.per_word_induced.empty() && !report.per_word_actual.empty()) {
    double ind = 0, act = 0, err = 0;
    int words = 0;
    for (const auto& [word, induced] : report.per_word_induced) {
      auto it = report.per_word_actual.find(word);
      if (it == report.per_word_actual.end()) continue;
      ind += induced;
      act += it->second;
      err += std::abs(induced - it->second);
      ++words;
    }
    if (words) {
      report.aggregates["delta_S"] = std::abs(ind / words - act / words);
      report.aggregates["cluster_error"] = err / words;
    }
  }
}

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

void write_report_tsv(const std::string& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out << "word\tmetric\tvalue\n";
  for (const auto& [word, metrics] : report.per_word) {
    for (const auto& [name, value] : metrics)
      out << word << '\t' << name << '\t' << fmt6(value) << '\n';
    if (report.per_word_instances.count(word))
      out << word << "\tinstances\t" << report.per_word_instances.at(word)
          << '\n';
    if (report.per_word_induced.count(word))
      out << word << "\tinduced_senses\t"
          << fmt6(report.per_word_induced.at(word)) << '\n';
    if (report.per_word_actual.count(word))
      out << word << "\tactual_senses\t" << fmt6(report.per_word_actual.at(word))
          << '\n';
  }
  for (const auto& [name, value] : report.aggregates)
    out << "ALL\t" << name << '\t' << fmt6(value) << '\n';
}

void write_report_json(const std::string& path, const EvalReport& report,
                       const std::map<std::string, std::string>& config_echo) {
  nlohmann::json j;
  j["config"] = config_echo;
  nlohmann::json words = nlohmann::json::object();
  for (const auto& [word, metrics] : report.per_word) {
    nlohmann::json w = nlohmann::json::object();
    for (const auto& [name, value] : metrics) w[name] = value;
    if (report.per_word_instances.count(word))
      w["instances"] = report.per_word_instances.at(word);
    if (report.per_word_induced.count(word))
      w["induced_senses"] = report.per_word_induced.at(word);
    if (report.per_word_actual.count(word))
      w["actual_senses"] = report.per_word_actual.at(word);
    words[word] = std::move(w);
  }
  j["per_word"] = std::move(words);
  j["aggregates"] = report.aggregates;

  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace wsi
