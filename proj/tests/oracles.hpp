#pragma once

// Independent reference implementations used to check the library. Everything
// here is written naively from first principles: sums are recomputed from the
// raw count matrices, probabilities keep every factor, metrics enumerate pairs
// and contingency cells directly. Keep this file free of calls into the fast
// paths it is meant to check.

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wsi/corpus.hpp"
#include "wsi/metrics.hpp"
#include "wsi/model.hpp"
#include "wsi/rng.hpp"

namespace oracle {

// ---- conditional distributions ------------------------------------------

inline std::vector<double> global_conditional(const wsi::ModelState& st, int d, int w) {
  const int S = st.n_senses, T = st.n_topics;
  const int V = static_cast<int>(st.c_sw.cols());
  const double a = st.hyper.alpha, b = st.hyper.beta, g = st.hyper.gamma;

  double dx_d = 0;
  for (int r = 0; r < 2; ++r) dx_d += st.c_dx(d, r);
  double ds_d = 0;
  for (int k = 0; k < S; ++k) ds_d += st.c_ds(d, k);
  double dt_d = 0;
  for (int j = 0; j < T; ++j) dt_d += st.c_dt(d, j);

  std::vector<double> p(S + T, 0.0);
  for (int k = 0; k < S; ++k) {
    double sw_k = 0;
    for (int v = 0; v < V; ++v) sw_k += st.c_sw(k, v);
    p[k] = (st.c_dx(d, 0) + g) / (dx_d + 2 * g) *
           (st.c_ds(d, k) + a) / (ds_d + S * a) *
           (st.c_sw(k, w) + b) / (sw_k + V * b);
  }
  for (int j = 0; j < T; ++j) {
    double tw_j = 0;
    for (int v = 0; v < V; ++v) tw_j += st.c_tw(j, v);
    p[S + j] = (st.c_dx(d, 1) + g) / (dx_d + 2 * g) *
               (st.c_dt(d, j) + a) / (dt_d + T * a) *
               (st.c_tw(j, w) + b) / (tw_j + V * b);
  }
  double total = 0;
  for (double x : p) total += x;
  for (double& x : p) x /= total;
  return p;
}

inline std::vector<double> local_conditional(const wsi::ModelState& st, int d,
                                             int w_l, int w_t, bool with_target) {
  const int S = st.n_senses, T = st.n_topics;
  const int V = static_cast<int>(st.c_sw.cols());
  const double a = st.hyper.alpha, b = st.hyper.beta;

  double ds_d = 0;
  for (int k = 0; k < S; ++k) ds_d += st.c_ds(d, k);
  double dt_d = 0;
  for (int j = 0; j < T; ++j) dt_d += st.c_dt(d, j);
  double st_total = 0;
  for (int k = 0; k < S; ++k)
    for (int j = 0; j < T; ++j) st_total += st.c_st(k, j);

  std::vector<double> p(S * T, 0.0);
  for (int k = 0; k < S; ++k) {
    double sw_k = 0;
    for (int v = 0; v < V; ++v) sw_k += st.c_sw(k, v);
    double st_row = 0;
    for (int j = 0; j < T; ++j) st_row += st.c_st(k, j);
    for (int j = 0; j < T; ++j) {
      double tw_j = 0;
      for (int v = 0; v < V; ++v) tw_j += st.c_tw(j, v);
      double st_col = 0;
      for (int kk = 0; kk < S; ++kk) st_col += st.c_st(kk, j);

      double f1 = (st.c_dt(d, j) + a) / (dt_d + T * a);
      double f2 = (st.c_ds(d, k) + a) / (ds_d + S * a);
      double f3 = (st.c_tw(j, w_l) + b) / (tw_j + V * b);
      double f4 = (st.c_sw(k, w_l) + b) / (sw_k + V * b);
      double f5 = with_target ? (st.c_sw(k, w_t) + b) / (sw_k + V * b + 1) : 1.0;
      double f6 = (st.c_st(k, j) + a) / (st_row + T * a);
      double f7 = (st.c_st(k, j) + a) / (st_col + S * a);
      double f8 = (st.c_st(k, j) + a) / (st_total + S * T * a);
      p[k * T + j] = f1 * f2 * f3 * f4 * f5 * f6 * f7 * f8;
    }
  }
  double total = 0;
  for (double x : p) total += x;
  for (double& x : p) x /= total;
  return p;
}

inline std::vector<double> topic_conditional(const wsi::ModelState& st, int d, int w) {
  const int T = st.n_topics;
  const int V = static_cast<int>(st.c_tw.cols());
  const double a = st.hyper.alpha, b = st.hyper.beta;
  double dt_d = 0;
  for (int j = 0; j < T; ++j) dt_d += st.c_dt(d, j);
  std::vector<double> p(T, 0.0);
  for (int j = 0; j < T; ++j) {
    double tw_j = 0;
    for (int v = 0; v < V; ++v) tw_j += st.c_tw(j, v);
    p[j] = (st.c_dt(d, j) + a) / (dt_d + T * a) *
           (st.c_tw(j, w) + b) / (tw_j + V * b);
  }
  double total = 0;
  for (double x : p) total += x;
  for (double& x : p) x /= total;
  return p;
}

// ---- crisp clustering metrics on integer label vectors -------------------

inline double entropy2(const std::map<int, int>& counts, int n) {
  double h = 0;
  for (const auto& [label, c] : counts) {
    if (c == 0) continue;
    double q = static_cast<double>(c) / n;
    h -= q * std::log2(q);
  }
  return h;
}

inline double v_measure(const std::vector<int>& gold, const std::vector<int>& pred) {
  const int n = static_cast<int>(gold.size());
  std::map<int, int> ng, np;
  std::map<std::pair<int, int>, int> joint;
  for (int i = 0; i < n; ++i) {
    ng[gold[i]]++;
    np[pred[i]]++;
    joint[{gold[i], pred[i]}]++;
  }
  double hg = entropy2(ng, n), hp = entropy2(np, n);

  double h_g_given_p = 0;
  for (const auto& [cell, c] : joint) {
    double q = static_cast<double>(c) / n;
    h_g_given_p -= q * std::log2(static_cast<double>(c) / np[cell.second]);
  }
  double h_p_given_g = 0;
  for (const auto& [cell, c] : joint) {
    double q = static_cast<double>(c) / n;
    h_p_given_g -= q * std::log2(static_cast<double>(c) / ng[cell.first]);
  }
  double h = hg == 0 ? 1.0 : 1.0 - h_g_given_p / hg;
  double c = hp == 0 ? 1.0 : 1.0 - h_p_given_g / hp;
  if (h + c == 0) return 0.0;
  return 2.0 * h * c / (h + c);
}

inline double paired_fscore(const std::vector<int>& gold, const std::vector<int>& pred) {
  const int n = static_cast<int>(gold.size());
  long tp = 0, in_gold = 0, in_pred = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool g = gold[i] == gold[j], p = pred[i] == pred[j];
      in_gold += g;
      in_pred += p;
      tp += g && p;
    }
  if (in_gold == 0 && in_pred == 0) return 1.0;
  if (in_gold == 0 || in_pred == 0) return 0.0;
  double prec = static_cast<double>(tp) / in_pred;
  double rec = static_cast<double>(tp) / in_gold;
  if (prec + rec == 0) return 0.0;
  return 2 * prec * rec / (prec + rec);
}

inline double bcubed_f1(const std::vector<int>& gold, const std::vector<int>& pred) {
  const int n = static_cast<int>(gold.size());
  double psum = 0, rsum = 0;
  for (int i = 0; i < n; ++i) {
    int same_pred = 0, same_gold = 0, same_both = 0;
    for (int j = 0; j < n; ++j) {
      bool g = gold[i] == gold[j], p = pred[i] == pred[j];
      same_pred += p;
      same_gold += g;
      same_both += g && p;
    }
    psum += static_cast<double>(same_both) / same_pred;
    rsum += static_cast<double>(same_both) / same_gold;
  }
  double prec = psum / n, rec = rsum / n;
  if (prec + rec == 0) return 0.0;
  return 2 * prec * rec / (prec + rec);
}

inline double nmi(const std::vector<int>& gold, const std::vector<int>& pred) {
  const int n = static_cast<int>(gold.size());
  std::map<int, int> ng, np;
  std::map<std::pair<int, int>, int> joint;
  for (int i = 0; i < n; ++i) {
    ng[gold[i]]++;
    np[pred[i]]++;
    joint[{gold[i], pred[i]}]++;
  }
  double hg = entropy2(ng, n), hp = entropy2(np, n);
  if (hg == 0 && hp == 0) return 1.0;
  double hj = 0;
  for (const auto& [cell, c] : joint) {
    double q = static_cast<double>(c) / n;
    hj -= q * std::log2(q);
  }
  double mi = hg + hp - hj;
  if (mi < 0) mi = 0;
  double denom = std::max(hg, hp);
  if (denom == 0) return 0.0;
  return mi / denom;
}

// all set partitions of {0..n-1} as restricted growth strings
inline std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> rgs(n, 0);
  while (true) {
    out.push_back(rgs);
    int i = n - 1;
    for (; i > 0; --i) {
      int cap = 0;
      for (int j = 0; j < i; ++j) cap = std::max(cap, rgs[j]);
      if (rgs[i] <= cap) break;
    }
    if (i == 0) break;
    rgs[i]++;
    for (int j = i + 1; j < n; ++j) rgs[j] = 0;
  }
  return out;
}

inline wsi::Clustering to_clustering(const std::vector<int>& labels) {
  wsi::Clustering c;
  for (size_t i = 0; i < labels.size(); ++i)
    c["i" + std::to_string(i)] = {{"c" + std::to_string(labels[i]), 1.0}};
  return c;
}

// ---- random fixtures for equivalence sweeps ------------------------------

inline wsi::Corpus random_corpus(wsi::Rng& rng, int max_docs, int vocab_limit) {
  int n_docs = 1 + static_cast<int>(rng.next_below(max_docs));
  std::vector<wsi::Instance> insts;
  for (int d = 0; d < n_docs; ++d) {
    int len = 4 + static_cast<int>(rng.next_below(5));
    wsi::Instance inst;
    inst.instance_id = "x" + std::to_string(d);
    inst.target_lemma = "w0";
    inst.target_index = static_cast<int>(rng.next_below(len));
    for (int t = 0; t < len; ++t)
      inst.tokens.push_back("w" + std::to_string(rng.next_below(vocab_limit)));
    inst.tokens[inst.target_index] = "w0";
    insts.push_back(std::move(inst));
  }
  int window = 1 + static_cast<int>(rng.next_below(3));
  return wsi::make_corpus("w0", std::move(insts), window);
}

inline wsi::Hyperparams random_hypers(wsi::Rng& rng, int max_classes) {
  wsi::Hyperparams h;
  h.alpha = 0.05 + rng.next_double() * 0.95;
  h.beta = 0.01 + rng.next_double() * 0.5;
  h.gamma = 0.05 + rng.next_double() * 0.95;
  h.senses = 1 + static_cast<int>(rng.next_below(max_classes));
  h.topics = 1 + static_cast<int>(rng.next_below(max_classes));
  h.iterations = 1;
  h.runs = 1;
  return h;
}

}  // namespace oracle
