#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "wsi/corpus.hpp"
#include "wsi/experiment.hpp"
#include "wsi/induction.hpp"
#include "wsi/metrics.hpp"
#include "wsi/model.hpp"
#include "wsi/sampler.hpp"
#include "wsi/uand.hpp"

namespace {

struct Options {
  wsi::Hyperparams hyper;
  std::string variant_name = "full";
  std::string corpus_path;
  std::string gold_path;
  std::string out_dir = "out";
  int workers = 1;
  bool topics_given = false;

  std::vector<int> s_values;  // sweep / uand

  std::string state_path;  // inspect
  int sense = -1;
  int top_n = 10;

  std::string synth_kind = "wsi";  // synth
  int true_senses = 3;
  int docs_per_sense = 50;
  int topics_per_sense = 3;
  int vocab_size = 300;
  int doc_length = 45;
  int authors = 3;
  int records_per_author = 20;
};

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// everything that shapes the result; never execution-site details like
// out_dir or workers, so reports stay identical across machines/schedules
std::map<std::string, std::string> config_echo(const Options& opt,
                                               const std::string& command) {
  std::map<std::string, std::string> echo;
  echo["command"] = command;
  echo["corpus"] = opt.corpus_path;
  echo["gold"] = opt.gold_path;
  echo["alpha"] = fmt_num(opt.hyper.alpha);
  echo["beta"] = fmt_num(opt.hyper.beta);
  echo["gamma"] = fmt_num(opt.hyper.gamma);
  echo["senses"] = std::to_string(opt.hyper.senses);
  echo["topics"] = std::to_string(opt.hyper.topics);
  echo["window"] = std::to_string(opt.hyper.window);
  echo["iterations"] = std::to_string(opt.hyper.iterations);
  echo["runs"] = std::to_string(opt.hyper.runs);
  echo["seed"] = std::to_string(opt.hyper.seed);
  echo["variant"] = wsi::variant_name(opt.hyper.variant);
  if (!opt.s_values.empty()) {
    std::string list;
    for (int s : opt.s_values) list += (list.empty() ? "" : ",") + std::to_string(s);
    echo["s_values"] = list;
  }
  return echo;
}

void ensure_out_dir(const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw wsi::IoError("cannot create directory: " + out_dir);
}

std::vector<const wsi::Corpus*> corpus_ptrs(const std::vector<wsi::Corpus>& v) {
  std::vector<const wsi::Corpus*> out;
  out.reserve(v.size());
  for (const wsi::Corpus& c : v) out.push_back(&c);
  return out;
}

int cmd_run(const Options& opt) {
  if (opt.corpus_path.empty()) throw wsi::ConfigError("run requires --corpus");
  const std::vector<wsi::Corpus> corpora =
      wsi::load_corpus(opt.corpus_path, opt.hyper.window);

  wsi::Clustering gold;
  const bool with_gold = !opt.gold_path.empty();
  if (with_gold) gold = wsi::load_gold_jsonl(opt.gold_path);

  const auto ptrs = corpus_ptrs(corpora);
  const auto outcomes = wsi::run_all(ptrs, opt.hyper, opt.workers);
  wsi::EvalReport report = wsi::evaluate_outcomes(
      ptrs, outcomes, with_gold ? &gold : nullptr, opt.hyper.runs);

  ensure_out_dir(opt.out_dir);
  wsi::write_outcome_files(opt.out_dir, ptrs, outcomes, opt.hyper.runs);
  wsi::write_report_tsv(opt.out_dir + "/report.tsv", report);
  wsi::write_report_json(opt.out_dir + "/report.json", report,
                         config_echo(opt, "run"));

  std::cout << "words: " << corpora.size() << ", runs: " << opt.hyper.runs
            << "\n";
  for (const auto& [name, value] : report.aggregates)
    std::cout << name << ": " << fmt_num(value) << "\n";
  std::cout << "report: " << opt.out_dir << "/report.tsv\n";
  return 0;
}

int cmd_sweep(const Options& opt) {
  if (opt.corpus_path.empty()) throw wsi::ConfigError("sweep requires --corpus");
  if (opt.gold_path.empty())
    throw wsi::ConfigError("sweep requires --gold for actual sense counts");
  if (opt.s_values.empty()) throw wsi::ConfigError("sweep requires --s-values");

  const std::vector<wsi::Corpus> corpora =
      wsi::load_corpus(opt.corpus_path, opt.hyper.window);
  const wsi::Clustering gold = wsi::load_gold_jsonl(opt.gold_path);
  const auto ptrs = corpus_ptrs(corpora);

  // actual sense count per word, from hardened gold
  std::map<std::string, int> actual;
  for (const wsi::Corpus* c : ptrs) {
    std::vector<std::string> ids;
    for (const wsi::Instance& inst : c->instances)
      ids.push_back(inst.instance_id);
    actual[c->target_lemma] =
        wsi::distinct_labels(wsi::harden(wsi::restrict_clustering(gold, ids)));
  }

  const std::vector<wsi::Variant> variants = {wsi::Variant::full,
                                              wsi::Variant::lda};
  const int runs = opt.hyper.runs;
  const int n_words = static_cast<int>(ptrs.size());
  const int jobs_per_cell = n_words * runs;

  // one flat job list over (variant, S, word, run) for full pool use
  struct Cell {
    wsi::Variant variant;
    int senses;
  };
  std::vector<Cell> cells;
  for (wsi::Variant v : variants)
    for (int s : opt.s_values) cells.push_back({v, s});

  std::vector<wsi::Hyperparams> cell_hyper;
  for (const Cell& cell : cells) {
    wsi::Hyperparams h = opt.hyper;
    h.variant = cell.variant;
    h.senses = cell.senses;
    if (!opt.topics_given) h.topics = 2 * cell.senses;
    h.validate();
    cell_hyper.push_back(h);
  }

  const int n_jobs = static_cast<int>(cells.size()) * jobs_per_cell;
  const auto counts = wsi::parallel_map<int>(n_jobs, opt.workers, [&](int job) {
    const int cell = job / jobs_per_cell;
    const int word = (job % jobs_per_cell) / runs;
    const int run = job % runs;
    wsi::ChainResult chain = wsi::run_chain(*ptrs[word], cell_hyper[cell], run);
    return wsi::induced_sense_count(wsi::make_solution(chain.state));
  });

  ensure_out_dir(opt.out_dir);
  const std::string table_path = opt.out_dir + "/sweep.tsv";
  std::ofstream table(table_path);
  if (!table) throw wsi::IoError("cannot write file: " + table_path);
  table << "variant\tsenses\tcluster_error\n";
  std::cout << "variant\tsenses\tcluster_error\n";
  for (size_t cell = 0; cell < cells.size(); ++cell) {
    double err = 0;  // cluster error per run, averaged over runs
    for (int run = 0; run < runs; ++run) {
      std::map<std::string, int> induced;
      for (int word = 0; word < n_words; ++word)
        induced[ptrs[word]->target_lemma] =
            counts[cell * jobs_per_cell + word * runs + run];
      err += wsi::cluster_error(induced, actual);
    }
    err /= runs;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", err);
    table << wsi::variant_name(cells[cell].variant) << '\t'
          << cells[cell].senses << '\t' << buf << '\n';
    std::cout << wsi::variant_name(cells[cell].variant) << '\t'
              << cells[cell].senses << '\t' << buf << '\n';
  }
  return 0;
}

int cmd_uand(const Options& opt) {
  if (opt.corpus_path.empty())
    throw wsi::ConfigError("uand requires --corpus (uand-jsonl records)");
  wsi::UandDataset dataset = wsi::load_uand_dataset(opt.corpus_path);
  if (dataset.corpora.empty())
    throw wsi::ConfigError("no records in " + opt.corpus_path);

  std::vector<const wsi::Corpus*> ptrs;
  std::vector<const wsi::Clustering*> golds;
  for (const auto& [name, corpus] : dataset.corpora) {
    auto it = dataset.gold.find(name);
    if (it == dataset.gold.end() ||
        static_cast<int>(it->second.size()) != corpus.size())
      throw wsi::ValidationError("name '" + name +
                                 "' has records without gold_author_id");
    ptrs.push_back(&corpus);
    golds.push_back(&it->second);
  }

  const std::vector<int> s_values =
      opt.s_values.empty() ? std::vector<int>{5, 25, 50, 100} : opt.s_values;
  const int runs = opt.hyper.runs;
  const int n_names = static_cast<int>(ptrs.size());
  const int jobs_per_s = n_names * runs;

  std::vector<wsi::Hyperparams> s_hyper;
  for (int s : s_values) {
    wsi::Hyperparams h = opt.hyper;
    h.senses = s;
    if (!opt.topics_given) h.topics = 2 * s;
    h.validate();
    s_hyper.push_back(h);
  }

  const int n_jobs = static_cast<int>(s_values.size()) * jobs_per_s;
  const auto f1s = wsi::parallel_map<double>(n_jobs, opt.workers, [&](int job) {
    const int si = job / jobs_per_s;
    const int name = (job % jobs_per_s) / runs;
    const int run = job % runs;
    wsi::ChainResult chain = wsi::run_chain(*ptrs[name], s_hyper[si], run);
    const wsi::SenseSolution sol = wsi::make_solution(chain.state);
    wsi::Clustering pred;
    for (size_t d = 0; d < sol.instance_ids.size(); ++d)
      pred[sol.instance_ids[d]] = {{std::to_string(sol.hard_label[d]), 1.0}};
    return wsi::pairwise_f1(*golds[name], pred);
  });

  ensure_out_dir(opt.out_dir);
  const std::string table_path = opt.out_dir + "/uand.tsv";
  std::ofstream table(table_path);
  if (!table) throw wsi::IoError("cannot write file: " + table_path);
  table << "senses\tname\tpairwise_f1\n";
  std::cout << "senses\tname\tpairwise_f1\n";
  auto emit = [&](int senses, const std::string& name, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    table << senses << '\t' << name << '\t' << buf << '\n';
    std::cout << senses << '\t' << name << '\t' << buf << '\n';
  };
  for (size_t si = 0; si < s_values.size(); ++si) {
    double weighted = 0, macro = 0;
    long total = 0;
    for (int name = 0; name < n_names; ++name) {
      double mean = 0;
      for (int run = 0; run < runs; ++run)
        mean += f1s[si * jobs_per_s + name * runs + run];
      mean /= runs;
      emit(s_values[si], ptrs[name]->target_lemma, mean);
      weighted += mean * ptrs[name]->size();
      total += ptrs[name]->size();
      macro += mean;
    }
    emit(s_values[si], "ALL_weighted", weighted / total);
    emit(s_values[si], "ALL_macro", macro / n_names);
  }
  return 0;
}

int cmd_inspect(const Options& opt) {
  if (opt.state_path.empty()) throw wsi::ConfigError("inspect requires --state");
  std::ifstream in(opt.state_path);
  if (!in) throw wsi::IoError("cannot open file: " + opt.state_path);
  std::stringstream buf;
  buf << in.rdbuf();
  const wsi::StateSnapshot snap = wsi::deserialize_state(buf.str());
  const wsi::SenseSolution sol = wsi::make_solution(snap);

  if (opt.sense >= 0 && opt.sense >= sol.n_senses)
    throw wsi::ConfigError("sense id " + std::to_string(opt.sense) +
                           " out of range (0.." +
                           std::to_string(sol.n_senses - 1) + ")");

  std::cout << "target: " << snap.lemma << ", senses: " << sol.n_senses
            << ", instances: " << sol.instance_ids.size() << ", variant: "
            << wsi::variant_name(snap.state.hyper.variant) << "\n";
  const std::set<std::string> exclude = {snap.lemma};
  for (int k = 0; k < sol.n_senses; ++k) {
    if (opt.sense >= 0 && k != opt.sense) continue;
    const int docs = wsi::docs_for_sense(sol, k);
    std::cout << "sense " << k << (docs == 0 ? " *" : "") << " #docs " << docs
              << ":";
    for (const auto& [word, prob] : wsi::top_words(sol, k, opt.top_n, exclude))
      std::cout << ' ' << word;
    std::cout << "\n";
  }
  return 0;
}

int cmd_synth(const Options& opt) {
  ensure_out_dir(opt.out_dir);
  if (opt.synth_kind == "wsi") {
    const wsi::SyntheticCorpus sc = wsi::generate_synthetic(
        opt.true_senses, opt.docs_per_sense, opt.topics_per_sense,
        opt.vocab_size, opt.doc_length, opt.hyper.seed);
    wsi::write_corpus_jsonl(opt.out_dir + "/corpus.jsonl", {&sc.corpus});
    wsi::write_gold_jsonl(opt.out_dir + "/gold.jsonl", sc.gold);
    std::cout << "instances: " << sc.corpus.size()
              << ", vocab: " << sc.corpus.vocab.size() << "\n"
              << "corpus: " << opt.out_dir << "/corpus.jsonl\n"
              << "gold: " << opt.out_dir << "/gold.jsonl\n";
    return 0;
  }
  if (opt.synth_kind == "uand") {
    const auto records = wsi::generate_uand_records(
        opt.authors, opt.records_per_author, opt.hyper.seed);
    wsi::write_uand_jsonl(opt.out_dir + "/uand.jsonl", records);
    std::cout << "records: " << records.size() << "\n"
              << "dataset: " << opt.out_dir << "/uand.jsonl\n";
    return 0;
  }
  throw wsi::ConfigError("unknown synth kind '" + opt.synth_kind +
                         "' (expected wsi or uand)");
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"word sense induction via sense-topic Gibbs sampling"};
  app.require_subcommand(1);
  app.fallthrough();  // flags stay valid after the subcommand name
  app.set_config("--config");
  app.option_defaults()->always_capture_default();

  app.add_option("--corpus", opt.corpus_path,
                 "corpus-jsonl (run/sweep) or uand-jsonl (uand)");
  app.add_option("--gold", opt.gold_path, "gold-jsonl with sense labels");
  app.add_option("--out-dir", opt.out_dir, "output directory");
  app.add_option("--alpha", opt.hyper.alpha, "Dirichlet prior on mixtures");
  app.add_option("--beta", opt.hyper.beta, "Dirichlet prior on word dists");
  app.add_option("--gamma", opt.hyper.gamma, "prior on the context switch");
  app.add_option("--senses", opt.hyper.senses, "number of senses S");
  auto* topics_opt =
      app.add_option("--topics", opt.hyper.topics, "number of topics (default 2*S)");
  app.add_option("--window", opt.hyper.window, "local context half-width");
  app.add_option("--iterations", opt.hyper.iterations, "Gibbs sweeps per run");
  app.add_option("--runs", opt.hyper.runs, "independent chains per word");
  app.add_option("--seed", opt.hyper.seed, "base seed");
  app.add_option("--variant", opt.variant_name,
                 "full, no_pairs, no_switch or lda");
  app.add_option("--workers", opt.workers, "parallel jobs");
  app.add_option("--s-values", opt.s_values, "S values (sweep, uand)")
      ->delimiter(',');
  app.add_option("--state", opt.state_path, "state snapshot (inspect)");
  app.add_option("--sense", opt.sense, "sense id to inspect (default: all)");
  app.add_option("--top", opt.top_n, "words per sense (inspect)");
  app.add_option("--kind", opt.synth_kind, "synth dataset kind: wsi or uand");
  app.add_option("--true-senses", opt.true_senses, "synth: true sense count");
  app.add_option("--docs-per-sense", opt.docs_per_sense, "synth: docs per sense");
  app.add_option("--topics-per-sense", opt.topics_per_sense,
                 "synth: topics per sense");
  app.add_option("--vocab", opt.vocab_size, "synth: content vocabulary size");
  app.add_option("--doc-length", opt.doc_length, "synth: tokens per document");
  app.add_option("--authors", opt.authors, "synth uand: author count");
  app.add_option("--records-per-author", opt.records_per_author,
                 "synth uand: records per author");

  auto* run_cmd = app.add_subcommand("run", "train, induce and evaluate");
  auto* sweep_cmd =
      app.add_subcommand("sweep", "cluster error across S values");
  auto* uand_cmd =
      app.add_subcommand("uand", "author name disambiguation pipeline");
  auto* inspect_cmd =
      app.add_subcommand("inspect", "top words per sense from a snapshot");
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic dataset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    opt.hyper.variant = wsi::parse_variant(opt.variant_name);
    opt.topics_given = topics_opt->count() > 0;
    if (!opt.topics_given) opt.hyper.topics = 2 * opt.hyper.senses;
    if (opt.workers < 1) throw wsi::ConfigError("workers must be >= 1");

    if (run_cmd->parsed() || sweep_cmd->parsed() || uand_cmd->parsed())
      opt.hyper.validate();
    if (run_cmd->parsed()) return cmd_run(opt);
    if (sweep_cmd->parsed()) return cmd_sweep(opt);
    if (uand_cmd->parsed()) return cmd_uand(opt);
    if (inspect_cmd->parsed()) return cmd_inspect(opt);
    if (synth_cmd->parsed()) return cmd_synth(opt);
    return 2;  // unreachable: a subcommand is required
  } catch (const wsi::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const wsi::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const wsi::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
