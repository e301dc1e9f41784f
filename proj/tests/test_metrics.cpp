#include <doctest.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "testutil.hpp"
#include "wsi/errors.hpp"
#include "wsi/metrics.hpp"
#include "wsi/rng.hpp"

using namespace wsi;
using oracle::to_clustering;

namespace {

// labels positionally over instances a, b, c, ...
Clustering crisp(const std::vector<int>& labels) {
  Clustering c;
  for (size_t i = 0; i < labels.size(); ++i) {
    std::string id(1, static_cast<char>('a' + i));
    c[id] = {{"s" + std::to_string(labels[i]), 1.0}};
  }
  return c;
}

}  // namespace

TEST_CASE("v_measure on reference partitions") {
  CHECK(v_measure(crisp({0, 0, 1, 1}), crisp({0, 0, 1, 1})) == 1.0);
  CHECK(v_measure(crisp({0, 0, 1, 1}), crisp({5, 5, 3, 3})) == 1.0);
  CHECK(v_measure(crisp({0, 0, 1, 1}), crisp({0, 0, 0, 0})) == 0.0);
  // gold {a,b | c,d}, pred {a | b | c,d}
  CHECK(v_measure(crisp({0, 0, 1, 1}), crisp({0, 1, 2, 2})) ==
        doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("v_measure swaps homogeneity and completeness symmetrically") {
  Rng rng(17);
  for (int t = 0; t < 40; ++t) {
    int n = 2 + static_cast<int>(rng.next_below(6));
    std::vector<int> g(n), p(n);
    for (int i = 0; i < n; ++i) {
      g[i] = static_cast<int>(rng.next_below(3));
      p[i] = static_cast<int>(rng.next_below(3));
    }
    CHECK(v_measure(crisp(g), crisp(p)) ==
          doctest::Approx(v_measure(crisp(p), crisp(g))).epsilon(1e-12));
  }
}

TEST_CASE("paired F-score on reference partitions") {
  CHECK(paired_fscore(crisp({0, 0, 1}), crisp({0, 0, 1})) == 1.0);
  // gold {a,b | c}, pred {a | b,c}: pair sets disjoint
  CHECK(paired_fscore(crisp({0, 0, 1}), crisp({0, 1, 1})) == 0.0);
  // gold {a,b,c}, pred {a,b | c}: P=1, R=1/3
  CHECK(paired_fscore(crisp({0, 0, 0}), crisp({0, 0, 1})) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("paired F-score empty pair-set conventions") {
  CHECK(paired_fscore(crisp({0, 1, 2}), crisp({3, 4, 5})) == 1.0);
  CHECK(paired_fscore(crisp({0, 1, 2}), crisp({0, 0, 1})) == 0.0);
  CHECK(paired_fscore(crisp({0, 0, 1}), crisp({0, 1, 2})) == 0.0);
}

TEST_CASE("fuzzy B-cubed reference values") {
  CHECK(fuzzy_bcubed(crisp({0, 0, 1}), crisp({0, 0, 1})) == 1.0);
  // crisp gold {a,b | c}, pred all-in-one: classic B-cubed F1 = 5/7
  CHECK(fuzzy_bcubed(crisp({0, 0, 1}), crisp({0, 0, 0})) ==
        doctest::Approx(5.0 / 7.0).epsilon(1e-12));

  Clustering graded;
  graded["a"] = {{"x", 0.7}, {"y", 0.3}};
  graded["b"] = {{"x", 0.2}, {"y", 0.8}};
  graded["c"] = {{"y", 1.0}};
  CHECK(fuzzy_bcubed(graded, graded) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fuzzy NMI reference values") {
  CHECK(fuzzy_nmi(crisp({0, 0, 1, 1}), crisp({0, 0, 1, 1})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fuzzy_nmi(crisp({0, 0, 1, 1}), crisp({0, 0, 0, 0})) == 0.0);
  // gold {a,b | c,d}, pred {a | b | c,d}: classic NMI = 2/3
  CHECK(fuzzy_nmi(crisp({0, 0, 1, 1}), crisp({0, 1, 2, 2})) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  // both sides one label each: identical single-cluster solutions
  CHECK(fuzzy_nmi(crisp({0, 0}), crisp({1, 1})) == 1.0);
}

TEST_CASE("fuzzy metrics reduce to the classic oracles on crisp input") {
  Rng rng(31);
  for (int t = 0; t < 80; ++t) {
    int n = 2 + static_cast<int>(rng.next_below(7));
    std::vector<int> g(n), p(n);
    for (int i = 0; i < n; ++i) {
      g[i] = static_cast<int>(rng.next_below(4));
      p[i] = static_cast<int>(rng.next_below(4));
    }
    auto cg = to_clustering(g), cp = to_clustering(p);
    CHECK(fuzzy_bcubed(cg, cp) ==
          doctest::Approx(oracle::bcubed_f1(g, p)).epsilon(1e-12));
    CHECK(fuzzy_nmi(cg, cp) == doctest::Approx(oracle::nmi(g, p)).epsilon(1e-12));
    CHECK(v_measure(cg, cp) ==
          doctest::Approx(oracle::v_measure(g, p)).epsilon(1e-12));
    CHECK(paired_fscore(cg, cp) ==
          doctest::Approx(oracle::paired_fscore(g, p)).epsilon(1e-12));
  }
}

TEST_CASE("metrics ignore the naming of predicted clusters") {
  std::vector<int> g = {0, 0, 1, 2, 2, 1};
  std::vector<int> p = {0, 1, 1, 2, 2, 0};
  std::vector<int> relabeled = {7, 3, 3, 9, 9, 7};
  auto cg = crisp(g);
  CHECK(v_measure(cg, crisp(p)) == v_measure(cg, crisp(relabeled)));
  CHECK(paired_fscore(cg, crisp(p)) == paired_fscore(cg, crisp(relabeled)));
  CHECK(fuzzy_bcubed(cg, crisp(p)) == fuzzy_bcubed(cg, crisp(relabeled)));
  CHECK(fuzzy_nmi(cg, crisp(p)) == fuzzy_nmi(cg, crisp(relabeled)));
}

TEST_CASE("instance-set mismatches name the differing ids") {
  Clustering gold = crisp({0, 0});   // a, b
  Clustering pred;
  pred["a"] = {{"s0", 1.0}};
  pred["z"] = {{"s0", 1.0}};
  try {
    v_measure(gold, pred);
    FAIL("expected mismatch error");
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    CHECK(msg.find("-b") != std::string::npos);
    CHECK(msg.find("+z") != std::string::npos);
  }
}

TEST_CASE("crisp metrics reject graded input; fuzzy metrics reject bad weights") {
  Clustering gold = crisp({0, 0});
  Clustering graded = gold;
  graded["a"] = {{"x", 0.5}, {"y", 0.5}};
  CHECK_THROWS_AS(v_measure(gold, graded), ValidationError);
  CHECK_THROWS_AS(paired_fscore(gold, graded), ValidationError);

  Clustering negative = gold;
  negative["a"] = {{"x", -0.25}};
  CHECK_THROWS_AS(fuzzy_bcubed(gold, negative), ValidationError);

  Clustering zero = gold;
  zero["a"] = {{"x", 0.0}};
  CHECK_THROWS_AS(fuzzy_nmi(gold, zero), ValidationError);
}

TEST_CASE("geometric average reproduces the reported table cells") {
  CHECK(std::abs(geometric_avg(61.7, 9.8) - 24.59) <= 0.01);
  CHECK(std::abs(geometric_avg(61.7, 7.96) - 22.16) <= 0.01);
  CHECK(geometric_avg(42.0, 0.0) == 0.0);
}

TEST_CASE("sense-count deltas") {
  CHECK(delta_s(3.52, 3.85) == doctest::Approx(0.33).epsilon(1e-9));
  CHECK(delta_s(4.4, 4.4) == 0.0);
  CHECK(delta_s(10.0, 3.85) == doctest::Approx(6.15).epsilon(1e-9));
}

TEST_CASE("cluster error averages absolute count differences") {
  std::map<std::string, int> induced = {{"cold", 3}, {"warm", 7}};
  std::map<std::string, int> actual = {{"cold", 2}, {"warm", 4}};
  CHECK(cluster_error(induced, induced) == 0.0);
  CHECK(cluster_error(induced, actual) == 2.0);

  std::map<std::string, int> other = {{"cold", 2}, {"hot", 4}};
  CHECK_THROWS_AS(cluster_error(induced, other), ValidationError);
  CHECK_THROWS_AS(cluster_error({}, {}), ValidationError);
}

TEST_CASE("pairwise F1 is the paired F-score under another name") {
  CHECK(pairwise_f1(crisp({0, 0, 1}), crisp({0, 0, 1})) == 1.0);
  CHECK(pairwise_f1(crisp({0, 0, 1}), crisp({0, 1, 1})) == 0.0);
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    int n = 2 + static_cast<int>(rng.next_below(6));
    std::vector<int> g(n), p(n);
    for (int i = 0; i < n; ++i) {
      g[i] = static_cast<int>(rng.next_below(3));
      p[i] = static_cast<int>(rng.next_below(3));
    }
    CHECK(pairwise_f1(crisp(g), crisp(p)) == paired_fscore(crisp(g), crisp(p)));
  }
}

TEST_CASE("harden takes the argmax with lexicographic tie-breaks") {
  Clustering graded;
  graded["a"] = {{"x", 0.3}, {"y", 0.7}};
  graded["b"] = {{"x", 0.5}, {"y", 0.5}};
  graded["c"] = {{"10", 0.5}, {"2", 0.5}};
  auto hard = harden(graded);
  CHECK(hard["a"] == std::map<std::string, double>{{"y", 1.0}});
  CHECK(hard["b"] == std::map<std::string, double>{{"x", 1.0}});
  CHECK(hard["c"] == std::map<std::string, double>{{"10", 1.0}});

  Clustering empty_labels;
  empty_labels["a"] = {};
  CHECK_THROWS_AS(harden(empty_labels), ValidationError);
}

TEST_CASE("distinct_labels counts positive-weight labels") {
  Clustering c;
  c["a"] = {{"x", 0.5}, {"y", 0.5}};
  c["b"] = {{"x", 1.0}, {"z", 0.0}};
  CHECK(distinct_labels(c) == 2);
}

TEST_CASE("gold files round-trip and reject malformed content") {
  testutil::TempDir dir;
  std::string path = dir.file("gold.jsonl");
  testutil::write_text(path,
      R"({"instance_id":"a","senses":{"s1":0.75,"s2":0.25}})" "\n"
      "\n"
      R"({"instance_id":"b","senses":{"s1":1.0}})" "\n");
  auto gold = load_gold_jsonl(path);
  REQUIRE(gold.size() == 2);
  CHECK(gold["a"].at("s1") == 0.75);
  CHECK(gold["b"].at("s1") == 1.0);

  testutil::write_text(path, R"({"instance_id":"a","senses":{}})" "\n");
  CHECK_THROWS_AS(load_gold_jsonl(path), ValidationError);

  testutil::write_text(path,
      R"({"instance_id":"a","senses":{"s1":1.0}})" "\n"
      R"({"instance_id":"a","senses":{"s1":1.0}})" "\n");
  CHECK_THROWS_AS(load_gold_jsonl(path), ValidationError);

  testutil::write_text(path, R"({"instance_id":"a","senses":{"s1":-0.5}})" "\n");
  CHECK_THROWS_AS(load_gold_jsonl(path), ValidationError);

  testutil::write_text(path, "oops\n");
  CHECK_THROWS_AS(load_gold_jsonl(path), ParseError);
}

TEST_CASE("key files group by lemma and validate tokens") {
  testutil::TempDir dir;
  std::string path = dir.file("system.key");
  testutil::write_text(path,
      "cold c.1 0/0.600000 2/0.400000\n"
      "cold c.2 1/1.0\n"
      "warm w.1 0/1.0\n");
  auto keys = load_key_file(path);
  REQUIRE(keys.size() == 2);
  CHECK(keys["cold"].size() == 2);
  CHECK(keys["cold"]["c.1"].at("0") == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(keys["cold"]["c.1"].at("2") == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(keys["warm"].size() == 1);

  testutil::write_text(path, "cold c.1 nolabel\n");
  CHECK_THROWS_AS(load_key_file(path), ParseError);

  testutil::write_text(path, "cold c.1 0/notanumber\n");
  CHECK_THROWS_AS(load_key_file(path), ParseError);

  testutil::write_text(path, "cold c.1 0/1.0extra\n");
  CHECK_THROWS_AS(load_key_file(path), ParseError);

  testutil::write_text(path, "cold c.1\n");
  CHECK_THROWS_AS(load_key_file(path), ParseError);

  testutil::write_text(path, "cold c.1 0/1.0\ncold c.1 1/1.0\n");
  CHECK_THROWS_AS(load_key_file(path), ValidationError);

  testutil::write_text(path, "cold c.1 0/0.5 1/0.5\n\n");
  CHECK(load_key_file(path)["cold"].size() == 1);

  CHECK_THROWS_AS(load_key_file(dir.file("absent.key")), IoError);

  try {
    testutil::write_text(path, "cold c.1 0/1.0\nbroken\n");
    load_key_file(path);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("restrict_clustering selects ids and reports missing ones") {
  Clustering c = crisp({0, 1, 2});  // a, b, c
  auto sub = restrict_clustering(c, {"a", "c"});
  CHECK(sub.size() == 2);
  CHECK(sub.count("a") == 1);
  CHECK(sub.count("b") == 0);

  CHECK_THROWS_AS(restrict_clustering(c, {"a", "nope"}), ValidationError);
}

TEST_CASE("report aggregation rebuilds weighted and macro views") {
  EvalReport r;
  r.per_word["cold"] = {{"FS", 50.0}, {"VM", 40.0}};
  r.per_word["warm"] = {{"FS", 100.0}, {"VM", 90.0}};
  r.per_word_instances["cold"] = 2;
  r.per_word_instances["warm"] = 8;
  r.per_word_induced["cold"] = 3.0;
  r.per_word_induced["warm"] = 5.0;
  r.per_word_actual["cold"] = 2.0;
  r.per_word_actual["warm"] = 4.0;
  finalize_report(r);

  CHECK(r.aggregates.at("FS_weighted") == doctest::Approx(90.0).epsilon(1e-12));
  CHECK(r.aggregates.at("FS_macro") == doctest::Approx(75.0).epsilon(1e-12));
  CHECK(r.aggregates.at("VM_weighted") == doctest::Approx(80.0).epsilon(1e-12));
  CHECK(r.aggregates.at("VM_macro") == doctest::Approx(65.0).epsilon(1e-12));
  CHECK(r.aggregates.at("AVG_weighted") ==
        doctest::Approx(std::sqrt(90.0 * 80.0)).epsilon(1e-12));
  CHECK(r.aggregates.at("AVG_macro") ==
        doctest::Approx(std::sqrt(75.0 * 65.0)).epsilon(1e-12));
  // induced means 4.0 vs actual 3.0; per-word errors 1 and 1
  CHECK(r.aggregates.at("delta_S") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.aggregates.at("cluster_error") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("report writers emit per-word rows and aggregates") {
  testutil::TempDir dir;
  EvalReport r;
  r.per_word["cold"] = {{"FS", 52.5}};
  r.per_word_instances["cold"] = 4;
  r.per_word_induced["cold"] = 3.0;
  r.per_word_actual["cold"] = 3.0;
  finalize_report(r);

  std::string tsv = dir.file("report.tsv");
  write_report_tsv(tsv, r);
  std::ifstream in(tsv);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("word\tmetric\tvalue\n") == 0);
  CHECK(text.find("cold\tFS\t52.500000") != std::string::npos);
  CHECK(text.find("cold\tinstances\t4") != std::string::npos);
  CHECK(text.find("ALL\tFS_weighted\t52.500000") != std::string::npos);
  CHECK(text.find("ALL\tcluster_error\t0.000000") != std::string::npos);

  std::string json = dir.file("report.json");
  write_report_json(json, r, {{"command", "run"}, {"senses", "15"}});
  std::ifstream jin(json);
  std::string jtext((std::istreambuf_iterator<char>(jin)),
                    std::istreambuf_iterator<char>());
  CHECK(jtext.find("\"command\": \"run\"") != std::string::npos);
  CHECK(jtext.find("\"FS\": 52.5") != std::string::npos);
  CHECK(jtext.find("\"aggregates\"") != std::string::npos);
}
