#include "wsi/model.hpp"

#include <json.hpp>

namespace wsi {

Variant parse_variant(const std::string& name) {
  if (name == "full") return Variant::full;
  if (name == "no_pairs") return Variant::no_pairs;
  if (name == "no_switch") return Variant::no_switch;
  if (name == "lda") return Variant::lda;
  throw ConfigError("unknown variant '" + name +
                    "' (expected full, no_pairs, no_switch or lda)");
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::no_pairs: return "no_pairs";
    case Variant::no_switch: return "no_switch";
    case Variant::lda: return "lda";
  }
  return "?";
}

void Hyperparams::validate() const {
  if (alpha <= 0 || beta <= 0 || gamma <= 0)
    throw ConfigError("alpha, beta and gamma must be > 0");
  if (senses < 1 || topics < 1) throw ConfigError("senses and topics must be >= 1");
  if (window < 1) throw ConfigError("window must be >= 1");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (runs < 1) throw ConfigError("runs must be >= 1");
}

void ModelState::add_global(int d, int w, int code, int delta) {
  if (code < n_senses) {
    c_dx(d, 0) += delta;
    c_ds(d, code) += delta;
    c_sw(code, w) += delta;
    dx_sum[d] += delta;
    ds_sum[d] += delta;
    sw_sum[code] += delta;
  } else {
    const int j = code - n_senses;
    if (hyper.variant != Variant::no_switch) {
      c_dx(d, 1) += delta;
      dx_sum[d] += delta;
    }
    c_dt(d, j) += delta;
    c_tw(j, w) += delta;
    dt_sum[d] += delta;
    tw_sum[j] += delta;
  }
}

void ModelState::add_pair(int d, int w_l, int w_t, int k, int j, int delta) {
  c_ds(d, k) += delta;
  c_dt(d, j) += delta;
  c_sw(k, w_l) += delta;
  c_tw(j, w_l) += delta;
  c_st(k, j) += delta;
  ds_sum[d] += delta;
  dt_sum[d] += delta;
  sw_sum[k] += delta;
  tw_sum[j] += delta;
  st_row[k] += delta;
  st_col[j] += delta;
  st_total += delta;
  if (hyper.variant != Variant::no_pairs) {  // target word rides along
    c_sw(k, w_t) += delta;
    sw_sum[k] += delta;
  }
}

void ModelState::add_class(int d, int w, int c, int delta) {
  c_dt(d, c) += delta;
  c_tw(c, w) += delta;
  dt_sum[d] += delta;
  tw_sum[c] += delta;
}

void ModelState::recompute_cached_sums() {
  ds_sum = c_ds.rowwise().sum();
  dt_sum = c_dt.rowwise().sum();
  dx_sum = c_dx.rowwise().sum();
  sw_sum = c_sw.rowwise().sum();
  tw_sum = c_tw.rowwise().sum();
  st_row = c_st.rowwise().sum();
  st_col = c_st.colwise().sum().transpose();
  st_total = c_st.sum();
}

namespace {

template <typename M>
bool same_matrix(const M& a, const M& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

ModelState blank_like(const Corpus& corpus, const Hyperparams& hyper) {
  if (hyper.senses < 1 || (hyper.variant != Variant::lda && hyper.topics < 1))
    throw ConfigError("senses and topics must be >= 1");
  if (corpus.size() == 0)
    throw ValidationError("empty corpus for target '" + corpus.target_lemma + "'");

  ModelState state;
  state.hyper = hyper;
  state.corpus = &corpus;
  state.n_senses = hyper.senses;
  state.n_topics = hyper.variant == Variant::lda ? hyper.senses : hyper.topics;

  const int D = corpus.size();
  const int V = state.corpus->vocab.size();
  state.c_ds = CountsRM::Zero(D, state.n_senses);
  state.c_dt = CountsRM::Zero(D, state.n_topics);
  state.c_dx = CountsRM::Zero(D, 2);
  state.c_st = CountsRM::Zero(state.n_senses, state.n_topics);
  state.c_sw = CountsCM::Zero(state.n_senses, V);
  state.c_tw = CountsCM::Zero(state.n_topics, V);
  state.recompute_cached_sums();
  state.assignments.resize(D);
  return state;
}

// Replays one instance's assignments through the add_* helpers.
void apply_instance(ModelState& state, int d, int delta) {
  const Corpus& corpus = *state.corpus;
  const Assignment& a = state.assignments[d];
  const std::vector<int>& ids = corpus.token_ids[d];
  if (state.hyper.variant == Variant::lda) {
    const int target_pos = corpus.instances[d].target_index;
    int i = 0;
    for (int pos = 0; pos < static_cast<int>(ids.size()); ++pos) {
      if (pos == target_pos) continue;
      state.add_class(d, ids[pos], a.global_code[i++], delta);
    }
    return;
  }
  const ContextSplit& split = corpus.splits[d];
  for (size_t i = 0; i < split.global.size(); ++i)
    state.add_global(d, ids[split.global[i]], a.global_code[i], delta);
  for (size_t i = 0; i < split.local.size(); ++i)
    state.add_pair(d, ids[split.local[i]], corpus.target_id, a.pair_sense[i],
                   a.pair_topic[i], delta);
}

}  // namespace

ModelState init_state(const Corpus& corpus, const Hyperparams& hyper,
                      RandomSource& rng) {
  ModelState state = blank_like(corpus, hyper);
  const int S = state.n_senses;
  const int T = state.n_topics;

  for (int d = 0; d < corpus.size(); ++d) {
    Assignment& a = state.assignments[d];
    const ContextSplit& split = corpus.splits[d];
    if (hyper.variant == Variant::lda) {
      const int n_free = static_cast<int>(corpus.token_ids[d].size()) - 1;
      a.global_code.reserve(n_free);
      for (int i = 0; i < n_free; ++i)
        a.global_code.push_back(static_cast<int>(rng.next_below(T)));
    } else {
      a.global_code.reserve(split.global.size());
      for (size_t i = 0; i < split.global.size(); ++i) {
        int code;
        if (hyper.variant == Variant::no_switch) {
          code = S + static_cast<int>(rng.next_below(T));
        } else if (rng.next_below(2) == 0) {
          code = static_cast<int>(rng.next_below(S));
        } else {
          code = S + static_cast<int>(rng.next_below(T));
        }
        a.global_code.push_back(code);
      }
      a.pair_sense.reserve(split.local.size());
      a.pair_topic.reserve(split.local.size());
      for (size_t i = 0; i < split.local.size(); ++i) {
        a.pair_sense.push_back(static_cast<int>(rng.next_below(S)));
        a.pair_topic.push_back(static_cast<int>(rng.next_below(T)));
      }
    }
    apply_instance(state, d, +1);
  }
  return state;
}

bool audit_counts(const ModelState& state) {
  ModelState fresh = blank_like(*state.corpus, state.hyper);
  fresh.assignments = state.assignments;
  for (int d = 0; d < state.corpus->size(); ++d) apply_instance(fresh, d, +1);

  ModelState recomputed = state;  // sums rebuilt from the stored matrices
  recomputed.recompute_cached_sums();
  return same_matrix(fresh.c_ds, state.c_ds) &&
         same_matrix(fresh.c_dt, state.c_dt) &&
         same_matrix(fresh.c_dx, state.c_dx) &&
         same_matrix(fresh.c_st, state.c_st) &&
         same_matrix(fresh.c_sw, state.c_sw) &&
         same_matrix(fresh.c_tw, state.c_tw) &&
         (recomputed.ds_sum.array() == state.ds_sum.array()).all() &&
         (recomputed.dt_sum.array() == state.dt_sum.array()).all() &&
         (recomputed.dx_sum.array() == state.dx_sum.array()).all() &&
         (recomputed.sw_sum.array() == state.sw_sum.array()).all() &&
         (recomputed.tw_sum.array() == state.tw_sum.array()).all() &&
         (recomputed.st_row.array() == state.st_row.array()).all() &&
         (recomputed.st_col.array() == state.st_col.array()).all() &&
         recomputed.st_total == state.st_total;
}

bool ModelState::operator==(const ModelState& other) const {
  return hyper == other.hyper && n_senses == other.n_senses &&
         n_topics == other.n_topics && same_matrix(c_ds, other.c_ds) &&
         same_matrix(c_dt, other.c_dt) && same_matrix(c_dx, other.c_dx) &&
         same_matrix(c_st, other.c_st) && same_matrix(c_sw, other.c_sw) &&
         same_matrix(c_tw, other.c_tw) && assignments == other.assignments;
}

namespace {

constexpr const char* kStateFormat = "wsi-state";
constexpr int kStateVersion = 1;

nlohmann::json matrix_to_json(const CountsRM& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return nlohmann::json::array({m.rows(), m.cols(), std::move(data)});
}

nlohmann::json matrix_to_json(const CountsCM& m) {
  CountsRM rm = m;
  return matrix_to_json(rm);
}

template <typename M>
M matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw DecodeError("bad matrix encoding");
  const Eigen::Index rows = j[0].get<Eigen::Index>();
  const Eigen::Index cols = j[1].get<Eigen::Index>();
  const auto& data = j[2];
  if (rows < 0 || cols < 0 ||
      static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw DecodeError("matrix size mismatch");
  M m(rows, cols);
  Eigen::Index i = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[i++].get<int>();
  return m;
}

}  // namespace

std::string serialize_state(const ModelState& state, int run_index,
                            const std::string& rng_state) {
  nlohmann::json j;
  j["format"] = kStateFormat;
  j["version"] = kStateVersion;
  j["lemma"] = state.corpus ? state.corpus->target_lemma : "";
  j["run_index"] = run_index;
  j["rng_state"] = rng_state;

  nlohmann::json h;
  h["alpha"] = state.hyper.alpha;
  h["beta"] = state.hyper.beta;
  h["gamma"] = state.hyper.gamma;
  h["senses"] = state.hyper.senses;
  h["topics"] = state.hyper.topics;
  h["window"] = state.hyper.window;
  h["iterations"] = state.hyper.iterations;
  h["runs"] = state.hyper.runs;
  h["seed"] = state.hyper.seed;
  h["variant"] = variant_name(state.hyper.variant);
  j["hyper"] = std::move(h);

  if (state.corpus) {
    j["vocab"] = state.corpus->vocab.words();
    nlohmann::json ids = nlohmann::json::array();
    for (const Instance& inst : state.corpus->instances)
      ids.push_back(inst.instance_id);
    j["instance_ids"] = std::move(ids);
  } else {
    j["vocab"] = nlohmann::json::array();
    j["instance_ids"] = nlohmann::json::array();
  }

  j["c_ds"] = matrix_to_json(state.c_ds);
  j["c_dt"] = matrix_to_json(state.c_dt);
  j["c_dx"] = matrix_to_json(state.c_dx);
  j["c_st"] = matrix_to_json(state.c_st);
  j["c_sw"] = matrix_to_json(state.c_sw);
  j["c_tw"] = matrix_to_json(state.c_tw);

  nlohmann::json assigns = nlohmann::json::array();
  for (const Assignment& a : state.assignments) {
    nlohmann::json ja;
    ja["g"] = a.global_code;
    ja["ps"] = a.pair_sense;
    ja["pt"] = a.pair_topic;
    assigns.push_back(std::move(ja));
  }
  j["assignments"] = std::move(assigns);
  return j.dump();
}

StateSnapshot deserialize_state(const std::string& bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("state snapshot is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kStateFormat)
      throw DecodeError("not a state snapshot");
    if (j.at("version").get<int>() != kStateVersion)
      throw DecodeError("unsupported snapshot version");

    StateSnapshot snap;
    snap.lemma = j.at("lemma").get<std::string>();
    snap.run_index = j.at("run_index").get<int>();
    snap.rng_state = j.at("rng_state").get<std::string>();
    snap.vocab_words = j.at("vocab").get<std::vector<std::string>>();
    snap.instance_ids = j.at("instance_ids").get<std::vector<std::string>>();

    const auto& h = j.at("hyper");
    Hyperparams& hy = snap.state.hyper;
    hy.alpha = h.at("alpha").get<double>();
    hy.beta = h.at("beta").get<double>();
    hy.gamma = h.at("gamma").get<double>();
    hy.senses = h.at("senses").get<int>();
    hy.topics = h.at("topics").get<int>();
    hy.window = h.at("window").get<int>();
    hy.iterations = h.at("iterations").get<int>();
    hy.runs = h.at("runs").get<int>();
    hy.seed = h.at("seed").get<std::uint64_t>();
    hy.variant = parse_variant(h.at("variant").get<std::string>());

    ModelState& s = snap.state;
    s.c_ds = matrix_from_json<CountsRM>(j.at("c_ds"));
    s.c_dt = matrix_from_json<CountsRM>(j.at("c_dt"));
    s.c_dx = matrix_from_json<CountsRM>(j.at("c_dx"));
    s.c_st = matrix_from_json<CountsRM>(j.at("c_st"));
    s.c_sw = matrix_from_json<CountsCM>(j.at("c_sw"));
    s.c_tw = matrix_from_json<CountsCM>(j.at("c_tw"));
    s.n_senses = static_cast<int>(s.c_sw.rows());
    s.n_topics = static_cast<int>(s.c_tw.rows());
    s.recompute_cached_sums();

    for (const auto& ja : j.at("assignments")) {
      Assignment a;
      a.global_code = ja.at("g").get<std::vector<int>>();
      a.pair_sense = ja.at("ps").get<std::vector<int>>();
      a.pair_topic = ja.at("pt").get<std::vector<int>>();
      s.assignments.push_back(std::move(a));
    }
    if (s.assignments.size() != snap.instance_ids.size())
      throw DecodeError("assignment/instance count mismatch");
    return snap;
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("state snapshot field error: ") + e.what());
  } catch (const ConfigError& e) {
    throw DecodeError(std::string("state snapshot field error: ") + e.what());
  }
}

ModelState StateSnapshot::to_state(const Corpus& corpus) const {
  if (corpus.target_lemma != lemma)
    throw ValidationError("snapshot is for target '" + lemma +
                          "', corpus is '" + corpus.target_lemma + "'");
  if (corpus.size() != static_cast<int>(instance_ids.size()))
    throw ValidationError("snapshot instance count differs from corpus");
  for (int d = 0; d < corpus.size(); ++d)
    if (corpus.instances[d].instance_id != instance_ids[d])
      throw ValidationError("snapshot instance ids differ from corpus order");
  if (corpus.vocab.words() != vocab_words)
    throw ValidationError("snapshot vocabulary differs from corpus");

  ModelState bound = state;
  bound.corpus = &corpus;
  return bound;
}

}  // namespace wsi
