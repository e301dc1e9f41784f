#include "wsi/uand.hpp"

#include <cctype>
#include <fstream>

#include <json.hpp>

#include "wsi/jsonl.hpp"
#include "wsi/rng.hpp"

namespace wsi {

void PubRecord::validate() const {
  if (record_id.empty()) throw ValidationError("record with empty record_id");
  if (ambiguous_name.empty())
    throw ValidationError("record " + record_id + ": empty ambiguous name");
  if (title.empty())
    throw ValidationError("record " + record_id + ": empty title");
}

std::string normalize_name(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_sep = false;
  for (unsigned char c : raw) {
    if (std::isalnum(c)) {
      if (pending_sep && !out.empty()) out.push_back('_');
      pending_sep = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_sep = true;
    }
  }
  return out;
}

std::string name_token(const std::string& name) {
  return "NAME::" + normalize_name(name);
}

std::string author_token(const std::string& name) {
  return "AUTHOR::" + normalize_name(name);
}

std::string venue_token(const std::string& venue) {
  return "VENUE::" + normalize_name(venue);
}

Instance record_to_instance(const PubRecord& rec) {
  rec.validate();
  Instance inst;
  inst.instance_id = rec.record_id;
  inst.target_lemma = name_token(rec.ambiguous_name);
  inst.target_index = 0;
  inst.tokens.push_back(inst.target_lemma);
  for (const std::string& t : rec.title) inst.tokens.push_back(t);
  if (!rec.venue.empty()) inst.tokens.push_back(venue_token(rec.venue));
  for (const std::string& a : rec.coauthors)
    inst.tokens.push_back(author_token(a));
  for (const std::string& t : rec.abstract) inst.tokens.push_back(t);
  return inst;
}

ContextSplit record_split(const PubRecord& rec) {
  const int n_local = static_cast<int>(rec.title.size()) +
                      (rec.venue.empty() ? 0 : 1) +
                      static_cast<int>(rec.coauthors.size());
  ContextSplit split;
  for (int pos = 1; pos <= n_local; ++pos) split.local.push_back(pos);
  for (int pos = n_local + 1;
       pos <= n_local + static_cast<int>(rec.abstract.size()); ++pos)
    split.global.push_back(pos);
  return split;
}

UandDataset make_uand_dataset(const std::vector<PubRecord>& records) {
  std::map<std::string, std::vector<const PubRecord*>> by_name;
  for (const PubRecord& rec : records) {
    rec.validate();
    by_name[rec.ambiguous_name].push_back(&rec);
  }

  UandDataset out;
  for (const auto& [name, recs] : by_name) {
    std::vector<Instance> instances;
    std::vector<ContextSplit> splits;
    Clustering gold;
    for (const PubRecord* rec : recs) {
      instances.push_back(record_to_instance(*rec));
      splits.push_back(record_split(*rec));
      if (!rec->gold_author_id.empty())
        gold[rec->record_id] = {{rec->gold_author_id, 1.0}};
    }
    // duplicate record_id within a name is caught by corpus construction
    out.corpora.emplace(name, make_corpus_presplit(name_token(name),
                                                   std::move(instances),
                                                   std::move(splits)));
    if (!gold.empty()) out.gold.emplace(name, std::move(gold));
  }
  return out;
}

UandDataset load_uand_dataset(const std::string& path) {
  std::vector<PubRecord> records;
  for_each_jsonl(path, [&](int lineno, const nlohmann::json& obj) {
    PubRecord rec;
    try {
      rec.record_id = obj.at("record_id").get<std::string>();
      rec.ambiguous_name = obj.at("name").get<std::string>();
      rec.title = obj.at("title").get<std::vector<std::string>>();
      if (obj.contains("coauthors"))
        rec.coauthors = obj.at("coauthors").get<std::vector<std::string>>();
      if (obj.contains("venue")) rec.venue = obj.at("venue").get<std::string>();
      if (obj.contains("abstract"))
        rec.abstract = obj.at("abstract").get<std::vector<std::string>>();
      if (obj.contains("gold_author_id"))
        rec.gold_author_id = obj.at("gold_author_id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    rec.validate();
    records.push_back(std::move(rec));
  });
  return make_uand_dataset(records);
}

void write_uand_jsonl(const std::string& path,
                      const std::vector<PubRecord>& records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  for (const PubRecord& rec : records) {
    nlohmann::json obj;
    obj["record_id"] = rec.record_id;
    obj["name"] = rec.ambiguous_name;
    obj["title"] = rec.title;
    obj["coauthors"] = rec.coauthors;
    obj["venue"] = rec.venue;
    obj["abstract"] = rec.abstract;
    if (!rec.gold_author_id.empty()) obj["gold_author_id"] = rec.gold_author_id;
    out << obj.dump() << "\n";
  }
}

std::vector<PubRecord> generate_uand_records(int n_authors,
                                             int records_per_author,
                                             std::uint64_t seed) {
  if (n_authors < 1 || records_per_author < 1)
    throw ConfigError("generate_uand_records: counts must be >= 1");

  Rng rng(mix64(seed ^ 0x75616e64ull));
  const std::vector<std::string> shared = {"paper", "approach", "method",
                                           "study"};
  auto title_word = [&](int a) {
    if (rng.next_double() < 0.10)
      return shared[rng.next_below(static_cast<std::uint32_t>(shared.size()))];
    return "t" + std::to_string(a) + "_" + std::to_string(rng.next_below(12));
  };
  auto abstract_word = [&](int a) {
    if (rng.next_double() < 0.10)
      return shared[rng.next_below(static_cast<std::uint32_t>(shared.size()))];
    return "ab" + std::to_string(a) + "_" + std::to_string(rng.next_below(20));
  };

  std::vector<PubRecord> records;
  int next_id = 0;
  for (int a = 0; a < n_authors; ++a) {
    for (int r = 0; r < records_per_author; ++r) {
      PubRecord rec;
      rec.record_id = "r" + std::to_string(next_id++);
      rec.ambiguous_name = "J. Doe";
      rec.gold_author_id = "author" + std::to_string(a);
      for (int i = 0; i < 6; ++i) rec.title.push_back(title_word(a));
      const int n_co = 2 + static_cast<int>(rng.next_below(2));
      for (int i = 0; i < n_co; ++i)
        rec.coauthors.push_back("Author" + std::to_string(a) + " Co" +
                                std::to_string(rng.next_below(6)));
      rec.venue = "Venue A" + std::to_string(a) + " " +
                  std::to_string(rng.next_below(2));
      for (int i = 0; i < 15; ++i) rec.abstract.push_back(abstract_word(a));
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace wsi
