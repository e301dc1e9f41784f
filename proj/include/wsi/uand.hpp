#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wsi/corpus.hpp"
#include "wsi/metrics.hpp"

namespace wsi {

// One bibliographic record carrying an ambiguous author name.
struct PubRecord {
  std::string record_id;
  std::string ambiguous_name;
  std::vector<std::string> title;
  std::vector<std::string> coauthors;
  std::string venue;                   // may be empty
  std::vector<std::string> abstract;   // may be empty
  std::string gold_author_id;          // empty when unlabeled

  void validate() const;
};

// lowercase; each run of non-alphanumerics becomes one underscore;
// leading/trailing underscores dropped ("J. Smith" -> "j_smith")
std::string normalize_name(const std::string& raw);

// pseudo-word encodings, injective per field type
std::string name_token(const std::string& name);
std::string author_token(const std::string& name);
std::string venue_token(const std::string& venue);

// tokens = name pseudo-word, title, venue pseudo-word (when non-empty),
// coauthor pseudo-words, abstract; target at position 0
Instance record_to_instance(const PubRecord& rec);

// structural split: local = title + venue + coauthors, global = abstract
ContextSplit record_split(const PubRecord& rec);

struct UandDataset {
  std::map<std::string, Corpus> corpora;   // per ambiguous name
  std::map<std::string, Clustering> gold;  // record_id -> author id (labeled
                                           // records only)
};

UandDataset make_uand_dataset(const std::vector<PubRecord>& records);

// uand-jsonl: record_id, name, title, coauthors, venue, abstract,
// optional gold_author_id; coauthors/venue/abstract may be absent
UandDataset load_uand_dataset(const std::string& path);

void write_uand_jsonl(const std::string& path,
                      const std::vector<PubRecord>& records);

// One shared ambiguous name, n_authors true identities with author-specific
// title vocabulary, coauthor pools, venues and abstract vocabulary, plus a
// small shared word pool so clusters are not trivially disjoint.
std::vector<PubRecord> generate_uand_records(int n_authors,
                                             int records_per_author,
                                             std::uint64_t seed);

}  // namespace wsi
