#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ierl/linalg.hpp"

namespace ierl {

enum class Stream { LLM, KG };

const char* to_string(Stream stream);

// Immutable-after-load map from string key to a fixed-dimension vector.
// Keeps insertion order so serialization is stable.
class VectorTable {
 public:
  explicit VectorTable(int dim);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return keys_.size(); }
  bool empty() const noexcept { return keys_.empty(); }

  // Returns false (and keeps the existing entry) when key is already present.
  bool insert(std::string key, Vec values);
  const Vec* find(const std::string& key) const;
  bool contains(const std::string& key) const { return find(key) != nullptr; }

  const std::vector<std::string>& keys() const noexcept { return keys_; }
  const Vec& at(std::size_t index) const { return vectors_.at(index); }

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  void add_warning(std::string message) { warnings_.push_back(std::move(message)); }

 private:
  int dim_;
  std::vector<std::string> keys_;
  std::vector<Vec> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> warnings_;
};

// Token -> vector (the knowledge-graph stream).
class EmbeddingTable : public VectorTable {
 public:
  using VectorTable::VectorTable;
};

// Exact sentence text -> precomputed LLM sentence vector.
class SentenceEmbeddingStore : public VectorTable {
 public:
  using VectorTable::VectorTable;
};

struct SentenceVector {
  Vec values;
  Stream source;
};

struct Instance {
  std::string sentence1;
  std::string sentence2;
  int label;  // +1 or -1

  const std::string& sentence(int slot) const { return slot == 1 ? sentence1 : sentence2; }
};

// Raw (not yet normalized) representations of both sentences of an instance.
struct PairReps {
  Vec t1, t2;  // LLM stream
  Vec c1, c2;  // KG stream

  const Vec& get(Stream stream, int slot) const {
    if (stream == Stream::LLM) return slot == 1 ? t1 : t2;
    return slot == 1 ? c1 : c2;
  }
};

// Read-only view over both representation sources.
struct Sources {
  const SentenceEmbeddingStore& llm;
  const EmbeddingTable& kg;
};

/// Parses "N d" followed by N lines of "token v1 ... vd". Duplicate tokens keep
/// their first vector and add a warning to the table.
EmbeddingTable parse_embedding_table(std::istream& in);

/// Parses "N d" followed by N lines of "sentence<TAB>v1 ... vd".
SentenceEmbeddingStore load_sentence_store(std::istream& in);

EmbeddingTable load_embedding_table_file(const std::string& path);
SentenceEmbeddingStore load_sentence_store_file(const std::string& path);

// Values are written in shortest round-trip form.
void write_embedding_table(std::ostream& out, const EmbeddingTable& table);
void write_sentence_store(std::ostream& out, const SentenceEmbeddingStore& store);

// Lowercase, whitespace split, strip leading/trailing punctuation; empty tokens dropped.
std::vector<std::string> tokenize(std::string_view sentence);

/// Mean of the vectors of all in-vocabulary tokens. Throws DataError
/// ("unencodable sentence") when no token is in the table.
SentenceVector encode_sentence(const EmbeddingTable& table, std::string_view sentence);

// nullopt instead of throwing, for callers that tolerate a missing stream.
std::optional<Vec> try_encode_sentence(const EmbeddingTable& table, std::string_view sentence);

SentenceVector lookup_sentence(const SentenceEmbeddingStore& store, const std::string& sentence);

PairReps pair_representations(const SentenceEmbeddingStore& store, const EmbeddingTable& table,
                              const Instance& instance);

}  // namespace ierl
