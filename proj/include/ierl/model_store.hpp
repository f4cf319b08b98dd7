#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "ierl/linalg.hpp"

namespace ierl {

// Fitted ensemble for one (instance, sentence slot).
struct SentenceModel {
  double g = 0;  // final objective value
  Vec4 alpha = Vec4::Zero();
  long steps = 0;
  Vec4 d = Vec4::Zero();  // [LLM-sim, LLM-dis, KG-sim, KG-dis]
};

struct ModelRecord {
  std::string key;       // unique store key
  std::string sentence;  // original sentence text
  std::size_t instance;
  int slot;
  SentenceModel model;
};

// Per-sentence models keyed by sentence text. A repeated sentence gets the key
// "<text>#<instance>.<slot>". Records stay in insertion order, which the
// trainer makes (instance, slot) order.
class ModelStore {
 public:
  const std::string& add(const std::string& sentence, std::size_t instance, int slot,
                         const SentenceModel& model);

  const ModelRecord* find(const std::string& key) const;
  const std::vector<ModelRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

 private:
  std::vector<ModelRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

// One JSON object per line:
// {"sentence", "slot", "alpha", "g", "steps", "d"}. On read, a slot-1 record
// starts the next instance.
void write_model_store(std::ostream& out, const ModelStore& store);
ModelStore read_model_store(std::istream& in);

void save_model_store(const std::string& path, const ModelStore& store);
ModelStore load_model_store(const std::string& path);

}  // namespace ierl
