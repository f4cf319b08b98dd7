#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ierl/embed_store.hpp"
#include "ierl/model_store.hpp"

namespace ierl {

struct InferenceResult {
  std::string z;
  std::string z2;
  std::string x1;  // store key of the training sentence nearest to z
  std::string x2;  // ... nearest to z2
  double s1 = 0;   // LLM cosine of x1, x2
  double s2 = 0;   // KG cosine of x1, x2
  double displayed_similarity = 0;
  int decision = 0;  // +1 (green) or -1 (pink)
  Stream dominant_context = Stream::LLM;  // LLM = rectangle, KG = oval
  double threshold = 0;                   // alpha_x1 . alpha_x2
  Vec4 alpha_x1 = Vec4::Zero();
  Vec4 alpha_x2 = Vec4::Zero();
};

// Brute-force nearest-training-sentence search over a ModelStore. Holds unit
// vectors of every stored sentence in both streams.
class RetrievalIndex {
 public:
  RetrievalIndex(const ModelStore& models, Sources sources);

  /// Record maximizing cos_LLM(z, x) + cos_KG(z, x). A stream in which z cannot
  /// be represented is left out of the sum; ties go to the lexicographically
  /// smallest sentence text, then key.
  const ModelRecord& nearest(const std::string& z) const;

  // Similarity sum used by nearest(), exposed for checking.
  double score(const std::string& z, std::size_t record) const;

  const ModelStore& models() const noexcept { return models_; }
  Sources sources() const noexcept { return sources_; }

 private:
  struct Query {
    std::optional<Vec> llm;
    std::optional<Vec> kg;
  };
  Query resolve(const std::string& z) const;
  double score(const Query& q, std::size_t record) const;

  const ModelStore& models_;
  Sources sources_;
  std::vector<Vec> llm_;
  std::vector<Vec> kg_;
};

std::string nearest_training_sentence(const std::string& z, const ModelStore& models,
                                      Sources sources);

// (s1, s2): cosines of the two sentences' LLM vectors and KG vectors.
std::pair<double, double> pair_similarities(const std::string& x1, const std::string& x2,
                                            Sources sources);

// Decision +1 iff s1 + s2 >= threshold; LLM-dominant iff s1 >= s2.
InferenceResult make_result(std::string z, std::string z2, const ModelRecord& x1,
                            const ModelRecord& x2, double s1, double s2);

InferenceResult infer_pair(const std::string& z, const std::string& z2, const RetrievalIndex& index);
InferenceResult infer_pair(const std::string& z, const std::string& z2, const ModelStore& models,
                           Sources sources);

struct InterpretabilityReport {
  std::vector<InferenceResult> pairs;
  long llm_dominant = 0;
  long kg_dominant = 0;
  long green = 0;
  long pink = 0;
};

InterpretabilityReport interpretability_report(std::vector<InferenceResult> results);

}  // namespace ierl
