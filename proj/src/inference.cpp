#include "ierl/inference.hpp"

#include <algorithm>
#include <tuple>

#include "ierl/error.hpp"

namespace ierl {

RetrievalIndex::RetrievalIndex(const ModelStore& models, Sources sources)
    : models_(models), sources_(sources) {
  if (models.empty()) throw DataError("model store is empty");
  llm_.reserve(models.size());
  kg_.reserve(models.size());
  for (const auto& record : models.records()) {
    llm_.push_back(unit_normalize(lookup_sentence(sources.llm, record.sentence).values));
    kg_.push_back(unit_normalize(encode_sentence(sources.kg, record.sentence).values));
  }
}

RetrievalIndex::Query RetrievalIndex::resolve(const std::string& z) const {
  Query q;
  if (const Vec* v = sources_.llm.find(z)) q.llm = unit_normalize(*v);
  if (auto c = try_encode_sentence(sources_.kg, z)) q.kg = unit_normalize(*c);
  if (!q.llm && !q.kg) throw DataError("sentence unresolvable in both streams: '" + z + "'");
  return q;
}

double RetrievalIndex::score(const Query& q, std::size_t record) const {
  double s = 0;
  if (q.llm) s += unit_dot(*q.llm, llm_[record]);
  if (q.kg) s += unit_dot(*q.kg, kg_[record]);
  return s;
}

double RetrievalIndex::score(const std::string& z, std::size_t record) const {
  return score(resolve(z), record);
}

const ModelRecord& RetrievalIndex::nearest(const std::string& z) const {
  const Query q = resolve(z);
  const auto& records = models_.records();
  std::size_t best = 0;
  double best_score = score(q, 0);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const double s = score(q, r);
    const bool better =
        s > best_score ||
        (s == best_score && std::tie(records[r].sentence, records[r].key) <
                                std::tie(records[best].sentence, records[best].key));
    if (better) {
      best = r;
      best_score = s;
    }
  }
  return records[best];
}

std::string nearest_training_sentence(const std::string& z, const ModelStore& models,
                                      Sources sources) {
  return RetrievalIndex(models, sources).nearest(z).key;
}

std::pair<double, double> pair_similarities(const std::string& x1, const std::string& x2,
                                            Sources sources) {
  const double s1 = cosine(lookup_sentence(sources.llm, x1).values,
                           lookup_sentence(sources.llm, x2).values);
  const double s2 =
      cosine(encode_sentence(sources.kg, x1).values, encode_sentence(sources.kg, x2).values);
  return {s1, s2};
}

InferenceResult make_result(std::string z, std::string z2, const ModelRecord& x1,
                            const ModelRecord& x2, double s1, double s2) {
  InferenceResult r;
  r.z = std::move(z);
  r.z2 = std::move(z2);
  r.x1 = x1.key;
  r.x2 = x2.key;
  r.s1 = s1;
  r.s2 = s2;
  r.displayed_similarity = std::max(s1, s2);
  r.alpha_x1 = x1.model.alpha;
  r.alpha_x2 = x2.model.alpha;
  r.threshold = r.alpha_x1.dot(r.alpha_x2);
  r.decision = s1 + s2 >= r.threshold ? +1 : -1;
  r.dominant_context = s1 >= s2 ? Stream::LLM : Stream::KG;
  return r;
}

InferenceResult infer_pair(const std::string& z, const std::string& z2, const RetrievalIndex& index) {
  const ModelRecord& x1 = index.nearest(z);
  const ModelRecord& x2 = index.nearest(z2);
  const auto [s1, s2] = pair_similarities(x1.sentence, x2.sentence, index.sources());
  return make_result(z, z2, x1, x2, s1, s2);
}

InferenceResult infer_pair(const std::string& z, const std::string& z2, const ModelStore& models,
                           Sources sources) {
  return infer_pair(z, z2, RetrievalIndex(models, sources));
}

InterpretabilityReport interpretability_report(std::vector<InferenceResult> results) {
  InterpretabilityReport report;
  for (const auto& r : results) {
    (r.dominant_context == Stream::LLM ? report.llm_dominant : report.kg_dominant) += 1;
    (r.decision == +1 ? report.green : report.pink) += 1;
  }
  report.pairs = std::move(results);
  return report;
}

}  // namespace ierl
