#include "ierl/model_store.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "ierl/error.hpp"

namespace ierl {

const std::string& ModelStore::add(const std::string& sentence, std::size_t instance, int slot,
                                   const SentenceModel& model) {
  std::string key = sentence;
  if (index_.count(key)) {
    key = sentence + "#" + std::to_string(instance) + "." + std::to_string(slot);
    if (index_.count(key)) throw DataError("duplicate model for instance " + std::to_string(instance) +
                                           " slot " + std::to_string(slot));
  }
  index_.emplace(key, records_.size());
  records_.push_back({std::move(key), sentence, instance, slot, model});
  return records_.back().key;
}

const ModelRecord* ModelStore::find(const std::string& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? nullptr : &records_[it->second];
}

namespace {

nlohmann::ordered_json vec4_json(const Vec4& v) {
  return nlohmann::ordered_json::array({v[0], v[1], v[2], v[3]});
}

Vec4 vec4_from(const nlohmann::json& j, const char* field, std::size_t line) {
  if (!j.is_array() || j.size() != 4) throw ParseError(line, std::string("'") + field + "' must be an array of 4 numbers");
  Vec4 v;
  for (int k = 0; k < 4; ++k) {
    if (!j[k].is_number()) throw ParseError(line, std::string("'") + field + "' must be an array of 4 numbers");
    v[k] = j[k].get<double>();
  }
  return v;
}

}  // namespace

void write_model_store(std::ostream& out, const ModelStore& store) {
  for (const auto& record : store.records()) {
    nlohmann::ordered_json j;
    j["sentence"] = record.sentence;
    j["slot"] = record.slot;
    j["alpha"] = vec4_json(record.model.alpha);
    j["g"] = record.model.g;
    j["steps"] = record.model.steps;
    j["d"] = vec4_json(record.model.d);
    out << j.dump() << '\n';
  }
}

ModelStore read_model_store(std::istream& in) {
  ModelStore store;
  std::string line;
  std::size_t line_no = 0;
  std::size_t instance = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    try {
      const int slot = j.at("slot").get<int>();
      if (slot != 1 && slot != 2) throw ParseError(line_no, "slot must be 1 or 2");
      if (slot == 1 && !first) ++instance;
      first = false;
      SentenceModel model;
      model.alpha = vec4_from(j.at("alpha"), "alpha", line_no);
      model.d = vec4_from(j.at("d"), "d", line_no);
      model.g = j.at("g").get<double>();
      model.steps = j.at("steps").get<long>();
      store.add(j.at("sentence").get<std::string>(), instance, slot, model);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("bad model record: ") + e.what());
    }
  }
  return store;
}

void save_model_store(const std::string& path, const ModelStore& store) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_model_store(out, store);
  if (!out) throw IoError("write failed for '" + path + "'");
}

ModelStore load_model_store(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return read_model_store(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path);
  }
}

}  // namespace ierl
