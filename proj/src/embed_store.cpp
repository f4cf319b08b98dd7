#include "ierl/embed_store.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "ierl/error.hpp"

namespace ierl {

const char* to_string(Stream stream) { return stream == Stream::LLM ? "LLM" : "KG"; }

VectorTable::VectorTable(int dim) : dim_(dim) {
  if (dim <= 0) throw DataError("dimension must be positive");
}

bool VectorTable::insert(std::string key, Vec values) {
  if (values.size() != dim_) {
    throw DataError("vector for '" + key + "' has " + std::to_string(values.size()) +
                    " values, expected " + std::to_string(dim_));
  }
  if (!values.allFinite()) throw DataError("vector for '" + key + "' has non-finite values");
  if (index_.count(key)) return false;
  index_.emplace(key, keys_.size());
  keys_.push_back(std::move(key));
  vectors_.push_back(std::move(values));
  return true;
}

const Vec* VectorTable::find(const std::string& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? nullptr : &vectors_[it->second];
}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !is_space(text[end])) ++end;
    fields.push_back(text.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool blank(std::string_view line) { return std::all_of(line.begin(), line.end(), is_space); }

long parse_integer(std::string_view field, std::size_t line, const char* what) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line, std::string("malformed header: ") + what + " '" + std::string(field) +
                               "' is not an integer");
  }
  return value;
}

struct Header {
  long count;
  int dim;
};

Header read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  chomp(line);
  auto fields = split_whitespace(line);
  if (fields.size() != 2) throw ParseError(1, "malformed header: expected \"N d\"");
  const long count = parse_integer(fields[0], 1, "entry count");
  const long dim = parse_integer(fields[1], 1, "dimension");
  if (count < 0) throw ParseError(1, "malformed header: entry count must be non-negative");
  if (dim <= 0) throw ParseError(1, "dimension must be positive");
  return {count, static_cast<int>(dim)};
}

Vec parse_values(std::string_view text, int dim, std::size_t line) {
  auto fields = split_whitespace(text);
  if (static_cast<long>(fields.size()) != dim) {
    throw ParseError(line, "has " + std::to_string(fields.size()) + " values, expected " +
                               std::to_string(dim));
  }
  Vec values(dim);
  for (int k = 0; k < dim; ++k) {
    const auto field = fields[k];
    double value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw ParseError(line, "non-numeric value '" + std::string(field) + "'");
    }
    if (!std::isfinite(value)) throw ParseError(line, "non-finite value '" + std::string(field) + "'");
    values[k] = value;
  }
  return values;
}

// Shared body of both loaders; split_entry separates the key from the values.
template <typename Table, typename SplitEntry>
Table parse_table(std::istream& in, SplitEntry split_entry) {
  const Header header = read_header(in);
  Table table(header.dim);
  std::string line;
  std::size_t line_no = 1;
  long parsed = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (blank(line)) continue;
    if (parsed == header.count) {
      throw ParseError(line_no, "more entries than the " + std::to_string(header.count) +
                                    " declared in the header");
    }
    auto [key, rest] = split_entry(std::string_view(line), line_no);
    Vec values = parse_values(rest, header.dim, line_no);
    std::string key_text(key);
    if (!table.insert(key_text, std::move(values))) {
      table.add_warning("line " + std::to_string(line_no) + ": duplicate entry '" + key_text +
                        "' ignored (first occurrence kept)");
    }
    ++parsed;
  }
  if (parsed != header.count) {
    throw ParseError(line_no, "header declares " + std::to_string(header.count) +
                                  " entries but " + std::to_string(parsed) + " were found");
  }
  return table;
}

template <typename Table>
void write_table(std::ostream& out, const Table& table, char separator) {
  out << table.size() << ' ' << table.dim() << '\n';
  char buffer[64];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.keys()[i] << separator;
    const Vec& v = table.at(i);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, v[k]);
      if (k) out << ' ';
      out.write(buffer, end - buffer);
    }
    out << '\n';
  }
}

}  // namespace

EmbeddingTable parse_embedding_table(std::istream& in) {
  return parse_table<EmbeddingTable>(in, [](std::string_view line, std::size_t line_no) {
    std::size_t start = 0;
    while (start < line.size() && is_space(line[start])) ++start;
    std::size_t end = start;
    while (end < line.size() && !is_space(line[end])) ++end;
    if (start == end) throw ParseError(line_no, "missing token");
    return std::pair{line.substr(start, end - start), line.substr(end)};
  });
}

SentenceEmbeddingStore load_sentence_store(std::istream& in) {
  return parse_table<SentenceEmbeddingStore>(in, [](std::string_view line, std::size_t line_no) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(line_no, "missing tab after sentence");
    if (tab == 0) throw ParseError(line_no, "empty sentence");
    return std::pair{line.substr(0, tab), line.substr(tab + 1)};
  });
}

namespace {
std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}
}  // namespace

EmbeddingTable load_embedding_table_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return parse_embedding_table(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path);
  }
}

SentenceEmbeddingStore load_sentence_store_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return load_sentence_store(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path);
  }
}

void write_embedding_table(std::ostream& out, const EmbeddingTable& table) {
  write_table(out, table, ' ');
}

void write_sentence_store(std::ostream& out, const SentenceEmbeddingStore& store) {
  write_table(out, store, '\t');
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  auto is_punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; };
  for (auto field : split_whitespace(sentence)) {
    std::size_t begin = 0;
    std::size_t end = field.size();
    while (begin < end && is_punct(field[begin])) ++begin;
    while (end > begin && is_punct(field[end - 1])) --end;
    if (begin == end) continue;
    std::string token(field.substr(begin, end - begin));
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::optional<Vec> try_encode_sentence(const EmbeddingTable& table, std::string_view sentence) {
  // Summing in sorted token order makes the result exactly order-independent.
  auto tokens = tokenize(sentence);
  std::sort(tokens.begin(), tokens.end());
  Vec sum = Vec::Zero(table.dim());
  long found = 0;
  for (const auto& token : tokens) {
    if (const Vec* v = table.find(token)) {
      sum += *v;
      ++found;
    }
  }
  if (found == 0) return std::nullopt;
  return Vec(sum / static_cast<double>(found));
}

SentenceVector encode_sentence(const EmbeddingTable& table, std::string_view sentence) {
  if (sentence.empty()) throw DataError("cannot encode an empty sentence");
  auto encoded = try_encode_sentence(table, sentence);
  if (!encoded) throw DataError("unencodable sentence: '" + std::string(sentence) + "'");
  return {std::move(*encoded), Stream::KG};
}

SentenceVector lookup_sentence(const SentenceEmbeddingStore& store, const std::string& sentence) {
  const Vec* v = store.find(sentence);
  if (!v) throw DataError("sentence missing from sentence store: '" + sentence + "'");
  return {*v, Stream::LLM};
}

PairReps pair_representations(const SentenceEmbeddingStore& store, const EmbeddingTable& table,
                              const Instance& instance) {
  PairReps reps;
  reps.t1 = lookup_sentence(store, instance.sentence1).values;
  reps.t2 = lookup_sentence(store, instance.sentence2).values;
  reps.c1 = encode_sentence(table, instance.sentence1).values;
  reps.c2 = encode_sentence(table, instance.sentence2).values;
  return reps;
}

}  // namespace ierl
