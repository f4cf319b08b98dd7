#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "ierl/embed_store.hpp"
#include "ierl/error.hpp"
#include "support.hpp"

using namespace ierl;

namespace {
EmbeddingTable parse_table(const std::string& text) {
  std::istringstream in(text);
  return parse_embedding_table(in);
}
SentenceEmbeddingStore parse_store(const std::string& text) {
  std::istringstream in(text);
  return load_sentence_store(in);
}
std::string parse_error(const std::string& text) {
  try {
    parse_table(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "no error";
}
}  // namespace

TEST_CASE("parse_embedding_table reads the header and entries") {
  const auto t = parse_table("2 2\na 1 0\nb 0 1");
  CHECK(t.dim() == 2);
  CHECK(t.size() == 2);
  CHECK(*t.find("a") == Eigen::Vector2d(1, 0));
  CHECK(*t.find("b") == Eigen::Vector2d(0, 1));
  CHECK(t.warnings().empty());
}

TEST_CASE("parse_embedding_table keeps the first duplicate and warns") {
  const auto t = parse_table("2 1\na 5\na 7");
  CHECK(t.size() == 1);
  CHECK((*t.find("a"))[0] == 5.0);
  REQUIRE(t.warnings().size() == 1);
  CHECK(t.warnings()[0].find("duplicate") != std::string::npos);
}

TEST_CASE("parse_embedding_table errors carry line numbers") {
  CHECK(parse_error("1 3\na 1 2") == "line 2: has 2 values, expected 3");
  CHECK(parse_error("x 3\na 1 2 3").find("line 1: malformed header") == 0);
  CHECK(parse_error("1\na 1").find("line 1: malformed header") == 0);
  CHECK(parse_error("1 2\na 1 oops") == "line 2: non-numeric value 'oops'");
  CHECK(parse_error("3 1\na 1\nb 2").find("header declares 3 entries but 2") != std::string::npos);
  CHECK(parse_error("1 1\na 1\nb 2").find("line 3: more entries") == 0);
  CHECK(parse_error("") == "line 1: missing header");
}

TEST_CASE("load_sentence_store") {
  const auto s = parse_store("1 2\nhello world\t0.6 0.8");
  REQUIRE(s.find("hello world"));
  CHECK((*s.find("hello world"))[1] == doctest::Approx(0.8));

  CHECK_THROWS_WITH_AS(parse_store(""), "line 1: missing header", ParseError);
  CHECK_THROWS_WITH_AS(parse_store("1 0\nx\t"), "line 1: dimension must be positive", ParseError);
  CHECK_THROWS_WITH_AS(parse_store("1 2\nhello world 0.6 0.8"), "line 2: missing tab after sentence",
                       ParseError);
}

TEST_CASE("encode_sentence mean-pools in-vocabulary tokens") {
  const auto t = parse_table("2 2\na 1 0\nb 0 1");
  const auto v = encode_sentence(t, "a b");
  CHECK(v.source == Stream::KG);
  CHECK(v.values.isApprox(Eigen::Vector2d(0.5, 0.5)));
  CHECK(encode_sentence(t, "A, b!").values.isApprox(v.values));
  CHECK(encode_sentence(t, "a zzz").values.isApprox(Eigen::Vector2d(1, 0)));

  const auto only_a = parse_table("1 2\na 1 0");
  CHECK_THROWS_WITH_AS(encode_sentence(only_a, "zzz"), "unencodable sentence: 'zzz'", DataError);
  CHECK_THROWS_AS(encode_sentence(only_a, ""), DataError);
}

TEST_CASE("tokenize lowercases and strips edge punctuation") {
  const auto tokens = tokenize("  Hello, WORLD!! don't ... ");
  CHECK(tokens == std::vector<std::string>{"hello", "world", "don't"});
}

TEST_CASE("unit_normalize") {
  CHECK(unit_normalize(Eigen::Vector2d(3, 4)).isApprox(Eigen::Vector2d(0.6, 0.8)));
  CHECK(unit_normalize(Eigen::Vector2d(0, 0)) == Eigen::Vector2d(0, 0));
  CHECK(unit_normalize(Eigen::Vector2d(1, 0)) == Eigen::Vector2d(1, 0));
  CHECK_THROWS_AS(unit_normalize(Eigen::Vector2d(NAN, 0)), DataError);
}

TEST_CASE("pair_representations composes both lookups") {
  const auto store = parse_store("2 2\ns1\t1 0\ns2\t0 1");
  Instance inst{"s1", "s2", 1};
  const auto kg = parse_table("2 2\ns1 3 4\ns2 1 1");
  const auto reps = pair_representations(store, kg, inst);
  CHECK(reps.t1 == Eigen::Vector2d(1, 0));
  CHECK(reps.t2 == Eigen::Vector2d(0, 1));
  CHECK(reps.c1 == Eigen::Vector2d(3, 4));  // not normalized
  CHECK(reps.c2 == Eigen::Vector2d(1, 1));

  CHECK_THROWS_WITH_AS(pair_representations(parse_store("1 2\ns1\t1 0"), kg, inst),
                       "sentence missing from sentence store: 's2'", DataError);
  const auto kg_missing = parse_table("1 2\ns1 1 0");
  CHECK_THROWS_WITH_AS(pair_representations(store, kg_missing, inst), "unencodable sentence: 's2'",
                       DataError);
}

TEST_CASE("property: serialize/parse round trip is exact") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0, 3);
  for (int round = 0; round < 20; ++round) {
    const int dim = 1 + round % 7;
    EmbeddingTable table(dim);
    for (int k = 0; k < 15; ++k) {
      Vec v(dim);
      for (int e = 0; e < dim; ++e) v[e] = normal(rng) * std::pow(10.0, static_cast<int>(rng() % 9) - 4);
      table.insert("tok" + std::to_string(k), v);
    }
    std::stringstream buffer;
    write_embedding_table(buffer, table);
    const auto back = parse_embedding_table(buffer);
    REQUIRE(back.size() == table.size());
    for (std::size_t k = 0; k < table.size(); ++k) {
      CHECK(back.keys()[k] == table.keys()[k]);
      CHECK(back.at(k) == table.at(k));
    }
  }
}

TEST_CASE("property: sentence store round trip is exact") {
  SentenceEmbeddingStore store(3);
  store.insert("the cat sat", Eigen::Vector3d(0.1, -2.5e-7, 12345.678));
  store.insert("a b", Eigen::Vector3d(1, 2, 3));
  std::stringstream buffer;
  write_sentence_store(buffer, store);
  const auto back = load_sentence_store(buffer);
  CHECK(*back.find("the cat sat") == *store.find("the cat sat"));
}

TEST_CASE("property: unit_normalize norms and scale invariance") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10, 10);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int round = 0; round < 500; ++round) {
    Vec v(1 + round % 16);
    for (auto& x : v) x = u(rng);
    if (round % 50 == 0) v.setZero();
    const Vec n = unit_normalize(v);
    const double norm = n.norm();
    CHECK((std::abs(norm) <= 1e-9 || std::abs(norm - 1) <= 1e-9));
    const Vec scaled = unit_normalize(Vec(scale(rng) * v));
    CHECK((scaled - n).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("property: encode_sentence depends only on the token multiset") {
  EmbeddingTable table(4);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  std::vector<std::string> vocab;
  for (int k = 0; k < 10; ++k) {
    vocab.push_back("w" + std::to_string(k));
    table.insert(vocab.back(), Vec4(normal(rng), normal(rng), normal(rng), normal(rng)));
  }
  for (int round = 0; round < 50; ++round) {
    std::vector<std::string> words;
    for (int k = 0; k < 6; ++k) words.push_back(vocab[rng() % vocab.size()]);
    words.push_back("oov");
    auto join = [](const std::vector<std::string>& w) {
      std::string s;
      for (const auto& x : w) s += x + " ";
      return s;
    };
    const Vec a = encode_sentence(table, join(words)).values;
    std::sort(words.begin(), words.end());
    const Vec b = encode_sentence(table, join(words)).values;
    CHECK(a == b);
  }
}
