#include "sert/tokenizer.hpp"

#include <cctype>
#include <fstream>

#include "sert/types.hpp"

namespace sert {

namespace {

bool is_word_char(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

char ascii_lower(unsigned char c) {
  return static_cast<char>(std::tolower(c));
}

}  // namespace

Tokenizer::Tokenizer() : stopwords_(default_stopwords()) {}

Tokenizer::Tokenizer(std::unordered_set<std::string> stopwords)
    : stopwords_(std::move(stopwords)) {}

Tokenizer Tokenizer::from_stopword_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open stopword file: " + path);
  }
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::string word;
    for (unsigned char c : line) {
      if (!std::isspace(c)) word.push_back(ascii_lower(c));
    }
    if (!word.empty()) words.insert(std::move(word));
  }
  return Tokenizer(std::move(words));
}

bool Tokenizer::is_numeric_token(std::string_view token) {
  bool saw_digit = false;
  bool prev_digit = false;
  for (unsigned char c : token) {
    if (std::isdigit(c)) {
      saw_digit = true;
      prev_digit = true;
    } else if (c == '.' || c == ',' || c == '-') {
      if (!prev_digit) return false;  // separator needs a digit on each side
      prev_digit = false;
    } else {
      return false;
    }
  }
  return saw_digit && prev_digit;
}

std::vector<std::string> Tokenizer::tokenize(std::string_view raw_text) const {
  std::vector<std::string> out;
  std::string piece;

  auto flush_piece = [&] {
    if (piece.empty()) return;
    if (is_numeric_token(piece)) {
      out.emplace_back(kNumberToken);
    } else if (!is_stopword(piece)) {
      out.push_back(piece);
    }
    piece.clear();
  };

  std::size_t pos = 0;
  const std::size_t n = raw_text.size();
  while (pos < n) {
    while (pos < n && std::isspace(static_cast<unsigned char>(raw_text[pos]))) ++pos;
    std::size_t end = pos;
    while (end < n && !std::isspace(static_cast<unsigned char>(raw_text[end]))) ++end;
    if (end == pos) break;

    std::string_view word = raw_text.substr(pos, end - pos);
    pos = end;

    // Trim surrounding punctuation, then test the whole word so that
    // separator-bearing numbers ("3.14", "1,000") survive as one token.
    std::size_t lo = 0, hi = word.size();
    while (lo < hi && !is_word_char(word[lo])) ++lo;
    while (hi > lo && !is_word_char(word[hi - 1])) --hi;
    word = word.substr(lo, hi - lo);
    if (word.empty()) continue;

    if (is_numeric_token(word)) {
      out.emplace_back(kNumberToken);
      continue;
    }
    for (unsigned char c : word) {
      if (is_word_char(c)) {
        piece.push_back(ascii_lower(c));
      } else {
        flush_piece();
      }
    }
    flush_piece();
  }
  return out;
}

}  // namespace sert
