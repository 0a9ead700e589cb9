#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace sert {

/// Text preprocessing: lowercasing, punctuation splitting, stopword removal
/// and replacement of numeric tokens by a placeholder.
///
/// Rules, applied per whitespace-separated raw token:
///   1. leading/trailing non-alphanumeric characters are trimmed;
///   2. if the trimmed token is numeric (digits, optionally separated by
///      '.', ',' or '-', e.g. "42", "3.14", "1,000") it becomes kNumberToken;
///   3. otherwise it is split on the remaining non-alphanumeric characters;
///      every piece is lowercased, all-digit pieces become kNumberToken and
///      stopword pieces are dropped.
///
/// Bytes >= 0x80 are treated as word characters, so UTF-8 text passes
/// through with ASCII-only lowercasing.
class Tokenizer {
 public:
  static constexpr const char* kPadToken = "<pad>";
  static constexpr const char* kNumberToken = "<num>";

  /// Uses the built-in English stopword list.
  Tokenizer();

  explicit Tokenizer(std::unordered_set<std::string> stopwords);

  /// Loads one stopword per line; '#' starts a comment, blank lines ignored.
  static Tokenizer from_stopword_file(const std::string& path);

  static const std::unordered_set<std::string>& default_stopwords();

  std::vector<std::string> tokenize(std::string_view raw_text) const;

  bool is_stopword(const std::string& token) const {
    return stopwords_.contains(token);
  }

  /// True for tokens consisting of digit groups separated by '.', ',' or '-'.
  static bool is_numeric_token(std::string_view token);

 private:
  std::unordered_set<std::string> stopwords_;
};

}  // namespace sert
