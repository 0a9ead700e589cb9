#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sert/types.hpp"

namespace sert {

/// Frequency-pruned token <-> id map with two reserved entries: the padding
/// token (id 0) and the numeric placeholder (id 1). Regular ids start at 2
/// and are assigned in (frequency descending, token ascending) order, so a
/// vocabulary is fully determined by its counts and size limit.
class Vocabulary {
 public:
  static constexpr TokenId kPadId = 0;
  static constexpr TokenId kNumId = 1;
  static constexpr std::size_t kReservedCount = 2;
  static constexpr std::size_t kDefaultSizeLimit = std::size_t{1} << 16;

  Vocabulary() = default;

  /// Builds from per-token counts, retaining at most `size_limit` of the most
  /// frequent non-reserved tokens (ties kept for the lexicographically
  /// smaller token). Counts for the reserved tokens themselves are folded
  /// into the reserved slots.
  static Vocabulary from_counts(const std::map<std::string, std::uint64_t>& counts,
                                std::size_t size_limit);

  /// Rebuilds a vocabulary from already-ordered (token, frequency) entries,
  /// e.g. read back from disk. Entry i receives id i; the first two entries
  /// must be the reserved tokens.
  static Vocabulary from_ordered(std::vector<std::pair<std::string, std::uint64_t>> entries,
                                 std::size_t size_limit);

  std::optional<TokenId> id_of(std::string_view token) const;
  const std::string& token_of(TokenId id) const;
  std::uint64_t frequency(TokenId id) const;

  std::size_t size() const { return id_to_token_.size(); }
  std::size_t size_limit() const { return size_limit_; }
  TokenId pad_id() const { return kPadId; }
  TokenId num_id() const { return kNumId; }

  /// Encodes a token sequence; out-of-vocabulary tokens are dropped.
  std::vector<TokenId> encode(const std::vector<std::string>& tokens) const;

  bool operator==(const Vocabulary& other) const;

  /// One `<token>\t<id>\t<frequency>` line per token, reserved tokens first.
  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static Vocabulary load(std::istream& in);
  static Vocabulary load(const std::string& path);

 private:
  void insert(std::string token, std::uint64_t frequency);

  std::vector<std::string> id_to_token_;
  std::vector<std::uint64_t> frequencies_;
  std::unordered_map<std::string, TokenId> token_to_id_;
  std::size_t size_limit_ = kDefaultSizeLimit;
};

}  // namespace sert
