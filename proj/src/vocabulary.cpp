#include "sert/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sert/tokenizer.hpp"

namespace sert {

void Vocabulary::insert(std::string token, std::uint64_t frequency) {
  const TokenId id = static_cast<TokenId>(id_to_token_.size());
  token_to_id_.emplace(token, id);
  id_to_token_.push_back(std::move(token));
  frequencies_.push_back(frequency);
}

Vocabulary Vocabulary::from_counts(const std::map<std::string, std::uint64_t>& counts,
                                   std::size_t size_limit) {
  if (size_limit < 1) {
    throw InvalidArgument("vocabulary size limit must be >= 1");
  }
  Vocabulary vocab;
  vocab.size_limit_ = size_limit;
  std::uint64_t pad_count = 0;
  std::uint64_t num_count = 0;

  std::vector<std::pair<std::string_view, std::uint64_t>> regular;
  regular.reserve(counts.size());
  for (const auto& [token, count] : counts) {
    if (token == Tokenizer::kPadToken) {
      pad_count = count;
    } else if (token == Tokenizer::kNumberToken) {
      num_count = count;
    } else {
      regular.emplace_back(token, count);
    }
  }

  vocab.insert(Tokenizer::kPadToken, pad_count);
  vocab.insert(Tokenizer::kNumberToken, num_count);

  // Most frequent first; equal counts keep the lexicographically smaller
  // token (input is already token-sorted, so the sort only needs stability
  // on counts).
  std::stable_sort(regular.begin(), regular.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (regular.size() > size_limit) {
    regular.resize(size_limit);
  }
  for (const auto& [token, count] : regular) {
    vocab.insert(std::string(token), count);
  }
  return vocab;
}

Vocabulary Vocabulary::from_ordered(std::vector<std::pair<std::string, std::uint64_t>> entries,
                                    std::size_t size_limit) {
  if (entries.size() < kReservedCount || entries[kPadId].first != Tokenizer::kPadToken ||
      entries[kNumId].first != Tokenizer::kNumberToken) {
    throw FormatError("vocabulary lacks the reserved tokens");
  }
  Vocabulary vocab;
  vocab.size_limit_ = std::max(size_limit, std::size_t{1});
  for (auto& [token, frequency] : entries) {
    if (vocab.token_to_id_.contains(token)) {
      throw FormatError("duplicate vocabulary token: " + token);
    }
    vocab.insert(std::move(token), frequency);
  }
  return vocab;
}

std::optional<TokenId> Vocabulary::id_of(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  if (it == token_to_id_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::token_of(TokenId id) const {
  if (id >= id_to_token_.size()) {
    throw InvalidArgument("token id out of range: " + std::to_string(id));
  }
  return id_to_token_[id];
}

std::uint64_t Vocabulary::frequency(TokenId id) const {
  if (id >= frequencies_.size()) {
    throw InvalidArgument("token id out of range: " + std::to_string(id));
  }
  return frequencies_[id];
}

std::vector<TokenId> Vocabulary::encode(const std::vector<std::string>& tokens) const {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (auto id = id_of(token)) ids.push_back(*id);
  }
  return ids;
}

bool Vocabulary::operator==(const Vocabulary& other) const {
  // size_limit_ is a build parameter, not part of the serialized identity.
  return id_to_token_ == other.id_to_token_ && frequencies_ == other.frequencies_;
}

void Vocabulary::save(std::ostream& out) const {
  for (std::size_t id = 0; id < id_to_token_.size(); ++id) {
    out << id_to_token_[id] << '\t' << id << '\t' << frequencies_[id] << '\n';
  }
  if (!out) {
    throw IoError("failed writing vocabulary");
  }
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  save(out);
}

Vocabulary Vocabulary::load(std::istream& in) {
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string token;
    std::uint64_t id = 0;
    std::uint64_t frequency = 0;
    if (!(std::getline(fields, token, '\t') && fields >> id && fields >> frequency)) {
      throw FormatError("vocabulary line " + std::to_string(line_no) + " malformed");
    }
    if (id != entries.size()) {
      throw FormatError("vocabulary ids must be dense and in order (line " +
                        std::to_string(line_no) + ")");
    }
    entries.emplace_back(std::move(token), frequency);
  }
  const std::size_t regular =
      entries.size() > kReservedCount ? entries.size() - kReservedCount : 0;
  return from_ordered(std::move(entries), std::max(regular, std::size_t{1}));
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary file: " + path);
  return load(in);
}

}  // namespace sert
