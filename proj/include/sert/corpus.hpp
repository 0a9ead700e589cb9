#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sert/tokenizer.hpp"
#include "sert/types.hpp"
#include "sert/vocabulary.hpp"

namespace sert {

/// A document as read from disk, before any preprocessing.
struct RawDocument {
  std::string doc_id;
  std::string text;
  std::vector<std::string> candidates;
};

/// Dense candidate-expert index. Ids are assigned in first-seen order.
class CandidateRegistry {
 public:
  CandidateId add(const std::string& name);
  std::optional<CandidateId> id_of(const std::string& name) const;
  const std::string& name_of(CandidateId id) const;
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const CandidateRegistry& other) const { return names_ == other.names_; }

  void save(const std::string& path) const;
  static CandidateRegistry load(const std::string& path);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, CandidateId> index_;
};

/// Tokenized, vocabulary-encoded document. `associations` is sorted and
/// deduplicated; it may be empty, in which case the document contributes to
/// corpus statistics but not to training.
struct Document {
  std::string doc_id;
  std::vector<TokenId> tokens;
  std::vector<CandidateId> associations;
};

/// One fixed-width training window plus the ideal candidate distribution of
/// its source document (1/|assoc| on each associated candidate).
struct NGramInstance {
  std::vector<TokenId> word_ids;
  std::string source_doc;
  std::uint32_t doc_length = 0;
  std::vector<std::pair<CandidateId, double>> target;
};

struct EncodedCorpus {
  std::vector<Document> documents;
  CandidateRegistry registry;
};

/// Counts tokens over the whole corpus and prunes to the most frequent
/// `size_limit` tokens. Throws InvalidArgument when no tokens survive.
Vocabulary build_vocabulary(const std::vector<RawDocument>& documents,
                            const Tokenizer& tokenizer,
                            std::size_t size_limit = Vocabulary::kDefaultSizeLimit);

/// Encodes every document against the vocabulary (OOV tokens dropped) and
/// registers all associated candidates.
EncodedCorpus encode_corpus(const std::vector<RawDocument>& documents,
                            const Tokenizer& tokenizer, const Vocabulary& vocabulary);

/// Extracts n-token windows: stride n when non-overlapping (ceil(|d|/n)
/// instances), stride 1 when overlapping (|d| instances). Incomplete windows
/// are filled with `pad_id`. Documents without associations yield nothing.
std::vector<NGramInstance> extract_ngrams(const Document& document, std::size_t n,
                                          bool overlapping, TokenId pad_id);

/// Reads a JSON-lines corpus: {"doc_id": ..., "text": ..., "candidates": [...]}.
/// Malformed lines raise FormatError naming the line number.
std::vector<RawDocument> read_jsonl_corpus(std::istream& in);
std::vector<RawDocument> read_jsonl_corpus(const std::string& path);
void write_jsonl_corpus(const std::vector<RawDocument>& documents, const std::string& path);

/// Encoded corpus persistence (TSV: doc_id, candidate ids, token ids).
void save_encoded_corpus(const EncodedCorpus& corpus, const std::string& doc_path,
                         const std::string& registry_path);
EncodedCorpus load_encoded_corpus(const std::string& doc_path,
                                  const std::string& registry_path);

}  // namespace sert
