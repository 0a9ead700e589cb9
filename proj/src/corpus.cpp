#include "sert/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace sert {

CandidateId CandidateRegistry::add(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  const CandidateId id = static_cast<CandidateId>(names_.size());
  index_.emplace(name, id);
  names_.push_back(name);
  return id;
}

std::optional<CandidateId> CandidateRegistry::id_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& CandidateRegistry::name_of(CandidateId id) const {
  if (id >= names_.size()) {
    throw InvalidArgument("candidate id out of range: " + std::to_string(id));
  }
  return names_[id];
}

void CandidateRegistry::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (std::size_t id = 0; id < names_.size(); ++id) {
    out << names_[id] << '\t' << id << '\n';
  }
  if (!out) throw IoError("failed writing registry: " + path);
}

CandidateRegistry CandidateRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open registry file: " + path);
  CandidateRegistry registry;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("registry line " + std::to_string(line_no) + " malformed");
    }
    const std::string name = line.substr(0, tab);
    const CandidateId id = registry.add(name);
    if (std::to_string(id) != line.substr(tab + 1)) {
      throw FormatError("registry ids must be dense and in order (line " +
                        std::to_string(line_no) + ")");
    }
  }
  return registry;
}

Vocabulary build_vocabulary(const std::vector<RawDocument>& documents,
                            const Tokenizer& tokenizer, std::size_t size_limit) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& doc : documents) {
    for (auto& token : tokenizer.tokenize(doc.text)) {
      ++counts[std::move(token)];
    }
  }
  if (counts.empty()) {
    throw InvalidArgument("empty corpus: no trainable vocabulary");
  }
  return Vocabulary::from_counts(counts, size_limit);
}

EncodedCorpus encode_corpus(const std::vector<RawDocument>& documents,
                            const Tokenizer& tokenizer, const Vocabulary& vocabulary) {
  EncodedCorpus corpus;
  corpus.documents.reserve(documents.size());
  for (const auto& raw : documents) {
    Document doc;
    doc.doc_id = raw.doc_id;
    doc.tokens = vocabulary.encode(tokenizer.tokenize(raw.text));
    for (const auto& name : raw.candidates) {
      doc.associations.push_back(corpus.registry.add(name));
    }
    std::sort(doc.associations.begin(), doc.associations.end());
    doc.associations.erase(std::unique(doc.associations.begin(), doc.associations.end()),
                           doc.associations.end());
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

std::vector<NGramInstance> extract_ngrams(const Document& document, std::size_t n,
                                          bool overlapping, TokenId pad_id) {
  if (n == 0) {
    throw InvalidArgument("n-gram width must be >= 1");
  }
  std::vector<NGramInstance> instances;
  if (document.associations.empty() || document.tokens.empty()) {
    return instances;
  }

  std::vector<std::pair<CandidateId, double>> target;
  target.reserve(document.associations.size());
  const double mass = 1.0 / static_cast<double>(document.associations.size());
  for (CandidateId c : document.associations) {
    target.emplace_back(c, mass);
  }

  const std::size_t len = document.tokens.size();
  const std::size_t stride = overlapping ? 1 : n;
  instances.reserve((len + stride - 1) / stride);
  for (std::size_t start = 0; start < len; start += stride) {
    NGramInstance inst;
    inst.word_ids.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      inst.word_ids.push_back(start + k < len ? document.tokens[start + k] : pad_id);
    }
    inst.source_doc = document.doc_id;
    inst.doc_length = static_cast<std::uint32_t>(len);
    inst.target = target;
    instances.push_back(std::move(inst));
  }
  return instances;
}

std::vector<RawDocument> read_jsonl_corpus(std::istream& in) {
  std::vector<RawDocument> documents;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!parsed.is_object() || !parsed.contains("doc_id") || !parsed.contains("text")) {
      throw FormatError("corpus line " + std::to_string(line_no) +
                        ": expected object with doc_id and text");
    }
    RawDocument doc;
    try {
      doc.doc_id = parsed.at("doc_id").get<std::string>();
      doc.text = parsed.at("text").get<std::string>();
      if (parsed.contains("candidates")) {
        doc.candidates = parsed.at("candidates").get<std::vector<std::string>>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
    documents.push_back(std::move(doc));
  }
  return documents;
}

std::vector<RawDocument> read_jsonl_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path);
  return read_jsonl_corpus(in);
}

void write_jsonl_corpus(const std::vector<RawDocument>& documents, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& doc : documents) {
    nlohmann::json obj{{"doc_id", doc.doc_id}, {"text", doc.text}, {"candidates", doc.candidates}};
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("failed writing corpus: " + path);
}

void save_encoded_corpus(const EncodedCorpus& corpus, const std::string& doc_path,
                         const std::string& registry_path) {
  corpus.registry.save(registry_path);
  std::ofstream out(doc_path);
  if (!out) throw IoError("cannot open for writing: " + doc_path);
  for (const auto& doc : corpus.documents) {
    out << doc.doc_id << '\t';
    for (std::size_t i = 0; i < doc.associations.size(); ++i) {
      if (i) out << ',';
      out << doc.associations[i];
    }
    out << '\t';
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      if (i) out << ' ';
      out << doc.tokens[i];
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing encoded corpus: " + doc_path);
}

EncodedCorpus load_encoded_corpus(const std::string& doc_path,
                                  const std::string& registry_path) {
  EncodedCorpus corpus;
  corpus.registry = CandidateRegistry::load(registry_path);
  std::ifstream in(doc_path);
  if (!in) throw IoError("cannot open encoded corpus: " + doc_path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) {
      throw FormatError("encoded corpus line " + std::to_string(line_no) + " malformed");
    }
    Document doc;
    doc.doc_id = line.substr(0, tab1);
    std::istringstream assoc_in(line.substr(tab1 + 1, tab2 - tab1 - 1));
    std::string field;
    while (std::getline(assoc_in, field, ',')) {
      if (field.empty()) continue;
      const unsigned long id = std::stoul(field);
      if (id >= corpus.registry.size()) {
        throw FormatError("encoded corpus line " + std::to_string(line_no) +
                          ": candidate id outside registry");
      }
      doc.associations.push_back(static_cast<CandidateId>(id));
    }
    std::istringstream token_in(line.substr(tab2 + 1));
    unsigned long token = 0;
    while (token_in >> token) {
      doc.tokens.push_back(static_cast<TokenId>(token));
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace sert
