#include "sert/model_io.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace sert {

namespace {

constexpr char kMagic[8] = {'S', 'E', 'R', 'T', 'M', 'O', 'D', 'L'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "model file i/o assumes a little-endian host");

class CheckedWriter {
 public:
  explicit CheckedWriter(std::ostream& out) : out_(out) {}

  void bytes(const void* data, std::size_t size) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    crc_ = crc32(crc_, static_cast<const Bytef*>(data), static_cast<uInt>(size));
  }

  template <class T>
  void pod(T value) {
    bytes(&value, sizeof(T));
  }

  void string(const std::string& s) {
    pod(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }

  std::uint32_t crc() const { return static_cast<std::uint32_t>(crc_); }

 private:
  std::ostream& out_;
  uLong crc_ = crc32(0L, Z_NULL, 0);
};

class CheckedReader {
 public:
  explicit CheckedReader(std::istream& in) : in_(in) {}

  void bytes(void* data, std::size_t size) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(in_.gcount()) != size) {
      throw FormatError("model file truncated");
    }
    crc_ = crc32(crc_, static_cast<const Bytef*>(data), static_cast<uInt>(size));
  }

  template <class T>
  T pod() {
    T value;
    bytes(&value, sizeof(T));
    return value;
  }

  std::string string() {
    const auto size = pod<std::uint32_t>();
    if (size > (1u << 20)) {
      throw FormatError("implausible string length in model file");
    }
    std::string s(size, '\0');
    bytes(s.data(), size);
    return s;
  }

  std::uint32_t crc() const { return static_cast<std::uint32_t>(crc_); }

 private:
  std::istream& in_;
  uLong crc_ = crc32(0L, Z_NULL, 0);
};

void write_row_major(CheckedWriter& w, const Eigen::MatrixXf& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      w.pod(m(r, c));
    }
  }
}

Eigen::MatrixXf read_row_major(CheckedReader& r, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXf m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = r.pod<float>();
    }
  }
  return m;
}

}  // namespace

void save_model(const LogLinearModel<float>& model, const std::string& path) {
  model.check_shapes();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);

  CheckedWriter w(out);
  w.bytes(kMagic, sizeof(kMagic));
  w.pod(kVersion);
  w.pod(static_cast<std::uint64_t>(model.embedding_size()));
  w.pod(static_cast<std::uint64_t>(model.vocab_size()));
  w.pod(static_cast<std::uint64_t>(model.candidate_count()));
  write_row_major(w, model.word_projection);
  write_row_major(w, model.candidate_weights);
  for (Eigen::Index c = 0; c < model.bias.size(); ++c) {
    w.pod(model.bias[c]);
  }

  w.pod(static_cast<std::uint64_t>(model.vocabulary.size()));
  w.pod(static_cast<std::uint64_t>(model.vocabulary.size_limit()));
  for (std::size_t id = 0; id < model.vocabulary.size(); ++id) {
    w.string(model.vocabulary.token_of(static_cast<TokenId>(id)));
    w.pod(model.vocabulary.frequency(static_cast<TokenId>(id)));
  }
  w.pod(static_cast<std::uint64_t>(model.registry.size()));
  for (std::size_t id = 0; id < model.registry.size(); ++id) {
    w.string(model.registry.name_of(static_cast<CandidateId>(id)));
  }

  const std::uint32_t crc = w.crc();
  out.write(reinterpret_cast<const char*>(&crc), sizeof(crc));
  if (!out) throw IoError("failed writing model: " + path);
}

LogLinearModel<float> load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);

  CheckedReader r(in);
  char magic[8];
  r.bytes(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("not a model file (bad magic bytes): " + path);
  }
  if (const auto version = r.pod<std::uint32_t>(); version != kVersion) {
    throw FormatError("unsupported model format version " + std::to_string(version));
  }
  const auto e = static_cast<Eigen::Index>(r.pod<std::uint64_t>());
  const auto vocab_size = static_cast<Eigen::Index>(r.pod<std::uint64_t>());
  const auto candidates = static_cast<Eigen::Index>(r.pod<std::uint64_t>());

  LogLinearModel<float> model;
  model.word_projection = read_row_major(r, e, vocab_size);
  model.candidate_weights = read_row_major(r, candidates, e);
  model.bias.resize(candidates);
  for (Eigen::Index c = 0; c < candidates; ++c) {
    model.bias[c] = r.pod<float>();
  }

  const auto vocab_entries = r.pod<std::uint64_t>();
  if (vocab_entries != static_cast<std::uint64_t>(vocab_size)) {
    throw ShapeError("vocabulary table size disagrees with declared |V|");
  }
  const auto size_limit = r.pod<std::uint64_t>();
  std::vector<std::pair<std::string, std::uint64_t>> ordered;
  ordered.reserve(vocab_entries);
  for (std::uint64_t i = 0; i < vocab_entries; ++i) {
    auto token = r.string();
    const auto frequency = r.pod<std::uint64_t>();
    ordered.emplace_back(std::move(token), frequency);
  }
  model.vocabulary =
      Vocabulary::from_ordered(std::move(ordered), static_cast<std::size_t>(size_limit));

  const auto registry_entries = r.pod<std::uint64_t>();
  if (registry_entries != static_cast<std::uint64_t>(candidates)) {
    throw ShapeError("registry table size disagrees with declared |C|");
  }
  for (std::uint64_t i = 0; i < registry_entries; ++i) {
    model.registry.add(r.string());
  }
  if (model.registry.size() != static_cast<std::size_t>(candidates)) {
    throw ShapeError("registry contains duplicate candidate names");
  }

  const std::uint32_t expected_crc = r.crc();
  std::uint32_t stored_crc = 0;
  in.read(reinterpret_cast<char*>(&stored_crc), sizeof(stored_crc));
  if (in.gcount() != sizeof(stored_crc)) {
    throw FormatError("model file truncated (missing checksum)");
  }
  if (stored_crc != expected_crc) {
    throw FormatError("model file checksum mismatch");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after model checksum");
  }
  model.check_shapes();
  return model;
}

}  // namespace sert
