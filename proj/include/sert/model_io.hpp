#pragma once

#include <string>

#include "sert/model.hpp"

namespace sert {

/// Binary model file: magic "SERTMODL", u32 format version, u64 e/|V|/|C|,
/// then word_projection, candidate_weights and bias as row-major
/// little-endian float32 arrays, the vocabulary table (size limit, then per
/// token: length-prefixed UTF-8 bytes and a u64 frequency), the registry
/// table (per candidate: length-prefixed bytes), and a trailing CRC32 of all
/// preceding bytes.
///
/// Parameters are stored as float32 regardless of the in-memory precision;
/// round-trips are bit-exact for float models.
void save_model(const LogLinearModel<float>& model, const std::string& path);
LogLinearModel<float> load_model(const std::string& path);

}  // namespace sert
