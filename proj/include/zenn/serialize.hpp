#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "zenn/model.hpp"

namespace zenn {

struct SerializeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Document does not parse (bad magic, truncation, unknown tokens, ...).
struct MalformedModelError : SerializeError {
  using SerializeError::SerializeError;
};
// Document parses but declares an unsupported format version.
struct VersionMismatchError : SerializeError {
  using SerializeError::SerializeError;
};
// Document parses but its declared sizes contradict its architecture.
struct DimMismatchError : SerializeError {
  using SerializeError::SerializeError;
};

// Versioned plain-text document: an architecture descriptor followed by
// flat parameter arrays printed with 17 significant digits, so the
// round trip reproduces every double bit-exactly.
std::string serialize_model(const Model& model);
Model deserialize_model(std::string_view text);

void save_model_file(const Model& model, const std::string& path);
Model load_model_file(const std::string& path);

}  // namespace zenn
