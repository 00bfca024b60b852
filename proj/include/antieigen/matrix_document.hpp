#pragma once

// JSON matrix documents:
//
//   { "n": 2,
//     "entries": [[[2, -3], [0, 0]],
//                 [[0,  0], [3,  2]]],
//     "label": "optional text" }
//
// "entries" is row-major, each entry a two-element [re, im] array. Both the
// nested n x n form and a flat list of n*n entries are accepted; output always
// uses the nested form. Doubles are written with shortest round-trip formatting.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "antieigen/linalg.hpp"

namespace antieigen {

struct MatrixDocument {
    Matrix matrix;
    std::optional<std::string> label;
};

/// Throws InvalidInput on malformed JSON, non-square or non-finite data, or n > 128.
MatrixDocument parse_matrix_document(std::string_view json_text);

/// Throws InvalidInput when the file cannot be read or parsed.
MatrixDocument load_matrix_document(const std::filesystem::path& path);

std::string dump_matrix_document(const MatrixDocument& doc);

} // namespace antieigen
