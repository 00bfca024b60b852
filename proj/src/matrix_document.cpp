#include "antieigen/matrix_document.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "antieigen/error.hpp"
#include "json.hpp"

namespace antieigen {

namespace {

using nlohmann::json;

Complex parse_entry(const json& e) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw InvalidInput("each matrix entry must be a two-element [re, im] numeric array");
    }
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
        throw InvalidInput("matrix entries must be finite");
    }
    return {re, im};
}

} // namespace

MatrixDocument parse_matrix_document(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("matrix document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw InvalidInput("matrix document must be a JSON object");
    }
    if (!doc.contains("n") || !doc["n"].is_number_integer()) {
        throw InvalidInput("matrix document needs an integer field \"n\"");
    }
    const auto n_signed = doc["n"].get<long long>();
    if (n_signed < 1 || n_signed > static_cast<long long>(kMaxDimension)) {
        throw InvalidInput("matrix dimension n must lie in [1, " + std::to_string(kMaxDimension) + "]");
    }
    const auto n = static_cast<std::size_t>(n_signed);
    if (!doc.contains("entries") || !doc["entries"].is_array()) {
        throw InvalidInput("matrix document needs an array field \"entries\"");
    }
    const json& entries = doc["entries"];

    std::vector<Complex> values;
    values.reserve(n * n);
    const bool nested = entries.size() == n && !entries.empty() && entries[0].is_array() && !entries[0].empty() &&
                        entries[0][0].is_array();
    if (nested) {
        for (const auto& row : entries) {
            if (!row.is_array() || row.size() != n) {
                throw InvalidInput("matrix is not square: every row needs " + std::to_string(n) + " entries");
            }
            for (const auto& e : row) {
                values.push_back(parse_entry(e));
            }
        }
    } else {
        if (entries.size() != n * n) {
            throw InvalidInput("matrix is not square: expected " + std::to_string(n) + " rows of " +
                               std::to_string(n) + " entries or a flat list of " + std::to_string(n * n));
        }
        for (const auto& e : entries) {
            values.push_back(parse_entry(e));
        }
    }

    MatrixDocument out{Matrix(n, std::move(values)), std::nullopt};
    if (doc.contains("label")) {
        if (!doc["label"].is_string()) {
            throw InvalidInput("\"label\" must be a string");
        }
        out.label = doc["label"].get<std::string>();
    }
    return out;
}

MatrixDocument load_matrix_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open matrix file '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_matrix_document(text.str());
}

std::string dump_matrix_document(const MatrixDocument& doc) {
    const std::size_t n = doc.matrix.size();
    json entries = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < n; ++j) {
            const Complex x = doc.matrix(i, j);
            row.push_back(json::array({x.real(), x.imag()}));
        }
        entries.push_back(std::move(row));
    }
    json out = {{"n", n}, {"entries", std::move(entries)}};
    if (doc.label) {
        out["label"] = *doc.label;
    }
    return out.dump();
}

} // namespace antieigen
