#pragma once

#include <string>

#include "json.hpp"
#include "vce/errors.hpp"
#include "vce/model.hpp"
#include "vce/reductions.hpp"
#include "vce/solver.hpp"

namespace vce::io {

// Field order is part of the document contract (outputs are compared
// byte-for-byte in tests), hence ordered_json throughout.
using Json = nlohmann::ordered_json;

// Exact values only: integers encode as JSON numbers, non-integers as "p/q"
// strings. Floating-point input is rejected.
Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& where);

Json instance_to_json(const EmbeddingInstance& instance);
EmbeddingInstance instance_from_json(const Json& doc);

Json embedding_to_json(const Embedding& embedding);
Embedding embedding_from_json(const Json& doc);

Json result_to_json(const solver::SolveResult& result);
Json decision_to_json(const solver::DecideResult& result, const Rational& threshold);
Json metadata_to_json(const reductions::ReductionArtifacts& art);

std::string dump_document(const Json& doc);          // 2-space indent, trailing newline
Json parse_document(const std::string& text);        // ParseError on malformed JSON
Json load_document(const std::string& path);         // ParseError on unreadable/malformed
void save_document(const std::string& path, const Json& doc);

}  // namespace vce::io
