#pragma once

#include <json.hpp>

#include "dlab/autos.hpp"

namespace dlab {

/// {"letters":[{"kind":"overshear","side":"first|second","f":"<expr>","g":"<expr>"},
///             {"kind":"involution"}]}
/// with f, g in the one-variable expression grammar.
nlohmann::ordered_json word_to_json(const Word& w);

/// Inverse of word_to_json; throws std::invalid_argument / ParseError on
/// malformed input.
Word word_from_json(const nlohmann::json& j);

}  // namespace dlab
