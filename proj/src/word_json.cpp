#include "dlab/word_json.hpp"

#include <stdexcept>

namespace dlab {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json word_to_json(const Word& w) {
  ordered_json letters = ordered_json::array();
  for (const auto& letter : w) {
    if (std::holds_alternative<Involution>(letter)) {
      letters.push_back({{"kind", "involution"}});
      continue;
    }
    const auto& o = std::get<Overshear>(letter);
    letters.push_back({{"kind", "overshear"},
                       {"side", o.side == Side::First ? "first" : "second"},
                       {"f", o.f.to_string()},
                       {"g", o.g.to_string()}});
  }
  return ordered_json{{"letters", letters}};
}

Word word_from_json(const json& j) {
  if (!j.is_object() || !j.contains("letters") || !j["letters"].is_array())
    throw std::invalid_argument("word JSON must be {\"letters\": [...]}");
  Word out;
  for (const auto& entry : j["letters"]) {
    const std::string kind = entry.value("kind", "");
    if (kind == "involution") {
      out.push_back(Involution{});
      continue;
    }
    if (kind != "overshear")
      throw std::invalid_argument("letter kind must be 'overshear' or 'involution'");
    const std::string side = entry.value("side", "first");
    if (side != "first" && side != "second")
      throw std::invalid_argument("overshear side must be 'first' or 'second'");
    if (!entry.contains("f") || !entry.contains("g"))
      throw std::invalid_argument("overshear letter needs 'f' and 'g' expressions");
    out.push_back(Overshear{
        parse_entire_expr(entry["f"].get<std::string>()),
        parse_entire_expr(entry["g"].get<std::string>()),
        side == "first" ? Side::First : Side::Second});
  }
  return out;
}

}  // namespace dlab
