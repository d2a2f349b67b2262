#include "zipfian/yulmyeong.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "zipfian/errors.hpp"

namespace zipfian {

YulmyeongTable YulmyeongTable::standard() {
  YulmyeongTable table;
  table.keynote = Pitch{'E', -1, 4};
  table.mapping = {
      {"黃", 0},   // Hwang
      {"大", 1},   // Dae
      {"太", 2},   // Tae
      {"夾", 3},   // Hyeop
      {"姑", 4},   // Go
      {"仲", 5},   // Jung
      {"蕤", 6},   // Yu
      {"林", 7},   // Im
      {"夷", 8},   // I
      {"南", 9},   // Nam
      {"無", 10},  // Mu
      {"應", 11},  // Eung
  };
  table.octave_markers = {
      {"氵", 1},   // water radical: one octave up
      {"亻", -1},  // person radical: one octave down
      {"彳", -2},  // double-person radical: two octaves down
  };
  return table;
}

YulmyeongTable YulmyeongTable::from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("yulmyeong config: ") + e.what(), 1);
  }
  YulmyeongTable table;
  if (doc.contains("keynote")) {
    table.keynote = parse_pitch(doc["keynote"].get<std::string>());
  }
  if (!doc.contains("mapping")) throw DataError("yulmyeong config missing 'mapping'");
  for (const auto& [symbol, offset] : doc["mapping"].items()) {
    table.mapping[symbol] = offset.get<int>();
  }
  if (doc.contains("octave_markers")) {
    for (const auto& [symbol, shift] : doc["octave_markers"].items()) {
      table.octave_markers[symbol] = shift.get<int>();
    }
  }
  table.validate();
  return table;
}

std::string YulmyeongTable::to_json() const {
  nlohmann::ordered_json doc;
  doc["keynote"] = keynote.str();
  doc["mapping"] = nlohmann::ordered_json::object();
  for (const auto& [symbol, offset] : mapping) doc["mapping"][symbol] = offset;
  doc["octave_markers"] = nlohmann::ordered_json::object();
  for (const auto& [symbol, shift] : octave_markers) doc["octave_markers"][symbol] = shift;
  return doc.dump(2) + "\n";
}

void YulmyeongTable::validate() const {
  if (mapping.size() != 12) {
    throw DataError("yulmyeong mapping must have exactly 12 symbols, has " +
                    std::to_string(mapping.size()));
  }
  std::set<int> offsets;
  for (const auto& [symbol, offset] : mapping) {
    if (offset < 0 || offset > 11) {
      throw DataError("yulmyeong offset for '" + symbol + "' outside 0..11");
    }
    if (!offsets.insert(offset).second) {
      throw DataError("duplicate yulmyeong offset " + std::to_string(offset));
    }
  }
  auto hwang = mapping.find("黃");
  if (hwang != mapping.end() && hwang->second != 0) {
    throw DataError("keynote symbol must map to offset 0");
  }
}

Pitch yulmyeong_to_pitch(std::string_view token, const YulmyeongTable& table) {
  int octave_shift = 0;
  std::string_view rest = token;
  // Longest-prefix marker match; a token carries at most one marker.
  const std::string* best = nullptr;
  int best_shift = 0;
  for (const auto& [marker, shift] : table.octave_markers) {
    if (rest.substr(0, marker.size()) == marker &&
        (best == nullptr || marker.size() > best->size())) {
      best = &marker;
      best_shift = shift;
    }
  }
  if (best != nullptr) {
    octave_shift = best_shift;
    rest.remove_prefix(best->size());
  }
  auto it = table.mapping.find(std::string(rest));
  if (it == table.mapping.end()) {
    throw MappingError("unknown yulmyeong token '" + std::string(token) + "'");
  }
  int midi = table.keynote.midi() + it->second + 12 * octave_shift;
  return pitch_from_midi_flat(midi);
}

}  // namespace zipfian
