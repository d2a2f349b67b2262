// Yulmyeong pitch names and their mapping to Western pitches.
#pragma once

#include <map>
#include <string>
#include <string_view>

#include "zipfian/pitch.hpp"

namespace zipfian {

/// The twelve yulmyeong symbols, their chromatic offsets from the keynote,
/// and the octave-marker prefixes used by modern jeongganbo.
struct YulmyeongTable {
  Pitch keynote = Pitch{'E', -1, 4};      // Hwang -> Eb4
  std::map<std::string, int> mapping;     // base symbol -> offset 0..11
  std::map<std::string, int> octave_markers;  // prefix symbol -> octave shift

  /// The table shipped with the toolkit: chromatic from Eb4 with Hwang at
  /// offset 0, marker prefixes for one octave up/down and two down.
  static YulmyeongTable standard();

  /// Loads `{ "keynote": "Eb4", "mapping": {...}, "octave_markers": {...} }`.
  static YulmyeongTable from_json(std::string_view json_text);

  std::string to_json() const;

  /// Enforces twelve distinct symbols covering offsets 0..11 exactly, with
  /// the keynote symbol at offset 0. Throws DataError on violation.
  void validate() const;
};

/// Resolves one token (optional octave-marker prefix plus a base symbol) to
/// a pitch. Throws MappingError listing the token when the base symbol is
/// not in the table.
Pitch yulmyeong_to_pitch(std::string_view token, const YulmyeongTable& table);

}  // namespace zipfian
