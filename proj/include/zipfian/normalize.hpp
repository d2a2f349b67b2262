// Instrument register and per-piece duration normalization.
#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zipfian/note_event.hpp"

namespace zipfian {

/// Octave shift per instrument plus duration scale per piece.
struct NormalizationPolicy {
  std::map<Instrument, int> octave_shift;
  std::map<std::string, Rational, std::less<>> duration_scale;  // default 1

  /// daegeum -1; gayageum, geomungo, ajaeng +1; piri, haegeum, voice 0.
  static NormalizationPolicy standard();

  /// `{ "octave_shift": {"daegeum": -1, ...},
  ///    "duration_scale": {"piece": "1/2", ...} }`
  /// Scale values accept "1/2" strings or 0.5 / 1 / 1.5 numbers. Instruments
  /// omitted from octave_shift keep the standard defaults.
  static NormalizationPolicy from_json(std::string_view json_text);

  int shift_for(Instrument instrument) const;
  Rational scale_for(std::string_view piece_id) const;
};

/// Shifts each pitch by the instrument's octave offset and multiplies each
/// duration by the piece's scale. Order and count preserved. Throws
/// DataError when a shifted octave leaves [0, 9].
std::vector<NoteEvent> normalize_events(std::span<const NoteEvent> events,
                                        const NormalizationPolicy& policy);

}  // namespace zipfian
