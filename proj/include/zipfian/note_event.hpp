// Note events and the event CSV format.
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zipfian/pitch.hpp"
#include "zipfian/rational.hpp"

namespace zipfian {

enum class Instrument {
  Geomungo,
  Piri,
  Gayageum,
  Daegeum,
  Haegeum,
  Ajaeng,
  Voice,
};

std::string_view instrument_name(Instrument instrument);

/// Parses "piri", "Daegeum", ... (case-insensitive). Throws MappingError.
Instrument parse_instrument(std::string_view name);

/// Matches an instrument name inside free text such as a MusicXML part-name.
/// Returns false when no known instrument occurs in the text.
bool find_instrument(std::string_view text, Instrument& out);

/// One pitched note with exact duration in quarter-note units.
struct NoteEvent {
  Pitch pitch;
  Rational duration;  // > 0
  Instrument instrument = Instrument::Piri;
  std::string piece_id;

  bool operator==(const NoteEvent& other) const {
    return pitch == other.pitch && duration == other.duration &&
           instrument == other.instrument && piece_id == other.piece_id;
  }
};

/// Event CSV: header `piece_id,instrument,pitch,duration_num,duration_den`.
std::string events_to_csv(std::span<const NoteEvent> events);
std::vector<NoteEvent> events_from_csv(std::string_view csv);

}  // namespace zipfian
