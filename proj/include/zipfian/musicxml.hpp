// MusicXML-subset reader: partwise scores, pitched notes only.
#pragma once

#include <string_view>
#include <vector>

#include "zipfian/note_event.hpp"

namespace zipfian {

/// Extracts pitched notes in score order from a partwise MusicXML document.
///
/// Durations are exact rationals in quarter-note units (note duration divided
/// by the active `divisions`). Rests, grace notes, lyrics and ornaments are
/// skipped. Each pitch of a chord becomes its own event with the chord's
/// duration. Notes joined by tie start/stop merge into one event with the
/// summed duration.
///
/// The piece id comes from <work-title> and falls back to
/// `fallback_piece_id` when the document has none. Instruments are resolved
/// from part names.
std::vector<NoteEvent> parse_musicxml(std::string_view document,
                                      std::string_view fallback_piece_id = {});

}  // namespace zipfian
