// Pitch in scientific notation with explicit accidental spelling.
#pragma once

#include <string>
#include <string_view>

namespace zipfian {

/// A spelled pitch: step letter A-G, accidental offset in [-2, 2], octave in
/// [0, 9]. No enharmonic folding: Eb4 and D#4 are distinct units.
struct Pitch {
  char step = 'C';
  int alter = 0;
  int octave = 4;

  bool operator==(const Pitch& other) const {
    return step == other.step && alter == other.alter && octave == other.octave;
  }
  bool operator!=(const Pitch& other) const { return !(*this == other); }

  /// "Eb4", "F#2", "Abb5". Accidental: b, bb, #, ##.
  std::string str() const;

  /// MIDI note number (C4 = 60) for transposition arithmetic.
  int midi() const;
};

/// Validates field ranges; throws DataError when outside them.
Pitch make_pitch(char step, int alter, int octave);

/// Parses the str() format back. Throws DataError on malformed input.
Pitch parse_pitch(std::string_view text);

/// Spells a MIDI number with flat preference (Eb, Ab, Bb, Db, Gb).
Pitch pitch_from_midi_flat(int midi);

}  // namespace zipfian
