// Zipfian units: the elements counted by rank-frequency analysis.
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "zipfian/note_event.hpp"

namespace zipfian {

enum class UnitKind { Pitch, Duration, Pair };

UnitKind parse_unit_kind(std::string_view name);  // "pitch" | "duration" | "pair"
std::string_view unit_kind_name(UnitKind kind);

using UnitAtom = std::variant<Pitch, Rational>;

/// A ranked element: one atom (pitch or duration), a (pitch, duration) pair,
/// or a longer composite built by product tables. Identity and ordering go
/// through the canonical string, e.g. "Eb4", "3/2", "Eb4|3/2".
struct ZipfianUnit {
  std::vector<UnitAtom> atoms;

  std::string str() const;
  bool operator==(const ZipfianUnit& other) const;

  static ZipfianUnit of(Pitch pitch);
  static ZipfianUnit of(Rational duration);
  static ZipfianUnit of(Pitch pitch, Rational duration);

  /// Parses the canonical string form back into atoms.
  static ZipfianUnit parse(std::string_view text);

  /// Concatenation, the unit identity of a product-table cell.
  static ZipfianUnit concat(const ZipfianUnit& a, const ZipfianUnit& b);
};

/// One unit per event; identity is the exact projected value.
std::vector<ZipfianUnit> build_units(std::span<const NoteEvent> events, UnitKind kind);

}  // namespace zipfian
