// Rank-frequency tables over Zipfian units.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zipfian/units.hpp"

namespace zipfian {

struct RankRow {
  ZipfianUnit unit;
  std::uint64_t count = 0;
  double rel_freq = 0.0;  // count / L
};

/// Units sorted by descending count; ties broken by the unit's canonical
/// string so golden outputs are deterministic. rel_freq sums to 1.
class RankFrequencyTable {
 public:
  RankFrequencyTable() = default;

  /// Builds from (unit, count) pairs; sorts and fills frequencies.
  static RankFrequencyTable from_counts(std::vector<std::pair<ZipfianUnit, std::uint64_t>> counts);

  const std::vector<RankRow>& rows() const { return rows_; }
  size_t distinct_units() const { return rows_.size(); }   // N
  std::uint64_t total_units() const { return total_; }     // L

  const RankRow& row(size_t rank) const { return rows_[rank - 1]; }

  std::vector<double> frequencies() const;
  std::vector<double> counts_real() const;

  std::string to_csv() const;  // rank,unit,count,rel_freq
  static RankFrequencyTable from_csv(std::string_view csv);

 private:
  std::vector<RankRow> rows_;
  std::uint64_t total_ = 0;
};

/// Counts a unit sequence. Throws DataError on empty input.
RankFrequencyTable count_units(std::span<const ZipfianUnit> units);

struct TopRow {
  size_t rank;
  std::string unit;
  std::uint64_t count;
  double percent;  // rounded to one decimal
};

/// First min(k, N) rows with percentages rounded to one decimal place.
std::vector<TopRow> top_k(const RankFrequencyTable& table, size_t k);

struct CorpusScope {
  enum class Level { GlobalUnion, Instrument, Piece };
  Level level = Level::GlobalUnion;
  std::optional<Instrument> instrument;  // set iff level == Instrument
  std::optional<std::string> piece_id;   // set iff level == Piece

  static CorpusScope global_union() { return {}; }
  static CorpusScope for_instrument(Instrument instrument);
  static CorpusScope for_piece(std::string piece_id);

  /// "global" | "instrument:piri" | "piece:xyz"
  static CorpusScope parse(std::string_view text);
  std::string str() const;
};

/// Counts units over exactly the events matching the scope. Throws
/// ScopeError when the selector matches nothing.
RankFrequencyTable merge_scope(std::span<const NoteEvent> events,
                               const CorpusScope& scope, UnitKind kind);

/// Synthetic independence table over all unit pairs: cell count is the
/// product of the marginal counts, so L = La * Lb and the exact relative
/// frequencies multiply. Sorted like any other table.
RankFrequencyTable product_table(const RankFrequencyTable& marginal_a,
                                 const RankFrequencyTable& marginal_b);

}  // namespace zipfian
