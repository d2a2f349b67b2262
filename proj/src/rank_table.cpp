#include "zipfian/rank_table.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "zipfian/errors.hpp"
#include "zipfian/io_util.hpp"

namespace zipfian {

RankFrequencyTable RankFrequencyTable::from_counts(
    std::vector<std::pair<ZipfianUnit, std::uint64_t>> counts) {
  // Merge duplicate units first; identity is the canonical string.
  std::map<std::string, std::pair<ZipfianUnit*, std::uint64_t>> merged;
  std::uint64_t total = 0;
  for (auto& [unit, count] : counts) {
    if (count == 0) throw DataError("zero count for a unit");
    total += count;
    auto [it, inserted] = merged.try_emplace(unit.str(), &unit, 0);
    it->second.second += count;
  }
  if (total == 0) throw DataError("empty rank-frequency table");

  std::vector<std::pair<std::string_view, const std::pair<ZipfianUnit*, std::uint64_t>*>> order;
  order.reserve(merged.size());
  for (const auto& [key, entry] : merged) order.emplace_back(key, &entry);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second->second != b.second->second) return a.second->second > b.second->second;
    return a.first < b.first;
  });

  RankFrequencyTable table;
  table.total_ = total;
  table.rows_.reserve(order.size());
  for (const auto& [unit_str, entry] : order) {
    RankRow row;
    row.unit = std::move(*entry->first);
    row.count = entry->second;
    row.rel_freq = static_cast<double>(row.count) / static_cast<double>(total);
    table.rows_.push_back(std::move(row));
  }
  return table;
}

std::vector<double> RankFrequencyTable::frequencies() const {
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const RankRow& row : rows_) out.push_back(row.rel_freq);
  return out;
}

std::vector<double> RankFrequencyTable::counts_real() const {
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const RankRow& row : rows_) out.push_back(static_cast<double>(row.count));
  return out;
}

std::string RankFrequencyTable::to_csv() const {
  std::string out = "rank,unit,count,rel_freq\n";
  for (size_t i = 0; i < rows_.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += csv_quote(rows_[i].unit.str());
    out += ',';
    out += std::to_string(rows_[i].count);
    out += ',';
    out += format_double(rows_[i].rel_freq);
    out += '\n';
  }
  return out;
}

RankFrequencyTable RankFrequencyTable::from_csv(std::string_view csv) {
  auto lines = split_lines(csv);
  if (lines.empty()) throw DataError("empty table CSV");
  if (lines[0] != "rank,unit,count,rel_freq") {
    throw ParseError("unexpected table CSV header", 1);
  }
  std::vector<std::pair<ZipfianUnit, std::uint64_t>> counts;
  for (size_t i = 1; i < lines.size(); ++i) {
    int line_no = static_cast<int>(i + 1);
    auto fields = csv_split(lines[i], line_no);
    if (fields.size() != 4) throw ParseError("expected 4 fields in table CSV", line_no);
    if (parse_int64(fields[0]) != static_cast<std::int64_t>(i)) {
      throw ParseError("ranks must be contiguous from 1", line_no);
    }
    std::int64_t count = parse_int64(fields[2]);
    if (count <= 0) throw ParseError("non-positive count", line_no);
    counts.emplace_back(ZipfianUnit::parse(fields[1]), static_cast<std::uint64_t>(count));
  }
  RankFrequencyTable table = from_counts(std::move(counts));
  return table;
}

RankFrequencyTable count_units(std::span<const ZipfianUnit> units) {
  if (units.empty()) throw DataError("cannot count an empty unit sequence");
  std::map<std::string, std::pair<const ZipfianUnit*, std::uint64_t>> tally;
  for (const ZipfianUnit& unit : units) {
    auto [it, inserted] = tally.try_emplace(unit.str(), &unit, 0);
    ++it->second.second;
  }
  std::vector<std::pair<ZipfianUnit, std::uint64_t>> counts;
  counts.reserve(tally.size());
  for (auto& [key, entry] : tally) {
    counts.emplace_back(*entry.first, entry.second);
  }
  return RankFrequencyTable::from_counts(std::move(counts));
}

std::vector<TopRow> top_k(const RankFrequencyTable& table, size_t k) {
  std::vector<TopRow> out;
  size_t n = std::min(k, table.distinct_units());
  out.reserve(n);
  double total = static_cast<double>(table.total_units());
  for (size_t i = 0; i < n; ++i) {
    const RankRow& row = table.rows()[i];
    double percent = std::round(1000.0 * static_cast<double>(row.count) / total) / 10.0;
    out.push_back(TopRow{i + 1, row.unit.str(), row.count, percent});
  }
  return out;
}

CorpusScope CorpusScope::for_instrument(Instrument instrument) {
  CorpusScope scope;
  scope.level = Level::Instrument;
  scope.instrument = instrument;
  return scope;
}

CorpusScope CorpusScope::for_piece(std::string piece_id) {
  CorpusScope scope;
  scope.level = Level::Piece;
  scope.piece_id = std::move(piece_id);
  return scope;
}

CorpusScope CorpusScope::parse(std::string_view text) {
  if (text == "global" || text == "global_union") return global_union();
  if (text.rfind("instrument:", 0) == 0) {
    return for_instrument(parse_instrument(text.substr(11)));
  }
  if (text.rfind("piece:", 0) == 0) {
    return for_piece(std::string(text.substr(6)));
  }
  throw ScopeError("invalid scope '" + std::string(text) +
                   "'; expected global, instrument:<name>, or piece:<id>");
}

std::string CorpusScope::str() const {
  switch (level) {
    case Level::GlobalUnion: return "global";
    case Level::Instrument: return "instrument:" + std::string(instrument_name(*instrument));
    case Level::Piece: return "piece:" + *piece_id;
  }
  return "?";
}

RankFrequencyTable merge_scope(std::span<const NoteEvent> events,
                               const CorpusScope& scope, UnitKind kind) {
  std::vector<NoteEvent> selected;
  for (const NoteEvent& e : events) {
    bool keep = true;
    if (scope.level == CorpusScope::Level::Instrument) {
      keep = e.instrument == *scope.instrument;
    } else if (scope.level == CorpusScope::Level::Piece) {
      keep = e.piece_id == *scope.piece_id;
    }
    if (keep) selected.push_back(e);
  }
  if (selected.empty()) {
    throw ScopeError("scope " + scope.str() + " matches no events");
  }
  std::vector<ZipfianUnit> units = build_units(selected, kind);
  return count_units(units);
}

RankFrequencyTable product_table(const RankFrequencyTable& marginal_a,
                                 const RankFrequencyTable& marginal_b) {
  if (marginal_a.distinct_units() == 0 || marginal_b.distinct_units() == 0) {
    throw DataError("product of an empty table");
  }
  std::vector<std::pair<ZipfianUnit, std::uint64_t>> counts;
  counts.reserve(marginal_a.distinct_units() * marginal_b.distinct_units());
  for (const RankRow& a : marginal_a.rows()) {
    for (const RankRow& b : marginal_b.rows()) {
      __int128 product = static_cast<__int128>(a.count) * b.count;
      if (product > UINT64_MAX) throw DataError("product table count overflow");
      counts.emplace_back(ZipfianUnit::concat(a.unit, b.unit),
                          static_cast<std::uint64_t>(product));
    }
  }
  return RankFrequencyTable::from_counts(std::move(counts));
}

}  // namespace zipfian
