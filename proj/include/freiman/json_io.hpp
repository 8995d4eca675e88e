#pragma once

#include "freiman/continuous.hpp"
#include "freiman/int_set.hpp"
#include "freiman/lab.hpp"
#include "freiman/pair_relation.hpp"
#include "freiman/recovery.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>

namespace freiman::json_io {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file. Throws InputError naming the path.
Json read_file(const std::string& path);

// Parsers throw InputError naming `field` when the value has the wrong shape.

/// Array of integers in any order without repeats.
IntSet parse_int_set(const Json& j, const std::string& field);
/// "full", a list of excluded [i, j] pairs, or {"excluded": [...]} / {"included": [...]}.
PairRelation parse_relation(const Json& j, std::size_t rows, std::size_t cols, const std::string& field);
/// Integer, "p/q" string, decimal string, or [numerator, denominator].
Exact parse_exact(const Json& j, const std::string& field);
/// Array of [lo, hi] endpoint pairs, each endpoint as accepted by parse_exact.
IntervalUnion parse_interval_union(const Json& j, const std::string& field);

struct PairInput {
  IntSet a;
  std::optional<IntSet> b;
  std::optional<PairRelation> gamma;
};

/// {"A": [...], "B": [...], "gamma": ...}; a bare array is read as A.
PairInput parse_pair_input(const Json& j);

Json to_json(const IntSet& s);
Json to_json(const PairRelation& gamma);
Json to_json(const ArithProgression& p);
Json to_json(const Exact& x);
Json to_json(const IntervalUnion& u);
Json to_json(const RecoveryReport& r);
Json to_json(const BoundResult& r);
Json to_json(const VerifySummary& s);
Json to_json(const DiscretizationResult& d);
Json to_json(const IntervalRecovery& r);

/// Full data of a violated bound, enough to rebuild and recheck it.
Json counterexample_record(const BoundResult& result, const Json& header);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

/// CSV row: instance_key,measured,bound,slack,pass.
void write_csv_row(std::ostream& out, const BoundResult& r);
constexpr const char* kCsvHeader = "instance_key,measured,bound,slack,pass";

}  // namespace freiman::json_io
