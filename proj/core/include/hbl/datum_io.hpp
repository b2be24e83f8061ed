#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "hbl/datum.hpp"

namespace hbl {

using json = nlohmann::json;

/// Parsed content of a datum file. Exactly one of the payloads is set;
/// `continuum()` returns the engine-facing datum for all of them.
struct DatumFile {
  std::string mode;
  std::optional<BLDatum> datum;
  std::optional<FinnerDatum> finner;
  std::optional<DiscreteDatum> discrete;

  BLDatum continuum() const;
};

/// Throws ParseError naming the offending field, or ValidationError.
DatumFile parse_datum(const json& j);
DatumFile parse_datum_text(const std::string& text);
DatumFile load_datum(const std::string& path);

json rat_matrix_to_json(const RatMatrix& m);
RatMatrix rat_matrix_from_json(const json& j, std::size_t expected_cols, const std::string& where);
json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const json& j, std::size_t ambient, const std::string& where);
json exponents_to_json(const ExponentVector& t);
ExponentVector exponents_from_json(const json& j, const std::string& where);

json datum_to_json(const BLDatum& d);
BLDatum datum_from_json(const json& j);
json finner_to_json(const FinnerDatum& f);

}  // namespace hbl
