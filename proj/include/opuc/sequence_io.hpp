#pragma once

// Structured config records for sequences: {kind, params, base?}.
// Transforms nest through "base", e.g.
//   {"kind": "sieve", "params": [2],
//    "base": {"kind": "alexandrov", "params": [[0, 1]],
//             "base": {"kind": "ranga", "params": [-0.25]}}}
// Complex scalars are [re, im] pairs; plain numbers are read as reals and
// unimodular parameters may be written {"angle": theta}.

#include <string>

#include "json.hpp"
#include "opuc/coeffs.hpp"

namespace opuc {

nlohmann::json complex_to_json(Complex z);

/// Parses a complex scalar; `field` names the location for error messages.
Complex complex_from_json(const nlohmann::json& value, const std::string& field);

nlohmann::json sequence_to_json(const VerblunskySequence& seq);

/// Throws ParameterError naming the offending field (e.g.
/// "sequence.base.params[0]").
VerblunskySequence sequence_from_json(const nlohmann::json& record,
                                      const std::string& field = "sequence");

}  // namespace opuc
