#include "opuc/sequence_io.hpp"

#include <cmath>
#include <vector>

#include "opuc/errors.hpp"

namespace opuc {

using nlohmann::json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& value, const std::string& field) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (value.is_array() && value.size() == 2 && value[0].is_number() &&
      value[1].is_number()) {
    return {value[0].get<double>(), value[1].get<double>()};
  }
  if (value.is_object() && value.size() == 1 && value.contains("angle") &&
      value["angle"].is_number()) {
    return std::polar(1.0, value["angle"].get<double>());
  }
  throw ParameterError(field + ": expected a number, [re, im] or {\"angle\": theta}");
}

json sequence_to_json(const VerblunskySequence& seq) {
  json record;
  record["kind"] = std::string(to_string(seq.kind()));
  json params = json::array();
  if (seq.kind() == SequenceKind::ranga) {
    params.push_back(seq.params().front().real());
  } else if (seq.kind() == SequenceKind::sieve) {
    params.push_back(static_cast<int>(seq.params().front().real()));
  } else {
    for (const auto& p : seq.params()) params.push_back(complex_to_json(p));
  }
  record["params"] = std::move(params);
  if (const auto* base = seq.base()) record["base"] = sequence_to_json(*base);
  return record;
}

VerblunskySequence sequence_from_json(const json& record, const std::string& field) {
  if (!record.is_object()) throw ParameterError(field + ": expected an object");
  if (!record.contains("kind") || !record["kind"].is_string())
    throw ParameterError(field + ".kind: missing or not a string");
  const auto name = record["kind"].get<std::string>();
  const auto kind = sequence_kind_from_string(name);
  if (!kind) throw ParameterError(field + ".kind: unknown sequence kind '" + name + "'");

  std::vector<Complex> params;
  if (record.contains("params")) {
    const auto& raw = record["params"];
    if (!raw.is_array()) throw ParameterError(field + ".params: expected an array");
    for (std::size_t i = 0; i < raw.size(); ++i)
      params.push_back(complex_from_json(raw[i], field + ".params[" + std::to_string(i) + "]"));
  }
  for (const auto& [key, unused] : record.items()) {
    if (key != "kind" && key != "params" && key != "base")
      throw ParameterError(field + "." + key + ": unknown field");
  }

  const bool is_transform = *kind == SequenceKind::alexandrov ||
                            *kind == SequenceKind::rotate ||
                            *kind == SequenceKind::sieve;
  if (!is_transform) {
    if (record.contains("base"))
      throw ParameterError(field + ".base: only transforms take a base sequence");
    try {
      return make_sequence(*kind, params);
    } catch (const ParameterError& e) {
      throw ParameterError(field + ".params: " + e.what());
    }
  }

  if (!record.contains("base")) throw ParameterError(field + ".base: missing base sequence");
  const auto base = sequence_from_json(record["base"], field + ".base");
  if (params.size() != 1)
    throw ParameterError(field + ".params: transform takes exactly one parameter");
  try {
    switch (*kind) {
      case SequenceKind::alexandrov:
        return alexandrov(base, params[0]);
      case SequenceKind::rotate:
        return rotate(base, params[0]);
      default: {
        const double p = params[0].real();
        if (params[0].imag() != 0.0 || p != std::floor(p))
          throw ParameterError("sieve order must be an integer");
        return sieve(base, static_cast<int>(p));
      }
    }
  } catch (const ParameterError& e) {
    throw ParameterError(field + ".params[0]: " + e.what());
  }
}

}  // namespace opuc
