#include "hbl/certificate.hpp"
#include "hbl/datum_io.hpp"

namespace hbl {

namespace {

constexpr const char* kFormat = "blcert-1";
constexpr const char* kInterpolationNote =
    "exponent interpolation for fixed nonnegative integrands follows from Hoelder's inequality applied to the "
    "defining integral; the verifier checks the weights and the exponent identity";

Certificate::Kind parse_kind(const std::string& s) {
  for (auto k : {Certificate::Kind::HolderBase, Certificate::Kind::InvertibleBase, Certificate::Kind::CriticalSplit,
                 Certificate::Kind::DropFactor, Certificate::Kind::ConvexCombination})
    if (s == kind_name(k)) return k;
  throw ParseError("unknown certificate node kind '" + s + "'");
}

json node_to_json(const Certificate& c) {
  json j = {{"kind", kind_name(c.kind)}, {"datum", datum_to_json(c.datum)}};
  switch (c.kind) {
    case Certificate::Kind::CriticalSplit:
      if (c.W) j["W"] = subspace_to_json(*c.W);
      j["inner_factors"] = c.inner_factors;
      j["outer_factors"] = c.outer_factors;
      break;
    case Certificate::Kind::DropFactor:
      j["dropped"] = c.dropped;
      break;
    case Certificate::Kind::ConvexCombination:
      j["weights"] = exponents_to_json(c.weights);
      j["note"] = kInterpolationNote;
      break;
    default:
      break;
  }
  if (!c.children.empty()) {
    json ch = json::array();
    for (const auto& child : c.children) ch.push_back(node_to_json(child));
    j["children"] = ch;
  }
  return j;
}

std::vector<std::size_t> index_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of factor indices");
  std::vector<std::size_t> out;
  for (const auto& x : j) {
    if (!x.is_number_unsigned()) throw ParseError(where + ": expected nonnegative integers");
    out.push_back(x.get<std::size_t>());
  }
  return out;
}

Certificate node_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  Certificate c;
  c.kind = parse_kind(j.at("kind").get<std::string>());
  try {
    c.datum = datum_from_json(j.at("datum"));
  } catch (const ValidationError& e) {
    throw ParseError(path + ".datum: " + e.what());
  }
  switch (c.kind) {
    case Certificate::Kind::CriticalSplit:
      c.W = subspace_from_json(j.at("W"), c.datum.n, path + ".W");
      c.inner_factors = index_list(j.at("inner_factors"), path + ".inner_factors");
      c.outer_factors = index_list(j.at("outer_factors"), path + ".outer_factors");
      break;
    case Certificate::Kind::DropFactor:
      if (!j.at("dropped").is_number_unsigned()) throw ParseError(path + ".dropped: expected an index");
      c.dropped = j.at("dropped").get<std::size_t>();
      break;
    case Certificate::Kind::ConvexCombination:
      c.weights = exponents_from_json(j.at("weights"), path + ".weights");
      break;
    default:
      break;
  }
  if (j.contains("children")) {
    const json& ch = j.at("children");
    if (!ch.is_array()) throw ParseError(path + ".children: expected an array");
    for (std::size_t k = 0; k < ch.size(); ++k)
      c.children.push_back(node_from_json(ch[k], path + ".children[" + std::to_string(k) + "]"));
  }
  return c;
}

}  // namespace

json certificate_to_json(const Certificate& c) { return {{"format", kFormat}, {"certificate", node_to_json(c)}}; }

Certificate certificate_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("format", "") != kFormat) throw ParseError("not a blcert-1 document");
    return node_from_json(j.at("certificate"), "certificate");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace hbl
