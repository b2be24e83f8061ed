#include "hbl/certificate.hpp"
#include "hbl/datum_io.hpp"

namespace hbl {

const char* violation_name(Violation v) { return v == Violation::RBlowup ? "R_blowup" : "r_blowup"; }

namespace {

Subspace complement_within(const Subspace& inner, const Subspace& outer) {
  RatMatrix coords = restrict_map(RatMatrix::identity(outer.ambient_dim()), inner, outer);
  Subspace s = Subspace::span(coords.transpose());
  return image(outer.embedding(), complement(s));
}

}  // namespace

ScalingWitness build_witness(const BLDatum& d, const Subspace& V) {
  if (V.ambient_dim() != d.n) throw DimensionMismatch("witness subspace lives in the wrong space");
  ScalingWitness w;
  w.V = V;
  w.V_big = intersect(V, kernel0(d));
  w.V_small = complement_within(w.V_big, V);
  w.R_exponent = -f1(d, w.V_big);
  w.r_exponent = f2(d, V);
  const bool atomic_inside = !d.atomic || V.contains(*d.atomic);
  if (sgn(w.R_exponent) > 0) {
    w.violation = Violation::RBlowup;
  } else if (sgn(w.r_exponent) < 0 && atomic_inside) {
    w.violation = Violation::rBlowup;
  } else {
    throw NotAViolation("subspace violates neither scaling condition");
  }
  return w;
}

CertCheck verify_witness(const BLDatum& d, const ScalingWitness& w) {
  auto reject = [](std::string reason) { return CertCheck{false, std::move(reason), "witness"}; };
  for (const Subspace* s : {&w.V, &w.V_big, &w.V_small})
    if (s->ambient_dim() != d.n) return reject("AmbientMismatch");
  if (!(intersect(w.V, kernel0(d)) == w.V_big)) return reject("VBigMismatch");
  if (!w.V.contains(w.V_small) || !intersect(w.V_small, w.V_big).is_zero() ||
      w.V_small.dim() + w.V_big.dim() != w.V.dim()) {
    return reject("NotADirectSum");
  }
  if (-f1(d, w.V_big) != w.R_exponent) return reject("RExponentMismatch");
  if (f2(d, w.V) != w.r_exponent) return reject("rExponentMismatch");
  if (w.violation == Violation::RBlowup) {
    if (sgn(w.R_exponent) <= 0) return reject("RExponentNotPositive");
  } else {
    if (sgn(w.r_exponent) >= 0) return reject("rExponentNotNegative");
    if (d.atomic && !w.V.contains(*d.atomic)) return reject("AtomicNotContained");
  }
  return {};
}

nlohmann::json witness_to_json(const ScalingWitness& w) {
  return {{"V", subspace_to_json(w.V)},
          {"V_big", subspace_to_json(w.V_big)},
          {"V_small", subspace_to_json(w.V_small)},
          {"R_exponent", to_string(w.R_exponent)},
          {"r_exponent", to_string(w.r_exponent)},
          {"violation", violation_name(w.violation)}};
}

ScalingWitness witness_from_json(const nlohmann::json& j, std::size_t n) {
  try {
    ScalingWitness w;
    w.V = subspace_from_json(j.at("V"), n, "V");
    w.V_big = subspace_from_json(j.at("V_big"), n, "V_big");
    w.V_small = subspace_from_json(j.at("V_small"), n, "V_small");
    w.R_exponent = parse_rat(j.at("R_exponent").get<std::string>());
    w.r_exponent = parse_rat(j.at("r_exponent").get<std::string>());
    std::string v = j.at("violation").get<std::string>();
    if (v == "R_blowup") {
      w.violation = Violation::RBlowup;
    } else if (v == "r_blowup") {
      w.violation = Violation::rBlowup;
    } else {
      throw ParseError("violation: unknown type '" + v + "'");
    }
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed witness: ") + e.what());
  }
}

}  // namespace hbl
