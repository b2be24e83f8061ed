#include "hbl/datum.hpp"

#include <algorithm>
#include <set>

namespace hbl {

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::Global: return "global";
    case Mode::Local: return "local";
    case Mode::Gut: return "gut";
    case Mode::Discrete: return "discrete";
    case Mode::Amalgam: return "amalgam";
  }
  return "global";
}

Mode parse_mode(const std::string& name) {
  if (name == "global") return Mode::Global;
  if (name == "local") return Mode::Local;
  if (name == "gut") return Mode::Gut;
  if (name == "discrete") return Mode::Discrete;
  if (name == "amalgam") return Mode::Amalgam;
  throw ParseError("unknown mode '" + name + "'");
}

namespace {

using VK = ValidationError::Kind;

std::string jname(std::size_t j) { return "factor " + std::to_string(j + 1); }

bool discrete_like(Mode mode) { return mode == Mode::Discrete || mode == Mode::Amalgam; }

}  // namespace

BLDatum validate(const BLDatum& in) {
  BLDatum d = in;
  if (d.n == 0) throw ValidationError(VK::EmptyDatum, std::nullopt, "ambient dimension must be positive");
  if (d.factors.empty()) throw ValidationError(VK::EmptyDatum, std::nullopt, "datum has no factors");
  if (d.t.size() != d.factors.size()) {
    throw ValidationError(VK::ShapeMismatch, std::nullopt, "exponent count differs from factor count");
  }
  for (std::size_t j = 0; j < d.m(); ++j) {
    d.t[j].canonicalize();
    RatMatrix& a = d.factors[j].map;
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (auto& x : a.row(r)) x.canonicalize();
  }
  for (std::size_t j = 0; j < d.m(); ++j) {
    const Factor& f = d.factors[j];
    if (f.target_dim == 0) throw ValidationError(VK::ZeroDimensionalFactor, j, jname(j) + " has a zero-dimensional target");
    if (f.map.rows() != f.target_dim || f.map.cols() != d.n) {
      throw ValidationError(VK::ShapeMismatch, j, jname(j) + " map shape does not match target_dim x n");
    }
    if (rank(f.map) != f.target_dim) {
      throw ValidationError(VK::NonSurjectiveFactor, j, jname(j) + " map is not surjective");
    }
    Rat& t = d.t[j];
    if (sgn(t) < 0) throw ValidationError(VK::ExponentOutOfRange, j, jname(j) + " has a negative exponent reciprocal");
    if (t > 1) {
      if (discrete_like(d.mode)) {
        t = 1;
      } else {
        throw ValidationError(VK::ExponentOutOfRange, j, jname(j) + " has p_j < 1");
      }
    }
  }
  switch (d.mode) {
    case Mode::Global:
    case Mode::Discrete:
      d.map0 = RatMatrix(0, d.n);
      break;
    case Mode::Local:
      d.map0 = RatMatrix::identity(d.n);
      break;
    case Mode::Gut:
      if (!d.map0) throw ValidationError(VK::ShapeMismatch, std::nullopt, "gut mode requires ell0");
      break;
    case Mode::Amalgam:
      if (!d.map0) d.map0 = RatMatrix(0, d.n);
      break;
  }
  if (d.map0->cols() != d.n) throw ValidationError(VK::ShapeMismatch, std::nullopt, "ell0 has the wrong number of columns");
  if (!d.atomic) {
    d.atomic = discrete_like(d.mode) ? Subspace::full(d.n) : Subspace::zero(d.n);
  } else if (d.atomic->ambient_dim() != d.n) {
    throw ValidationError(VK::ShapeMismatch, std::nullopt, "atomic subspace lives in the wrong space");
  }
  return d;
}

Rat homogeneity_gap(const BLDatum& d) {
  Rat c = Rat(static_cast<long>(d.n));
  for (std::size_t j = 0; j < d.m(); ++j) c -= d.t[j] * static_cast<long>(d.factors[j].target_dim);
  return c;
}

Subspace kernel0(const BLDatum& d) {
  if (!d.map0) return Subspace::full(d.n);
  return kernel(*d.map0);
}

bool is_global_type(const BLDatum& d) {
  bool atomic_zero = !d.atomic || d.atomic->is_zero();
  return atomic_zero && kernel0(d).is_full();
}

BLDatum with_exponents(const BLDatum& d, ExponentVector t) {
  BLDatum out = d;
  out.t = std::move(t);
  return validate(out);
}

BLDatum drop_factor(const BLDatum& d, std::size_t i) {
  BLDatum out = d;
  out.factors.erase(out.factors.begin() + static_cast<std::ptrdiff_t>(i));
  out.t.erase(out.t.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

BLDatum make_global(std::size_t n, const std::vector<RatMatrix>& maps, ExponentVector t) {
  BLDatum d;
  d.mode = Mode::Global;
  d.n = n;
  for (const auto& m : maps) d.factors.push_back({m.rows(), m});
  d.t = std::move(t);
  return validate(d);
}

const char* class_name(IndexClass c) {
  switch (c) {
    case IndexClass::Bounded: return "bounded";
    case IndexClass::Atomic: return "atomic";
    case IndexClass::General: return "general";
  }
  return "general";
}

IndexClass parse_class(const std::string& name) {
  if (name == "bounded") return IndexClass::Bounded;
  if (name == "atomic") return IndexClass::Atomic;
  if (name == "general") return IndexClass::General;
  throw ParseError("unknown index class '" + name + "'");
}

void validate(const FinnerDatum& f) {
  if (f.indices.empty()) throw ValidationError(VK::EmptyDatum, std::nullopt, "index set I is empty");
  if (f.supports.empty()) throw ValidationError(VK::EmptyDatum, std::nullopt, "factor set J is empty");
  if (f.t.size() != f.supports.size()) {
    throw ValidationError(VK::ShapeMismatch, std::nullopt, "exponent count differs from support count");
  }
  for (std::size_t j = 0; j < f.supports.size(); ++j) {
    if (f.supports[j].empty()) throw ValidationError(VK::ZeroDimensionalFactor, j, jname(j) + " has an empty support");
    std::set<std::size_t> seen;
    for (auto i : f.supports[j]) {
      if (i >= f.indices.size() || !seen.insert(i).second) {
        throw ValidationError(VK::ShapeMismatch, j, jname(j) + " support is invalid");
      }
    }
    if (sgn(f.t[j]) < 0 || f.t[j] > 1) throw ValidationError(VK::ExponentOutOfRange, j, jname(j) + " exponent out of [0,1]");
  }
}

BLDatum finner_to_continuum(const FinnerDatum& f) {
  validate(f);
  const std::size_t n = f.indices.size();
  BLDatum d;
  d.n = n;
  for (const auto& support : f.supports) {
    std::vector<std::size_t> s = support;
    std::sort(s.begin(), s.end());
    RatMatrix m(s.size(), n);
    for (std::size_t r = 0; r < s.size(); ++r) m(r, s[r]) = 1;
    d.factors.push_back({s.size(), std::move(m)});
  }
  d.t = f.t;

  std::vector<std::size_t> bounded, atomic;
  for (std::size_t i = 0; i < n; ++i) {
    if (f.indices[i].cls == IndexClass::Bounded) bounded.push_back(i);
    if (f.indices[i].cls == IndexClass::Atomic) atomic.push_back(i);
  }
  RatMatrix proj0(bounded.size(), n);
  for (std::size_t r = 0; r < bounded.size(); ++r) proj0(r, bounded[r]) = 1;

  if (!atomic.empty()) {
    d.mode = Mode::Amalgam;
    d.map0 = proj0;
    d.atomic = Subspace::coordinate(n, atomic);
  } else if (!bounded.empty()) {
    d.mode = Mode::Gut;
    d.map0 = proj0;
  } else {
    d.mode = Mode::Global;
  }
  return validate(d);
}

void validate(const DiscreteDatum& d) {
  if (d.free_rank == 0) throw ValidationError(VK::EmptyDatum, std::nullopt, "free rank of G must be positive");
  if (d.homs.empty()) throw ValidationError(VK::EmptyDatum, std::nullopt, "no homomorphisms");
  if (d.t.size() != d.homs.size()) throw ValidationError(VK::ShapeMismatch, std::nullopt, "exponent count differs from hom count");
  for (std::size_t j = 0; j < d.homs.size(); ++j) {
    const IntMatrix& h = d.homs[j];
    if (h.rows() == 0) throw ValidationError(VK::ZeroDimensionalFactor, j, jname(j) + " has a rank-zero target");
    if (h.cols() != d.free_rank) throw ValidationError(VK::ShapeMismatch, j, jname(j) + " has the wrong number of columns");
    if (smith_normal_form(h).rank != h.rows()) {
      throw ValidationError(VK::NonSurjectiveFactor, j, jname(j) + " range has infinite index");
    }
    if (sgn(d.t[j]) < 0) throw ValidationError(VK::ExponentOutOfRange, j, jname(j) + " has a negative exponent reciprocal");
  }
}

BLDatum discrete_to_rational(const DiscreteDatum& in) {
  validate(in);
  BLDatum d;
  d.mode = Mode::Discrete;
  d.n = in.free_rank;
  for (const auto& h : in.homs) d.factors.push_back({h.rows(), h.to_rational()});
  d.t = in.t;
  d.torsion = in.torsion;
  return validate(d);
}

SubspaceForm subspace_form(const BLDatum& d) {
  std::size_t total = 0;
  for (const auto& f : d.factors) total += f.target_dim;
  RatMatrix joint(0, d.n);
  for (const auto& f : d.factors) joint = joint.stack(f.map);
  SubspaceForm out{image(joint), {}, joint};
  std::size_t offset = 0;
  for (const auto& f : d.factors) {
    RatMatrix p(f.target_dim, total);
    for (std::size_t r = 0; r < f.target_dim; ++r) p(r, offset + r) = 1;
    out.projections.push_back(std::move(p));
    offset += f.target_dim;
  }
  return out;
}

}  // namespace hbl
