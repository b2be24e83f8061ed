#include "hbl/certificate.hpp"

#include <algorithm>

#include "hbl/polytope.hpp"

namespace hbl {

const char* kind_name(Certificate::Kind k) {
  switch (k) {
    case Certificate::Kind::HolderBase: return "holder_base";
    case Certificate::Kind::InvertibleBase: return "invertible_base";
    case Certificate::Kind::CriticalSplit: return "critical_split";
    case Certificate::Kind::DropFactor: return "drop_factor";
    case Certificate::Kind::ConvexCombination: return "convex_combination";
  }
  return "holder_base";
}

std::size_t reduction_depth(const Certificate& c) {
  std::size_t below = 0;
  for (const auto& ch : c.children) below = std::max(below, reduction_depth(ch));
  const bool counts = c.kind == Certificate::Kind::CriticalSplit || c.kind == Certificate::Kind::DropFactor;
  return below + (counts ? 1 : 0);
}

std::size_t node_count(const Certificate& c) {
  std::size_t n = 1;
  for (const auto& ch : c.children) n += node_count(ch);
  return n;
}

namespace {

BLDatum global_datum(std::size_t n, std::vector<Factor> factors, ExponentVector t) {
  BLDatum d;
  d.mode = Mode::Global;
  d.n = n;
  d.factors = std::move(factors);
  d.t = std::move(t);
  return validate(d);
}

bool same_problem(const BLDatum& a, const BLDatum& b) { return a.n == b.n && a.factors == b.factors && a.t == b.t; }

}  // namespace

SplitData split_datum(const BLDatum& d, const Subspace& W) {
  SplitData s;
  const Subspace C = complement(W);
  const RatMatrix E = C.embedding();
  std::vector<Factor> inner, outer;
  ExponentVector t_inner, t_outer;
  for (std::size_t j = 0; j < d.m(); ++j) {
    const Factor& f = d.factors[j];
    Subspace U = image(f.map, W);
    if (U.dim() > 0) {
      inner.push_back({U.dim(), restrict_map(f.map, W, U)});
      t_inner.push_back(d.t[j]);
      s.inner_factors.push_back(j);
    }
    if (U.dim() < f.target_dim) {
      QuotientMap q = quotient_map(f.map, U);
      outer.push_back({q.map.rows(), q.map * E});
      t_outer.push_back(d.t[j]);
      s.outer_factors.push_back(j);
    }
  }
  s.inner = global_datum(W.dim(), std::move(inner), std::move(t_inner));
  s.outer = global_datum(C.dim(), std::move(outer), std::move(t_outer));
  return s;
}

namespace {

struct Outcome {
  std::optional<Certificate> cert;
  std::optional<Subspace> cut;  // supercritical subspace in the node's space
};

class Builder {
 public:
  Builder(const SearchBudget& budget, AtlasCache& cache) : budget_(budget), cache_(cache) {}

  Outcome build(const BLDatum& D, bool allow_convex, std::size_t depth) {
    if (depth > 4 * (D.n + D.m()) + 8) return {};
    if (sgn(homogeneity_gap(D)) != 0) return {};
    Certificate node;
    node.datum = D;

    if (D.n == 1) {
      node.kind = Certificate::Kind::HolderBase;
      return {node, {}};
    }
    if (D.m() == 1) {
      if (D.t[0] != 1 || D.factors[0].target_dim != D.n) return {};
      node.kind = Certificate::Kind::InvertibleBase;
      return {node, {}};
    }
    for (std::size_t i = 0; i < D.m(); ++i) {
      if (sgn(D.t[i]) != 0) continue;
      Outcome child = build(validate(drop_factor(D, i)), true, depth + 1);
      if (!child.cert) return {std::nullopt, child.cut};
      node.kind = Certificate::Kind::DropFactor;
      node.dropped = i;
      node.children.push_back(std::move(*child.cert));
      return {node, {}};
    }

    SearchView view = kernel_view(D, Subspace::full(D.n));
    std::shared_ptr<const Atlas> atlas = cache_.get(view, budget_);
    std::vector<Subspace> critical;
    for (const auto& c : atlas->candidates) {
      Rat v = view.value(c.profile);
      if (sgn(v) < 0) return {std::nullopt, c.w};
      if (sgn(v) == 0 && !c.w.is_zero() && !c.w.is_full()) critical.push_back(c.w);
    }

    constexpr std::size_t kSplitAttempts = 4;
    for (std::size_t a = 0; a < critical.size() && a < kSplitAttempts; ++a) {
      SplitData s = split_datum(D, critical[a]);
      Outcome inner = build(s.inner, true, depth + 1);
      if (!inner.cert) continue;
      Outcome outer = build(s.outer, true, depth + 1);
      if (!outer.cert) continue;
      node.kind = Certificate::Kind::CriticalSplit;
      node.W = critical[a];
      node.inner_factors = s.inner_factors;
      node.outer_factors = s.outer_factors;
      node.children.push_back(std::move(*inner.cert));
      node.children.push_back(std::move(*outer.cert));
      return {node, {}};
    }
    if (!critical.empty() || !allow_convex) return {};
    return convex(D, *atlas, depth);
  }

 private:
  Outcome convex(const BLDatum& D, const Atlas& atlas, std::size_t depth) {
    if (D.m() > kMaxVertexFactors) return {};
    std::vector<DimProfile> profiles;
    for (const auto& c : atlas.candidates)
      if (!c.w.is_zero() && !c.w.is_full()) profiles.push_back(c.profile);

    for (std::size_t round = 0; round <= budget_.max_closure_rounds; ++round) {
      BLPolytope poly = constraints_from_profiles(profiles, D.m(), homogeneity_row(D));
      VertexSet vs = enumerate_vertices(poly);
      std::optional<std::vector<Rat>> lambda = convex_weights(vs.vertices, D.t);
      if (!lambda) return {};

      Certificate node;
      node.kind = Certificate::Kind::ConvexCombination;
      node.datum = D;
      bool cut = false;
      for (std::size_t k = 0; k < vs.vertices.size(); ++k) {
        if (sgn((*lambda)[k]) == 0) continue;
        if (vs.vertices[k] == D.t) return {};  // t is itself a vertex without a split
        Outcome child = build(with_exponents(D, vs.vertices[k]), false, depth + 1);
        if (!child.cert) {
          if (!child.cut) return {};
          profiles.push_back(profile(D, *child.cut));
          cut = true;
          break;
        }
        node.weights.push_back((*lambda)[k]);
        node.children.push_back(std::move(*child.cert));
      }
      if (!cut) return {node, {}};
    }
    return {};
  }

  const SearchBudget& budget_;
  AtlasCache& cache_;
};

}  // namespace

std::optional<Certificate> build_certificate(const BLDatum& d, const SearchBudget& budget, AtlasCache* cache) {
  BLDatum D = validate(d);
  if (!is_global_type(D)) return std::nullopt;
  D = global_datum(D.n, D.factors, D.t);
  AtlasCache local;
  Builder b(budget, cache ? *cache : local);
  try {
    return b.build(D, true, 0).cert;
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

namespace {

class Verifier {
 public:
  CertCheck node(const BLDatum& expected, const Certificate& c, const std::string& path) {
    auto reject = [&](std::string reason) { return CertCheck{false, std::move(reason), path}; };
    if (!same_problem(expected, c.datum)) return reject("DatumMismatch");
    BLDatum D;
    try {
      D = global_datum(c.datum.n, c.datum.factors, c.datum.t);
    } catch (const ValidationError& e) {
      return reject(std::string("InvalidDatum: ") + e.what());
    }
    if (sgn(homogeneity_gap(D)) != 0) return reject("NotHomogeneous");

    switch (c.kind) {
      case Certificate::Kind::HolderBase: {
        if (!c.children.empty()) return reject("UnexpectedChildren");
        if (D.n != 1) return reject("HolderBase: ambient dimension is not 1");
        Rat s = 0;
        for (std::size_t j = 0; j < D.m(); ++j) {
          if (D.factors[j].target_dim != 1 || D.factors[j].map.is_zero()) return reject("HolderBase: factor is not a nonzero functional");
          s += D.t[j];
        }
        if (s != 1) return reject("HolderBase: exponents do not sum to 1");
        return {};
      }
      case Certificate::Kind::InvertibleBase: {
        if (!c.children.empty()) return reject("UnexpectedChildren");
        if (D.m() != 1 || D.t[0] != 1) return reject("InvertibleBase: needs a single factor with t = 1");
        const RatMatrix& l = D.factors[0].map;
        if (l.rows() != l.cols() || sgn(determinant(l)) == 0) return reject("InvertibleBase: map is not invertible");
        return {};
      }
      case Certificate::Kind::CriticalSplit: {
        if (!c.W || c.children.size() != 2) return reject("Malformed");
        const Subspace& W = *c.W;
        if (W.ambient_dim() != D.n || W.is_zero() || W.is_full()) return reject("NotProper");
        if (f1(D, W) != 0) return reject("NotCritical");
        SplitData s = split_datum(D, W);
        if (s.inner_factors != c.inner_factors || s.outer_factors != c.outer_factors) return reject("ElisionMismatch");
        if (s.inner.n + s.outer.n != D.n) return reject("SplitBookkeeping");
        if (CertCheck r = node(s.inner, c.children[0], path + "/inner"); !r) return r;
        return node(s.outer, c.children[1], path + "/outer");
      }
      case Certificate::Kind::DropFactor: {
        if (c.children.size() != 1) return reject("Malformed");
        if (c.dropped >= D.m() || D.m() < 2) return reject("DropFactor: index out of range");
        if (sgn(D.t[c.dropped]) != 0) return reject("DropNonzero");
        BLDatum child;
        try {
          child = global_datum(D.n, drop_factor(D, c.dropped).factors, drop_factor(D, c.dropped).t);
        } catch (const ValidationError& e) {
          return reject(std::string("InvalidDatum: ") + e.what());
        }
        return node(child, c.children[0], path + "/drop");
      }
      case Certificate::Kind::ConvexCombination: {
        if (c.children.empty() || c.children.size() != c.weights.size()) return reject("Malformed");
        Rat total = 0;
        ExponentVector mix(D.m());
        for (std::size_t k = 0; k < c.children.size(); ++k) {
          if (sgn(c.weights[k]) <= 0) return reject("WeightNotPositive");
          const BLDatum& cd = c.children[k].datum;
          if (cd.n != D.n || cd.factors != D.factors || cd.t.size() != D.m()) return reject("ChildMismatch");
          total += c.weights[k];
          for (std::size_t j = 0; j < D.m(); ++j) mix[j] += c.weights[k] * cd.t[j];
        }
        if (total != 1) return reject("WeightsSumToOne");
        if (mix != D.t) return reject("ExponentIdentity");
        for (std::size_t k = 0; k < c.children.size(); ++k) {
          BLDatum expected_child = c.children[k].datum;
          if (CertCheck r = node(expected_child, c.children[k], path + "/vertex[" + std::to_string(k) + "]"); !r) return r;
        }
        return {};
      }
    }
    return reject("UnknownKind");
  }
};

}  // namespace

CertCheck verify_certificate(const BLDatum& d, const Certificate& cert) {
  BLDatum D;
  try {
    D = validate(d);
  } catch (const ValidationError& e) {
    return {false, std::string("InvalidDatum: ") + e.what(), "root"};
  }
  if (!is_global_type(D)) return {false, "NotGlobal", "root"};
  if (reduction_depth(cert) > D.n + D.m()) return {false, "DepthExceeded", "root"};
  Verifier v;
  return v.node(D, cert, "root");
}

}  // namespace hbl
