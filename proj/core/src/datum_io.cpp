#include "hbl/datum_io.hpp"

#include <fstream>
#include <sstream>

namespace hbl {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

Rat rat_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return parse_rat(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rat(j.get<long>());
  throw ParseError(where + ": expected a rational string \"a/b\"");
}

std::size_t count_from_json(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long>() < 0) throw ParseError(where + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

Int int_from_json(const json& j, const std::string& where) {
  Rat q = rat_from_json(j, where);
  if (q.get_den() != 1) throw ParseError(where + ": expected an integer");
  return q.get_num();
}

IntMatrix int_matrix_from_json(const json& j, std::size_t cols, const std::string& where) {
  RatMatrix q = rat_matrix_from_json(j, cols, where);
  IntMatrix out(q.rows(), q.cols());
  for (std::size_t r = 0; r < q.rows(); ++r)
    for (std::size_t c = 0; c < q.cols(); ++c) {
      if (q(r, c).get_den() != 1) throw ParseError(where + ": homomorphism entries must be integers");
      out(r, c) = q(r, c).get_num();
    }
  return out;
}

TorsionData torsion_from_json(const json& j) {
  TorsionData t;
  if (j.contains("group"))
    for (std::size_t i = 0; i < j["group"].size(); ++i)
      t.group.push_back(int_from_json(j["group"][i], "torsion.group[" + std::to_string(i) + "]"));
  if (j.contains("targets"))
    for (std::size_t k = 0; k < j["targets"].size(); ++k) {
      std::vector<Int> row;
      for (std::size_t i = 0; i < j["targets"][k].size(); ++i)
        row.push_back(int_from_json(j["targets"][k][i], "torsion.targets"));
      t.targets.push_back(std::move(row));
    }
  return t;
}

json torsion_to_json(const TorsionData& t) {
  json g = json::array(), targets = json::array();
  for (const auto& z : t.group) g.push_back(z.get_str());
  for (const auto& row : t.targets) {
    json r = json::array();
    for (const auto& z : row) r.push_back(z.get_str());
    targets.push_back(r);
  }
  return {{"group", g}, {"targets", targets}};
}

}  // namespace

json rat_matrix_to_json(const RatMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

RatMatrix rat_matrix_from_json(const json& j, std::size_t expected_cols, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of rows");
  RatMatrix m(j.size(), expected_cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const json& row = j[r];
    std::string rw = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != expected_cols) {
      throw ParseError(rw + ": expected " + std::to_string(expected_cols) + " entries");
    }
    for (std::size_t c = 0; c < expected_cols; ++c) m(r, c) = rat_from_json(row[c], rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

json subspace_to_json(const Subspace& s) {
  return {{"ambient_dim", s.ambient_dim()}, {"basis", rat_matrix_to_json(s.basis())}};
}

Subspace subspace_from_json(const json& j, std::size_t ambient, const std::string& where) {
  std::size_t amb = j.contains("ambient_dim") ? count_from_json(j["ambient_dim"], where + ".ambient_dim") : ambient;
  if (amb != ambient) throw ParseError(where + ": ambient dimension mismatch");
  RatMatrix basis = rat_matrix_from_json(field(j, "basis", where), amb, where + ".basis");
  Subspace s = Subspace::span(basis);
  if (!(s.basis() == basis)) throw ParseError(where + ": basis is not in reduced row-echelon form");
  return s;
}

json exponents_to_json(const ExponentVector& t) {
  json a = json::array();
  for (const auto& q : t) a.push_back(to_string(q));
  return a;
}

ExponentVector exponents_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of rationals");
  ExponentVector t;
  for (std::size_t i = 0; i < j.size(); ++i) t.push_back(rat_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return t;
}

json datum_to_json(const BLDatum& d) {
  json factors = json::array();
  for (std::size_t j = 0; j < d.m(); ++j) {
    factors.push_back({{"target_dim", d.factors[j].target_dim},
                       {"matrix", rat_matrix_to_json(d.factors[j].map)},
                       {"t", to_string(d.t[j])}});
  }
  json out = {{"mode", mode_name(d.mode)}, {"n", d.n}, {"factors", factors}};
  if (d.mode == Mode::Gut || (d.mode == Mode::Amalgam && d.map0 && d.map0->rows() > 0)) {
    out["ell0"] = rat_matrix_to_json(*d.map0);
  }
  if (d.mode == Mode::Amalgam && d.atomic && !d.atomic->is_full()) out["atomic"] = subspace_to_json(*d.atomic);
  if (d.torsion) out["torsion"] = torsion_to_json(*d.torsion);
  return out;
}

BLDatum datum_from_json(const json& j) {
  BLDatum d;
  d.mode = parse_mode(field(j, "mode", "datum").get<std::string>());
  d.n = count_from_json(field(j, "n", "datum"), "n");
  const json& factors = field(j, "factors", "datum");
  if (!factors.is_array()) throw ParseError("factors: expected an array");
  for (std::size_t k = 0; k < factors.size(); ++k) {
    std::string where = "factors[" + std::to_string(k) + "]";
    const json& f = factors[k];
    std::size_t nj = count_from_json(field(f, "target_dim", where), where + ".target_dim");
    RatMatrix m = rat_matrix_from_json(field(f, "matrix", where), d.n, where + ".matrix");
    if (m.rows() != nj) throw ParseError(where + ".matrix: expected " + std::to_string(nj) + " rows");
    d.factors.push_back({nj, std::move(m)});
    d.t.push_back(rat_from_json(field(f, "t", where), where + ".t"));
  }
  if (j.contains("ell0")) d.map0 = rat_matrix_from_json(j["ell0"], d.n, "ell0");
  if (d.mode == Mode::Gut && !d.map0) throw ParseError("ell0: required in gut mode");
  if (j.contains("atomic")) d.atomic = subspace_from_json(j["atomic"], d.n, "atomic");
  if (j.contains("torsion")) d.torsion = torsion_from_json(j["torsion"]);
  return validate(d);
}

json finner_to_json(const FinnerDatum& f) {
  json indices = json::array(), supports = json::array(), factors = json::array();
  for (const auto& i : f.indices) indices.push_back({{"id", i.id}, {"class", class_name(i.cls)}});
  for (const auto& s : f.supports) {
    json ids = json::array();
    for (auto i : s) ids.push_back(f.indices[i].id);
    supports.push_back(ids);
  }
  for (const auto& t : f.t) factors.push_back({{"t", to_string(t)}});
  return {{"mode", "finner"}, {"factors", factors}, {"finner", {{"indices", indices}, {"supports", supports}}}};
}

BLDatum DatumFile::continuum() const {
  if (datum) return *datum;
  if (finner) return finner_to_continuum(*finner);
  return discrete_to_rational(*discrete);
}

DatumFile parse_datum(const json& j) {
  DatumFile out;
  out.mode = field(j, "mode", "datum").get<std::string>();
  if (out.mode == "finner") {
    const json& fb = field(j, "finner", "datum");
    FinnerDatum f;
    const json& idx = field(fb, "indices", "finner");
    for (std::size_t k = 0; k < idx.size(); ++k) {
      std::string where = "finner.indices[" + std::to_string(k) + "]";
      f.indices.push_back({field(idx[k], "id", where).get<std::string>(),
                           parse_class(field(idx[k], "class", where).get<std::string>())});
    }
    const json& sup = field(fb, "supports", "finner");
    for (std::size_t k = 0; k < sup.size(); ++k) {
      std::vector<std::size_t> s;
      for (const auto& id : sup[k]) {
        auto it = std::find_if(f.indices.begin(), f.indices.end(),
                               [&](const FinnerIndex& x) { return x.id == id.get<std::string>(); });
        if (it == f.indices.end()) throw ParseError("finner.supports[" + std::to_string(k) + "]: unknown index id");
        s.push_back(static_cast<std::size_t>(it - f.indices.begin()));
      }
      f.supports.push_back(std::move(s));
    }
    const json& factors = field(j, "factors", "datum");
    for (std::size_t k = 0; k < factors.size(); ++k)
      f.t.push_back(rat_from_json(field(factors[k], "t", "factors[" + std::to_string(k) + "]"),
                                  "factors[" + std::to_string(k) + "].t"));
    validate(f);
    out.finner = std::move(f);
  } else if (out.mode == "discrete") {
    DiscreteDatum dd;
    dd.free_rank = count_from_json(field(j, "n", "datum"), "n");
    const json& factors = field(j, "factors", "datum");
    for (std::size_t k = 0; k < factors.size(); ++k) {
      std::string where = "factors[" + std::to_string(k) + "]";
      std::size_t nj = count_from_json(field(factors[k], "target_dim", where), where + ".target_dim");
      IntMatrix h = int_matrix_from_json(field(factors[k], "matrix", where), dd.free_rank, where + ".matrix");
      if (h.rows() != nj) throw ParseError(where + ".matrix: expected " + std::to_string(nj) + " rows");
      dd.homs.push_back(std::move(h));
      dd.t.push_back(rat_from_json(field(factors[k], "t", where), where + ".t"));
    }
    if (j.contains("torsion")) dd.torsion = torsion_from_json(j["torsion"]);
    validate(dd);
    out.discrete = std::move(dd);
  } else {
    out.datum = datum_from_json(j);
  }
  return out;
}

DatumFile parse_datum_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is a 1-based offset; translate it to a line number.
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  }
  try {
    return parse_datum(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed datum: ") + e.what());
  }
}

DatumFile load_datum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_datum_text(ss.str());
}

}  // namespace hbl
