#include "qlat/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace qlat {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

Json to_json(const Int& x) {
  if (x.fits_slong_p()) return Json(x.get_si());
  return Json(x.get_str());
}

Json rat_json(const Rat& q) { return Json(rat_to_string(q)); }

Int int_from_json(const Json& j) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Int(std::to_string(j.get<std::uint64_t>())) : Int(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    Int x;
    if (s.empty() || x.set_str(s, 10) != 0) throw FormatError("not an integer: \"" + s + "\"");
    return x;
  }
  throw FormatError("expected an integer, got " + j.dump());
}

Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(int_from_json(j));
  if (j.is_string()) {
    try {
      return rat_from_string(j.get<std::string>());
    } catch (const Error& e) {
      throw FormatError(e.what());
    }
  }
  throw FormatError("expected a rational, got " + j.dump());
}

Json to_json(const IntMatrix& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(to_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

IntMatrix int_matrix_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("matrix must be an array of rows");
  const std::size_t r = j.size(), c = r ? (j[0].is_array() ? j[0].size() : 0) : 0;
  IntMatrix a(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (!j[i].is_array() || j[i].size() != c) throw FormatError("matrix rows must be arrays of equal length");
    for (std::size_t k = 0; k < c; ++k) a(i, k) = int_from_json(j[i][k]);
  }
  return a;
}

Json to_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

IntVector int_vector_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("vector must be an array");
  IntVector v;
  for (const auto& x : j) v.push_back(int_from_json(x));
  return v;
}

RatVector rat_vector_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("vector must be an array");
  RatVector v;
  for (const auto& x : j) v.push_back(rat_from_json(x));
  return v;
}

Json to_json(const QuadLattice& l) {
  const IntMatrix c = l.coeffs();
  Json rows = Json::array();
  for (std::size_t i = 0; i < l.rank(); ++i) {
    Json row = Json::array();
    for (std::size_t j = i; j < l.rank(); ++j) row.push_back(to_json(c(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"n", l.rank()}, {"coeffs", rows}};
}

QuadLattice lattice_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("coeffs")) throw FormatError("lattice needs \"n\" and \"coeffs\"");
  if (!j["n"].is_number_integer() || j["n"].get<std::int64_t>() < 1) throw FormatError("\"n\" must be a positive integer");
  const std::size_t n = j["n"].get<std::size_t>();
  const Json& rows = j["coeffs"];
  if (!rows.is_array() || rows.size() != n) throw FormatError("\"coeffs\" must have n rows");
  IntMatrix c(n, n, Int(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n - i) throw FormatError("coeffs row " + std::to_string(i) + " must have n - i entries");
    for (std::size_t k = 0; k < n - i; ++k) c(i, i + k) = int_from_json(rows[i][k]);
  }
  return QuadLattice::from_coeffs(c);
}

Json to_json(const PolySystem& f) {
  Json polys = Json::array();
  for (const auto& p : f.polys) {
    Json terms = Json::array();
    for (const auto& t : p.terms()) terms.push_back(Json::array({to_json(t.coef), t.exps}));
    polys.push_back(std::move(terms));
  }
  return Json{{"vars", f.vars}, {"polys", polys}, {"degree", f.degree()}, {"height", to_json(f.height())}};
}

PolySystem poly_system_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vars") || !j.contains("polys")) throw FormatError("system needs \"vars\" and \"polys\"");
  if (!j["vars"].is_number_integer() || j["vars"].get<std::int64_t>() < 1) throw FormatError("\"vars\" must be a positive integer");
  const std::size_t m = j["vars"].get<std::size_t>();
  std::vector<Poly> polys;
  if (!j["polys"].is_array()) throw FormatError("\"polys\" must be an array");
  for (const auto& p : j["polys"]) {
    if (!p.is_array()) throw FormatError("each polynomial is an array of terms");
    std::vector<Monomial> terms;
    for (const auto& t : p) {
      if (!t.is_array() || t.size() != 2 || !t[1].is_array() || t[1].size() != m)
        throw FormatError("each term is [coef, [exponent vector of length vars]]");
      Monomial mono{int_from_json(t[0]), {}};
      for (const auto& e : t[1]) {
        if (!e.is_number_integer() || e.get<std::int64_t>() < 0) throw FormatError("exponents must be non-negative integers");
        mono.exps.push_back(e.get<int>());
      }
      terms.push_back(std::move(mono));
    }
    polys.emplace_back(m, std::move(terms));
  }
  return PolySystem(m, std::move(polys));
}

Json to_json(const LocalCertificate& c) {
  Json j{{"p", to_json(c.p)}, {"e", c.e}, {"verdict", c.verdict}, {"liftable", c.liftable}, {"kappa", c.kappa}};
  j["witness"] = c.witness ? to_json(*c.witness) : Json(nullptr);
  return j;
}

Json to_json(const LocalReport& r) {
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  return Json{{"verdict", r.verdict}, {"certificates", certs}};
}

Json to_json(const GenusPartition& g) {
  Json classes = Json::array();
  for (const auto& c : g.classes) {
    Json x{{"lattice", to_json(c.lattice)}, {"gram2", to_json(c.lattice.gram2())}, {"aut_order", to_json(c.aut_order)},
           {"weight", rat_json(c.weight)}};
    if (c.block >= 0) x["block"] = c.block;
    classes.push_back(std::move(x));
  }
  Json primes = Json::array();
  for (const auto& p : g.primes) primes.push_back(to_json(p));
  Json j{{"base", to_json(g.base)},
         {"det_e", to_json(discriminant(g.base).det_e)},
         {"size", g.classes.size()},
         {"base_class", g.base_class},
         {"omega_gen", rat_json(g.omega_gen)},
         {"primes", primes},
         {"classes", classes}};
  if (!g.spin_blocks.empty()) {
    Json blocks = Json::array();
    for (std::size_t b = 0; b < g.spin_blocks.size(); ++b)
      blocks.push_back(Json{{"classes", g.spin_blocks[b]}, {"omega_spn", rat_json(g.omega_spn[b])}});
    j["spin_blocks"] = blocks;
  }
  return j;
}

Json to_json(const RepReport& r) {
  Json per = Json::array();
  for (const auto& c : r.per_class) per.push_back(Json{{"r", to_json(c.r)}, {"r_all", to_json(c.r_all)}});
  Json j{{"r", to_json(r.r)}, {"r_all", to_json(r.r_all)}, {"r_gen", rat_json(r.r_gen)}};
  j["r_spn"] = r.r_spn ? rat_json(*r.r_spn) : Json(nullptr);
  if (!r.r_spn_blocks.empty()) {
    Json b = Json::array();
    for (const auto& x : r.r_spn_blocks) b.push_back(rat_json(x));
    j["r_spn_blocks"] = b;
  }
  j["per_class"] = per;
  return j;
}

Json to_json(const LgpVerdict& v) {
  Json per = Json::array();
  for (const auto& r : v.per_class_r) per.push_back(to_json(r));
  return Json{{"locally_ok", v.locally_ok},
              {"min_m", to_json(v.min_m)},
              {"det_e_l", to_json(v.det_e_l)},
              {"genus_size", v.genus_size},
              {"per_class_r", per},
              {"every_class_represents", v.every_class_represents},
              {"local", to_json(v.local)}};
}

Json to_json(const std::vector<RatioRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    if (r.skipped) {
      a.push_back(Json{{"t", r.t}, {"skipped", true}, {"reason", r.reason}});
      continue;
    }
    a.push_back(Json{{"t", r.t}, {"r", to_json(r.r)}, {"r_gen", rat_json(r.r_gen)}, {"rel_error", rat_json(r.rel_error)}});
  }
  return a;
}

Json to_json(const HeightReport& h) {
  Json j{{"squared", rat_json(h.squared)}, {"decimal", h.decimal}};
  if (!h.primitive.empty()) {
    j["primitive"] = to_json(h.primitive);
    j["finite_part"] = rat_json(h.finite_part);
    j["arch_squared"] = rat_json(h.arch_sq);
  }
  return j;
}

Json to_json(const KernelBasis& k) {
  Json b = Json::array();
  for (const auto& v : k.basis) b.push_back(to_json(v));
  return Json{{"basis", b}, {"product_height_squared", rat_json(k.product_height_sq)}};
}

Json to_json(const LieBasis& l) {
  Json b = Json::array();
  for (const auto& x : l.basis) b.push_back(to_json(x));
  return Json{{"dimension", l.basis.size()}, {"basis", b}, {"height", to_json(l.height)}};
}

Json to_json(const PadicSmith& s) {
  Json v = Json::array();
  for (const auto& x : s.valuations) v.push_back(x.str());
  return Json{{"p", to_json(s.d.p())}, {"e", s.d.e()}, {"U", to_json(s.u.residues())}, {"D", to_json(s.d.residues())},
              {"V", to_json(s.v.residues())}, {"valuations", v}};
}

Json to_json(const GreenbergResult& g) {
  Json j{{"found", g.w.has_value()}, {"working_e", g.working_e}};
  if (g.w) {
    j["w"] = to_json(*g.w);
    j["agreement"] = g.agreement;
    j["exponent"] = g.exponent ? rat_json(*g.exponent) : Json(nullptr);
    j["method"] = g.method;
  } else {
    j["budget_exhausted"] = g.budget_exhausted;
  }
  j["nodes"] = g.nodes;
  return j;
}

Json to_json(const KGeneration& k) {
  Json j{{"found", k.k.has_value()}, {"points", k.points}};
  if (k.k) {
    j["k"] = *k.k;
    j["witness"] = to_json(k.witness);
  }
  return j;
}

Json to_json(const std::vector<CorpusInstance>& corpus) {
  Json a = Json::array();
  for (const auto& c : corpus)
    a.push_back(Json{{"M", to_json(c.m)}, {"L", to_json(c.l)}, {"det_e_l", to_json(discriminant(c.l).det_e)},
                     {"locally_ok", c.locally_ok}});
  return a;
}

}  // namespace qlat
