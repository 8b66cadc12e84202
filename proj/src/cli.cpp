#include "qlat/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <ostream>

#include "qlat/io.hpp"

namespace qlat {

namespace {

struct Outcome {
  Json body;
  int code = kExitOk;
};

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << "\t" << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

std::vector<std::int64_t> parse_t_values(const std::string& s) {
  std::vector<std::int64_t> out;
  auto num = [&](const std::string& x) -> std::int64_t {
    try {
      std::size_t used = 0;
      long long v = std::stoll(x, &used);
      if (used != x.size()) throw FormatError("bad t value: " + x);
      return v;
    } catch (const std::logic_error&) {
      throw FormatError("bad t value: " + x);
    }
  };
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(num(part));
      continue;
    }
    std::int64_t a = num(part.substr(0, dots)), b = num(part.substr(dots + 2));
    if (b < a || b - a > 1000000) throw FormatError("bad t range: " + part);
    for (std::int64_t t = a; t <= b; ++t) out.push_back(t);
  }
  return out;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("input is missing \"") + key + "\"");
  return j[key];
}

int int_field(const Json& j, const char* key) {
  const Json& x = field(j, key);
  if (!x.is_number_integer()) throw FormatError(std::string("\"") + key + "\" must be an integer");
  return x.get<int>();
}

IntMatrix columns_from_vectors(const Json& j, std::size_t n) {
  if (!j.is_array()) throw FormatError("subspace must be an array of vectors");
  IntMatrix w(n, j.size());
  for (std::size_t c = 0; c < j.size(); ++c) {
    IntVector v = int_vector_from_json(j[c]);
    if (v.size() != n) throw FormatError("subspace vector has the wrong length");
    w.set_column(c, v);
  }
  return w;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact arithmetic of integral quadratic lattices", "qlat"};
  app.require_subcommand(1);
  bool table = false;
  std::uint64_t seed = 1;
  Caps caps = Caps::from_env();
  app.add_flag("--table", table, "Tab-separated key/value output instead of JSON");
  app.add_option("--seed", seed, "Seed for corpus generation");
  app.add_option("--cap-short-vectors", caps.short_vectors, "Short-vector enumeration cap");
  app.add_option("--cap-classes", caps.classes, "Genus class cap");
  app.add_option("--cap-modp", caps.modp, "Brute-force mod p^e counting cap");
  app.add_option("--cap-nodes", caps.nodes, "Search node cap");

  std::string l_path, m_path, a_path, b_path, in_path, w_path, t_spec = "1..200", w_inline;
  std::string prime;
  std::size_t max_classes = 0, corpus_m = 1, corpus_n = 4, corpus_count = 20;
  std::string det_bound = "10000";
  bool primitive = false, all_classes = false, nonprimitive = false, elements = false;
  std::uint64_t budget = 200000;

  auto need_l = [&](CLI::App* s) { s->add_option("-L,--lattice", l_path, "Lattice JSON")->required(); };
  auto need_m = [&](CLI::App* s) { s->add_option("-M,--sublattice", m_path, "Lattice JSON for M")->required(); };

  auto* reduce = app.add_subcommand("reduce", "Minkowski-reduce a lattice");
  need_l(reduce);
  auto* aut = app.add_subcommand("aut", "Automorphism group");
  need_l(aut);
  aut->add_flag("--elements", elements, "List every element");
  auto* isom = app.add_subcommand("isom", "Isometry test");
  isom->add_option("-A", a_path, "First lattice")->required();
  isom->add_option("-B", b_path, "Second lattice")->required();
  auto* genus = app.add_subcommand("genus", "Classes of the genus");
  need_l(genus);
  genus->add_option("--max-classes", max_classes, "Class cap");
  auto* spn = app.add_subcommand("spn", "Genus with spin blocks");
  need_l(spn);
  spn->add_option("--max-classes", max_classes, "Class cap");
  auto* localrep = app.add_subcommand("localrep", "Local primitive representability");
  need_m(localrep);
  need_l(localrep);
  localrep->add_option("--prime", prime, "Single prime");
  localrep->add_flag("--nonprimitive", nonprimitive, "Not necessarily primitive (rank one M)");
  auto* count = app.add_subcommand("count", "Representation counts");
  need_m(count);
  need_l(count);
  count->add_flag("--primitive", primitive, "Decide on the primitive count");
  count->add_flag("--all-classes", all_classes, "Per-class counts and genus averages");
  auto* lgp = app.add_subcommand("verify-lgp", "Local-global instance check");
  need_m(lgp);
  need_l(lgp);
  auto* ratio = app.add_subcommand("ratio", "r / r_gen table for <t>");
  need_l(ratio);
  ratio->add_option("--t", t_spec, "Values: a..b or comma list");
  auto* heights = app.add_subcommand("heights", "Contents and heights");
  heights->require_subcommand(1);
  auto* h_content = heights->add_subcommand("content", "Content of a rational vector");
  h_content->add_option("-i,--input", in_path, "JSON array of rationals");
  h_content->add_option("--w", w_inline, "Comma separated rationals");
  auto* h_lie = heights->add_subcommand("lieso", "Lie algebra of SO_Q");
  need_l(h_lie);
  auto* h_stab = heights->add_subcommand("stab", "Pointwise stabilizer algebra");
  need_l(h_stab);
  h_stab->add_option("-W,--subspace", w_path, "JSON array of basis vectors")->required();
  auto* padic = app.add_subcommand("padic", "p-adic kernels");
  padic->require_subcommand(1);
  auto* p_snf = padic->add_subcommand("snf", "Smith form over Z/p^e");
  p_snf->add_option("-i,--input", in_path, "{p, e, matrix}")->required();
  auto* p_lift = padic->add_subcommand("lift", "Newton lifting");
  p_lift->add_option("-i,--input", in_path, "{vars, polys, p, x0, target_e}")->required();
  auto* p_gb = padic->add_subcommand("greenberg", "Greenberg lifting");
  p_gb->add_option("-i,--input", in_path, "{vars, polys, p, w, k}")->required();
  p_gb->add_option("--budget", budget, "Search nodes");
  auto* p_kgen = padic->add_subcommand("kgen", "k-generation check");
  p_kgen->add_option("-i,--input", in_path, "{p, m_dim, nilpotents}")->required();
  p_kgen->add_option("--budget", budget, "Grid points");
  auto* corpus = app.add_subcommand("corpus", "Seeded (M, L) instances");
  corpus->add_option("--m", corpus_m, "Rank of M");
  corpus->add_option("--n", corpus_n, "Rank of L");
  corpus->add_option("--det-bound", det_bound, "Bound on det(E_L)");
  corpus->add_option("--count", corpus_count, "Number of instances");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  Outcome res;
  try {
    if (max_classes > 0) caps.classes = max_classes;
    set_default_caps(caps);
    auto lat = [&](const std::string& p) { return lattice_from_json(read_json_file(p)); };

    if (reduce->parsed()) {
      QuadLattice l = lat(l_path);
      Reduced r = minkowski_reduce(l);
      res.body = Json{{"lattice", to_json(r.lattice)}, {"gram2", to_json(r.lattice.gram2())},
                      {"change", to_json(r.change.matrix())}, {"det_e", to_json(discriminant(l).det_e)},
                      {"disc", rat_json(discriminant(l).disc)}};
    } else if (aut->parsed()) {
      QuadLattice l = lat(l_path);
      AutomorphismGroup g = automorphisms(l);
      Json gens = Json::array();
      for (const auto& u : g.generators) gens.push_back(to_json(u.matrix()));
      res.body = Json{{"order", to_json(g.order)}, {"generators", gens}};
      if (elements) {
        Json all = Json::array();
        for (const auto& u : automorphism_elements(l)) all.push_back(to_json(u.matrix()));
        res.body["elements"] = all;
      }
    } else if (isom->parsed()) {
      auto u = isometric(lat(a_path), lat(b_path));
      res.body = Json{{"isometric", u.has_value()}, {"change", u ? to_json(u->matrix()) : Json(nullptr)}};
      if (!u) res.code = kExitNegative;
    } else if (genus->parsed()) {
      res.body = to_json(genus_classes(lat(l_path), caps));
    } else if (spn->parsed()) {
      res.body = to_json(spin_partition(genus_classes(lat(l_path), caps)));
    } else if (localrep->parsed()) {
      QuadLattice m = lat(m_path), l = lat(l_path);
      if (!prime.empty()) {
        Int p = int_from_json(Json(prime));
        LocalCertificate c = nonprimitive ? is_locally_representable(m, l, p, caps)
                                          : is_locally_primitively_representable(m, l, p, caps);
        res.body = to_json(c);
        res.code = c.verdict ? kExitOk : kExitNegative;
      } else {
        LocalReport r = nonprimitive ? locally_representable_everywhere(m, l, caps)
                                     : locally_primitively_representable_everywhere(m, l, caps);
        res.body = to_json(r);
        res.code = r.verdict ? kExitOk : kExitNegative;
      }
    } else if (count->parsed()) {
      QuadLattice m = lat(m_path), l = lat(l_path);
      Int decided;
      if (all_classes) {
        GenusPartition g = genus_classes(l, caps);
        if (l.rank() >= 3) g = spin_partition(std::move(g));
        RepReport r = rep_numbers(m, g);
        res.body = to_json(r);
        decided = primitive ? r.r : r.r_all;
      } else {
        RepCount c = count_representations(m, l);
        res.body = Json{{"r", to_json(c.r)}, {"r_all", to_json(c.r_all)}};
        decided = primitive ? c.r : c.r_all;
      }
      res.code = decided > 0 ? kExitOk : kExitNegative;
    } else if (lgp->parsed()) {
      LgpVerdict v = verify_lgp(lat(m_path), lat(l_path));
      res.body = to_json(v);
      res.code = v.every_class_represents ? kExitOk : kExitNegative;
    } else if (ratio->parsed()) {
      GenusPartition g = genus_classes(lat(l_path), caps);
      res.body = Json{{"genus_size", g.classes.size()}, {"rows", to_json(ratio_experiment(g, parse_t_values(t_spec)))}};
    } else if (h_content->parsed()) {
      RatVector w;
      if (!in_path.empty()) {
        w = rat_vector_from_json(read_json_file(in_path));
      } else {
        std::stringstream ss(w_inline);
        std::string part;
        while (std::getline(ss, part, ',')) w.push_back(rat_from_json(Json(part)));
      }
      if (w.empty()) throw FormatError("content needs a vector (-i or --w)");
      res.body = to_json(content(w));
    } else if (h_lie->parsed()) {
      res.body = to_json(lie_so(lat(l_path)));
    } else if (h_stab->parsed()) {
      QuadLattice l = lat(l_path);
      res.body = to_json(stabilizer_height(l, columns_from_vectors(read_json_file(w_path), l.rank())));
    } else if (p_snf->parsed()) {
      Json in = read_json_file(in_path);
      PadicMatrix a(int_from_json(field(in, "p")), int_field(in, "e"), int_matrix_from_json(field(in, "matrix")));
      res.body = to_json(smith_normal_form(a));
    } else if (p_lift->parsed()) {
      Json in = read_json_file(in_path);
      PolySystem f = poly_system_from_json(in);
      IntVector x = newton_lift(f, int_vector_from_json(field(in, "x0")), int_from_json(field(in, "p")),
                                int_field(in, "target_e"));
      res.body = Json{{"x", to_json(x)}, {"target_e", int_field(in, "target_e")}};
    } else if (p_gb->parsed()) {
      Json in = read_json_file(in_path);
      PolySystem f = poly_system_from_json(in);
      GreenbergResult g =
          greenberg_lift(f, int_vector_from_json(field(in, "w")), int_from_json(field(in, "p")), int_field(in, "k"), budget);
      res.body = to_json(g);
      if (!g.w) res.code = g.budget_exhausted ? kExitResource : kExitNegative;
    } else if (p_kgen->parsed()) {
      Json in = read_json_file(in_path);
      std::vector<IntMatrix> nil;
      const Json& arr = field(in, "nilpotents");
      if (!arr.is_array()) throw FormatError("\"nilpotents\" must be an array of matrices");
      for (const auto& x : arr) nil.push_back(int_matrix_from_json(x));
      const int m_dim = int_field(in, "m_dim");
      if (m_dim < 1) throw FormatError("\"m_dim\" must be positive");
      KGeneration k = k_generation_check(nil, int_from_json(field(in, "p")), static_cast<std::size_t>(m_dim), budget);
      res.body = to_json(k);
      if (!k.k) res.code = kExitResource;
    } else if (corpus->parsed()) {
      res.body = to_json(gen_corpus(seed, corpus_m, corpus_n, int_from_json(Json(det_bound)), corpus_count, caps));
    }
  } catch (const FormatError& e) {
    res.body = Json{{"error", e.kind()}, {"message", e.what()}};
    res.code = kExitUsage;
  } catch (const PreconditionError& e) {
    res.body = Json{{"error", e.kind()}, {"message", e.what()}};
    res.code = kExitNegative;
  } catch (const MarginError& e) {
    res.body = Json{{"error", e.kind()}, {"message", e.what()}};
    res.code = kExitNegative;
  } catch (const Error& e) {
    res.body = Json{{"error", e.kind()}, {"message", e.what()}};
    res.code = kExitResource;
  }

  if (table)
    flatten(res.body, "", out);
  else
    out << res.body.dump(2) << "\n";
  return res.code;
}

}  // namespace qlat
