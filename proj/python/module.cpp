// Python bindings. Every call takes and returns JSON text in the CLI formats,
// so arbitrary-size integers and rationals cross the boundary unchanged.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qlat/cli.hpp"
#include "qlat/corpus.hpp"
#include "qlat/genus.hpp"
#include "qlat/heights.hpp"
#include "qlat/io.hpp"
#include "qlat/localrep.hpp"
#include "qlat/padic.hpp"
#include "qlat/represent.hpp"

namespace py = pybind11;
using namespace qlat;

namespace {

Json parse(const std::string& s) {
  try {
    return Json::parse(s);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(e.what());
  }
}

QuadLattice lat(const std::string& s) { return lattice_from_json(parse(s)); }

GenusPartition genus_of(const QuadLattice& l) {
  GenusPartition g = genus_classes(l);
  return l.rank() >= 3 ? spin_partition(std::move(g)) : g;
}

}  // namespace

PYBIND11_MODULE(_qlat, m) {
  m.doc() = "Integral quadratic lattices: reduction, genus, representation numbers, p-adic lifting, heights";

  static py::exception<Error> error(m, "QlatError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(e.kind(), e.what()).ptr());
    }
  });

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the qlat command line; returns (exit code, stdout, stderr).");

  m.def("reduce", [](const std::string& l) {
    Reduced r = minkowski_reduce(lat(l));
    return Json{{"lattice", to_json(r.lattice)}, {"change", to_json(r.change.matrix())}}.dump();
  });
  m.def("aut_order", [](const std::string& l) { return to_json(automorphisms(lat(l)).order).dump(); });
  m.def("isometric", [](const std::string& a, const std::string& b) {
    auto u = isometric(lat(a), lat(b));
    return u ? to_json(u->matrix()).dump() : std::string("null");
  });
  m.def("genus", [](const std::string& l) { return to_json(genus_of(lat(l))).dump(); });
  m.def(
      "local_primitive",
      [](const std::string& mm, const std::string& l, const std::string& p) {
        if (p.empty()) return to_json(locally_primitively_representable_everywhere(lat(mm), lat(l))).dump();
        return to_json(is_locally_primitively_representable(lat(mm), lat(l), int_from_json(parse(p)))).dump();
      },
      py::arg("m"), py::arg("l"), py::arg("p") = "");
  m.def("count", [](const std::string& mm, const std::string& l) {
    RepCount c = count_representations(lat(mm), lat(l));
    return Json{{"r", to_json(c.r)}, {"r_all", to_json(c.r_all)}}.dump();
  });
  m.def("rep_numbers", [](const std::string& mm, const std::string& l) {
    return to_json(rep_numbers(lat(mm), genus_of(lat(l)))).dump();
  });
  m.def("verify_lgp", [](const std::string& mm, const std::string& l) { return to_json(verify_lgp(lat(mm), lat(l))).dump(); });
  m.def("ratio", [](const std::string& l, const std::vector<std::int64_t>& ts) {
    return to_json(ratio_experiment(genus_classes(lat(l)), ts)).dump();
  });
  m.def("content", [](const std::string& w) { return to_json(content(rat_vector_from_json(parse(w)))).dump(); });
  m.def("lie_so", [](const std::string& l) { return to_json(lie_so(lat(l))).dump(); });
  m.def("snf", [](const std::string& p, int e, const std::string& a) {
    return to_json(smith_normal_form(PadicMatrix(int_from_json(parse(p)), e, int_matrix_from_json(parse(a))))).dump();
  });
  m.def("newton_lift", [](const std::string& f, const std::string& x0, const std::string& p, int e) {
    return to_json(newton_lift(poly_system_from_json(parse(f)), int_vector_from_json(parse(x0)), int_from_json(parse(p)), e)).dump();
  });
  m.def(
      "greenberg_lift",
      [](const std::string& f, const std::string& w, const std::string& p, int k, std::uint64_t budget) {
        return to_json(greenberg_lift(poly_system_from_json(parse(f)), int_vector_from_json(parse(w)), int_from_json(parse(p)), k,
                                      budget))
            .dump();
      },
      py::arg("f"), py::arg("w"), py::arg("p"), py::arg("k"), py::arg("budget") = 200000);
  m.def("corpus", [](std::uint64_t seed, std::size_t mm, std::size_t n, const std::string& det_bound, std::size_t count) {
    return to_json(gen_corpus(seed, mm, n, int_from_json(parse(det_bound)), count)).dump();
  });
}
