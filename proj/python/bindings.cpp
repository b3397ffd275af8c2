// Thin pybind11 layer. Reports cross the boundary as JSON text; the Python
// package parses them.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "salmon/acceptance.hpp"
#include "salmon/driver.hpp"
#include "salmon/errors.hpp"
#include "salmon/linalg.hpp"
#include "salmon/lm6.hpp"
#include "salmon/salmon444.hpp"
#include "salmon/sampling.hpp"
#include "salmon/sym9.hpp"
#include "salmon/tensor_io.hpp"

namespace py = pybind11;
using namespace salmon;

namespace {

Field field_for(const std::string& mode, std::uint64_t prime) {
  if (mode == "exact" || mode == "rational") return Field::rational();
  if (mode == "modp" || mode == "gfp") return Field::prime(prime);
  if (mode == "float") return Field::float64();
  throw DomainError("unknown mode " + mode);
}

LMFamily family_at(const std::string& lm_file) {
  return load_lm_file(lm_file.empty() ? default_lm_path() : std::filesystem::path(lm_file));
}

}  // namespace

PYBIND11_MODULE(_salmon, m) {
  m.doc() = "Border rank 4 membership tests (C++ core)";

  py::register_exception<Error>(m, "SalmonError", PyExc_RuntimeError);

  py::class_<Tensor3>(m, "Tensor")
      .def_static("from_json", [](const std::string& s) { return tensor_from_json(s); })
      .def("to_json", [](const Tensor3& t) { return tensor_to_json(t); })
      .def_property_readonly("dims", [](const Tensor3& t) { return t.dims(); })
      .def_property_readonly("mode", [](const Tensor3& t) { return t.field().name(); })
      .def("__getitem__",
           [](const Tensor3& t, std::array<int, 3> idx) {
             for (int a = 0; a < 3; ++a)
               if (idx[a] < 0 || idx[a] >= t.dims()[a]) throw py::index_error("tensor index out of range");
             return t(idx[0], idx[1], idx[2]).to_string();
           })
      .def("convert", [](const Tensor3& t, const std::string& mode,
                         std::uint64_t prime) { return t.convert(field_for(mode, prime)); },
           py::arg("mode"), py::arg("prime") = modp::kMersenne31)
      .def("flattening_ranks",
           [](const Tensor3& t) {
             std::array<std::size_t, 3> r{};
             for (int a = 1; a <= 3; ++a) r[a - 1] = rank(t.flattening(a));
             return r;
           })
      .def("__eq__", [](const Tensor3& a, const Tensor3& b) { return a == b; })
      .def("__repr__", [](const Tensor3& t) {
        return "<salmon.Tensor " + std::to_string(t.m()) + "x" + std::to_string(t.n()) + "x" +
               std::to_string(t.l()) + " " + t.field().name() + ">";
      });

  m.def("sample_rank_r", [](std::array<int, 3> dims, int r, std::uint64_t seed, int bound) {
    return sample_rank_r(dims, r, Field::rational(), seed, bound);
  }, py::arg("dims"), py::arg("r"), py::arg("seed"), py::arg("bound") = kDefaultCoeffBound);
  m.def("sample_dense", [](std::array<int, 3> dims, std::uint64_t seed, int bound) {
    return sample_dense(dims, Field::rational(), seed, bound);
  }, py::arg("dims"), py::arg("seed"), py::arg("bound") = kDefaultCoeffBound);
  m.def("sample_special_form", [](bool x33_zero, bool f_zero, std::uint64_t seed) {
    return sample_special_form(x33_zero, f_zero, Field::rational(), seed);
  }, py::arg("x33_zero"), py::arg("f_zero"), py::arg("seed"));
  m.def("sample_essentially_234", [](std::uint64_t seed) { return sample_essentially_234(Field::rational(), seed); },
        py::arg("seed"));
  m.def("matmul_tensor", [] { return matmul_tensor(); });

  m.def("default_lm_path", [] { return default_lm_path().string(); });
  m.def("membership_334", [](const Tensor3& t, const std::string& route, const std::string& lm_file) {
    py::gil_scoped_release release;
    if (route == "a") return membership_route_a(t).to_json().dump();
    if (route == "b") return membership_route_b(t, family_at(lm_file)).to_json().dump();
    throw DomainError("route must be 'a' or 'b'");
  }, py::arg("tensor"), py::arg("route") = "b", py::arg("lm_file") = "");
  m.def("membership_444", [](const Tensor3& t, int trials, const std::string& mode, std::uint64_t prime,
                             std::uint64_t seed, const std::string& lm_file) {
    py::gil_scoped_release release;
    LiftConfig cfg;
    cfg.trials = trials;
    cfg.field = field_for(mode, prime);
    cfg.seed = seed;
    return membership444(t, family_at(lm_file), cfg).to_json().dump();
  }, py::arg("tensor"), py::arg("trials") = 32, py::arg("mode") = "modp", py::arg("prime") = modp::kMersenne31,
        py::arg("seed") = 0, py::arg("lm_file") = "");
  m.def("float_check", [](const Tensor3& t, bool with_lm, const std::string& lm_file) {
    std::optional<LMFamily> fam;
    if (with_lm) fam = family_at(lm_file);
    py::gil_scoped_release release;
    return float_check(t.convert(Field::float64()), fam ? &*fam : nullptr).to_json().dump();
  }, py::arg("tensor"), py::arg("with_lm") = true, py::arg("lm_file") = "");
  m.def("restricted_identity_check", [](const std::string& lm_file) {
    return restricted_identity_check(family_at(lm_file)).to_json().dump();
  }, py::arg("lm_file") = "");
  m.def("run_acceptance", [](std::vector<int> criteria, const std::string& lm_file, std::uint64_t seed) {
    AcceptanceOptions opts;
    opts.criteria = std::move(criteria);
    if (!lm_file.empty()) opts.lm_file = lm_file;
    opts.seed = seed;
    py::gil_scoped_release release;
    return run_acceptance(opts).to_json().dump();
  }, py::arg("criteria") = std::vector<int>{}, py::arg("lm_file") = "", py::arg("seed") = AcceptanceOptions{}.seed);
  m.def("cli_run", [](std::vector<std::string> args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = cli_run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
