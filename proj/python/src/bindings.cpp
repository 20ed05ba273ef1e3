#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "enpave/checks.hpp"
#include "enpave/cli.hpp"
#include "enpave/fiber.hpp"
#include "enpave/normal_form.hpp"

namespace py = pybind11;
using namespace enpave;

namespace {

using PyBipartition = std::tuple<std::vector<int>, std::vector<int>>;

Bipartition to_bipartition(const PyBipartition& b) {
  return Bipartition{Partition(std::get<0>(b)), Partition(std::get<1>(b))};
}

PyBipartition from_bipartition(const Bipartition& b) { return {b.mu.parts(), b.nu.parts()}; }

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

MatrixGF to_matrix(const std::vector<std::vector<long long>>& rows, PrimeField field) {
  return MatrixGF::from_rows(field, rows);
}

VectorGF to_vector(const std::vector<long long>& v, const PrimeField& field) {
  VectorGF out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = field.from_int(v[i]);
  return out;
}

}  // namespace

PYBIND11_MODULE(_enpave, m) {
  m.doc() = "Point counts and checks for enhanced nilpotent orbit resolutions";

  m.def("bipartitions", [](int n) {
    std::vector<PyBipartition> out;
    for (const auto& b : bipartitions(n)) out.push_back(from_bipartition(b));
    return out;
  }, py::arg("n"));

  m.def("flag_shape", [](const PyBipartition& b) {
    auto s = flag_shape(to_bipartition(b));
    return std::make_tuple(s.dims(), s.marker());
  }, py::arg("bipartition"), "Dimension vector and marker j of the resolution.");

  m.def("is_distinguished", [](const PyBipartition& b) { return is_distinguished(to_bipartition(b)); },
        py::arg("bipartition"));

  m.def("normal_pair", [](const PyBipartition& b, std::uint32_t p) {
    return to_python(normal_pair(to_bipartition(b), PrimeField(p)).to_json());
  }, py::arg("bipartition"), py::arg("p") = 2);

  m.def("classify_pair", [](const std::vector<long long>& v,
                            const std::vector<std::vector<long long>>& x, std::uint32_t p) {
    PrimeField f(p);
    return from_bipartition(classify_pair(to_vector(v, f), to_matrix(x, f)));
  }, py::arg("v"), py::arg("x"), py::arg("p") = 2);

  m.def("count_fiber", [](const std::vector<long long>& v,
                          const std::vector<std::vector<long long>>& x, std::vector<int> dims,
                          int j, std::uint32_t p) {
    PrimeField f(p);
    return count_fiber(to_vector(v, f), to_matrix(x, f), FlagShape(std::move(dims), j));
  }, py::arg("v"), py::arg("x"), py::arg("dims"), py::arg("j"), py::arg("p") = 2,
        "Flags of the given shape with x(W_i) in W_{i-1} and v in W_j, over GF(p).");

  m.def("fiber_count", [](const PyBipartition& big, const PyBipartition& small, std::uint32_t p) {
    FiberCounter counter;
    return counter.count(normal_pair(to_bipartition(small), PrimeField(p)),
                         flag_shape(to_bipartition(big)));
  }, py::arg("big"), py::arg("small"), py::arg("p") = 2);

  m.def("fiber_polynomial", [](const PyBipartition& big, const PyBipartition& small) {
    FiberCounter counter;
    py::gil_scoped_release release;
    auto s = fiber_polynomial(to_bipartition(big), to_bipartition(small),
                              PrimeSchedule::standard(), counter);
    py::gil_scoped_acquire acquire;
    auto j = s.to_json();
    j["certified"] = s.certifies_paving();
    return to_python(j);
  }, py::arg("big"), py::arg("small"));

  m.def("orbit_dimension", [](const PyBipartition& b) { return orbit_dimension(to_bipartition(b)); },
        py::arg("bipartition"));

  m.def("closure_contains", [](const PyBipartition& big, const PyBipartition& small, std::uint32_t p) {
    FiberCounter counter;
    return closure_contains(to_bipartition(big), to_bipartition(small), PrimeField(p), counter);
  }, py::arg("big"), py::arg("small"), py::arg("p") = 2);

  m.def("gaussian_binomial", &gaussian_binomial, py::arg("m"), py::arg("d"), py::arg("q"));

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "enpave");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    }
    return std::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs the command line front end; returns (exit code, stdout, stderr).");
}
