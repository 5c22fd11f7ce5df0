#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symtuck/anomaly.hpp"
#include "symtuck/io.hpp"
#include "symtuck/manifold.hpp"
#include "symtuck/moments.hpp"
#include "symtuck/streaming_solver.hpp"

namespace py = pybind11;
using namespace symtuck;

namespace {

py::dict record_to_dict(const TraceRecord& rec) {
  py::dict d;
  d["iter"] = rec.iter;
  d["phase"] = rec.phase;
  if (rec.objective) d["objective"] = *rec.objective;
  if (rec.rel_grad) d["relgrad"] = *rec.rel_grad;
  if (rec.subspace_error) d["subspace_error"] = *rec.subspace_error;
  d["step"] = rec.step;
  d["elapsed_s"] = rec.elapsed_s;
  return d;
}

py::list trace_to_list(const SolverTrace& trace) {
  py::list out;
  for (const auto& rec : trace.records) out.append(record_to_dict(rec));
  return out;
}

}  // namespace

PYBIND11_MODULE(_symtuck, m) {
  m.doc() = "streaming symmetric Tucker decomposition of sample moment tensors";

  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<OrderError>(m, "OrderError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
  py::register_exception<StreamUnderrunError>(m, "StreamUnderrunError", PyExc_RuntimeError);

  py::class_<SymTensor>(m, "SymTensor")
      .def(py::init([](int order, Index dim, const Vector& entries) {
             return SymTensor::from_entries(order, dim, entries);
           }),
           py::arg("order"), py::arg("dim"), py::arg("entries"))
      .def_property_readonly("order", &SymTensor::order)
      .def_property_readonly("dim", &SymTensor::dim)
      .def_property_readonly("entries", [](const SymTensor& t) { return t.entries(); });

  py::class_<StiefelBasis>(m, "StiefelBasis")
      .def(py::init<Matrix>(), py::arg("q"))
      .def_property_readonly("matrix", [](const StiefelBasis& q) { return q.matrix(); });

  m.def("sym_outer", &sym_outer, py::arg("x"), py::arg("order"));
  m.def("tucker_product", &tucker_product, py::arg("tensor"), py::arg("factor"));
  m.def("matricize", &matricize, py::arg("tensor"));
  m.def("inner", &inner, py::arg("a"), py::arg("b"));
  m.def("norm", &norm, py::arg("tensor"));

  m.def("build_moment", &build_moment, py::arg("samples"), py::arg("order"));
  m.def("whiten", &whiten, py::arg("samples"), py::arg("ridge_scale") = 1e-10);
  m.def(
      "sample_factor_model",
      [](const Matrix& loadings, double sigma, std::uint64_t seed, Index count, double alpha,
         double beta) {
        FactorModel model{loadings, sigma, NigParams{alpha, beta}, seed};
        return sample_factor_model(model, count);
      },
      py::arg("loadings"), py::arg("sigma"), py::arg("seed"), py::arg("count"),
      py::arg("nig_alpha") = 2.0, py::arg("nig_beta") = 1.0);
  m.def(
      "snr_inverse",
      [](const Matrix& loadings, double sigma) {
        FactorModel model{loadings, sigma, NigParams{}, 0};
        return snr_inverse(model);
      },
      py::arg("loadings"), py::arg("sigma"));

  m.def("qr_retract", &qr_retract, py::arg("m"));
  m.def("objective", &objective_explicit, py::arg("tensor"), py::arg("q"));
  m.def("euclidean_gradient", &euclidean_gradient_explicit, py::arg("tensor"), py::arg("q"));
  m.def("hoevd", &hoevd_explicit, py::arg("tensor"), py::arg("rank"));
  m.def(
      "pgd",
      [](const SymTensor& x, const StiefelBasis& q0, int max_iters, double tol, double step_c) {
        PgdOptions opts;
        opts.max_iters = max_iters;
        opts.tol = tol;
        opts.step_c = step_c;
        auto [q, trace] = pgd_explicit(x, q0, opts);
        return py::make_tuple(q, trace_to_list(trace));
      },
      py::arg("tensor"), py::arg("q0"), py::arg("max_iters") = 1000, py::arg("tol") = 1e-10,
      py::arg("step_c") = 0.5);

  m.def("implicit_gradient", &implicit_gradient, py::arg("batch"), py::arg("q"), py::arg("order"));
  m.def("hoevd_implicit_gradient", &hoevd_implicit_gradient, py::arg("batch"), py::arg("q"),
        py::arg("order"));
  m.def("batch_objective", &batch_objective, py::arg("samples"), py::arg("q"), py::arg("order"));
  m.def(
      "scalable_pgd",
      [](const Matrix& pool, int order, Index rank, int iters1, int iters2, Index batch1,
         Index batch2, double c1, double c2, std::uint64_t seed) {
        PoolStream stream(pool, batch1);
        TwoPhaseConfig cfg{iters1, iters2, batch1, batch2, c1, c2, rank, seed};
        auto [q, trace] = scalable_pgd(stream, cfg, order);
        return py::make_tuple(q, trace_to_list(trace));
      },
      py::arg("pool"), py::arg("order"), py::arg("rank"), py::arg("iters1"), py::arg("iters2"),
      py::arg("batch1"), py::arg("batch2"), py::arg("c1") = 1.0, py::arg("c2") = 1.0,
      py::arg("seed") = 0);
  m.def(
      "s_hoevd",
      [](const Matrix& pool, int order, Index rank, int iters, Index batch, double c,
         std::uint64_t seed) {
        PoolStream stream(pool, batch);
        ShoevdConfig cfg{iters, batch, c, rank, seed};
        auto [q, trace] = s_hoevd(stream, cfg, order);
        return py::make_tuple(q, trace_to_list(trace));
      },
      py::arg("pool"), py::arg("order"), py::arg("rank"), py::arg("iters"), py::arg("batch"),
      py::arg("c") = 1.0, py::arg("seed") = 0);
  m.def("estimate_core", &estimate_core, py::arg("q"), py::arg("fresh"), py::arg("order"));

  m.def("subspace_error", &subspace_error, py::arg("q1"), py::arg("q2"));
  m.def(
      "relative_gradient",
      [](const SymTensor& x, const StiefelBasis& q) { return relative_gradient(x, q); },
      py::arg("tensor"), py::arg("q"));
  m.def(
      "certify_criticality",
      [](const SymTensor& x, const StiefelBasis& q, double tol, std::uint64_t seed) {
        CriticalityReport rep = certify_criticality(x, projector(q), tol, seed);
        py::dict d;
        d["first_order"] = rep.first_order;
        d["grad_norm"] = rep.grad_norm;
        d["max_rayleigh"] = rep.max_rayleigh;
        d["tol"] = rep.tol;
        return d;
      },
      py::arg("tensor"), py::arg("q"), py::arg("tol") = 1e-8, py::arg("seed") = 0);

  m.def("roc_auc", &roc_auc, py::arg("scores"), py::arg("labels"));
}
