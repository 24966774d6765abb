#include "trisym/json_io.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace trisym;

namespace {

Tolerance make_tol(double rank_rel, double residual_abs, int max_iter) {
  Tolerance t;
  t.rank_rel = rank_rel;
  t.residual_abs = residual_abs;
  t.max_iter = max_iter;
  return t;
}

ADHMSection section_from_parts(const CMatrix& a1, const CMatrix& b1, const CMatrix& i1,
                               const CMatrix& j1, const CMatrix& a2, const CMatrix& b2,
                               const CMatrix& i2, const CMatrix& j2) {
  const Index c = a1.rows(), r = i1.cols();
  return ADHMSection(ADHMData(r, c, a1, b1, i1, j1), ADHMData(r, c, a2, b2, i2, j2));
}

}  // namespace

PYBIND11_MODULE(_trisym, m) {
  m.doc() = "trisymplectic linear algebra and the 1-dimensional ADHM equations";

  py::register_exception<ComputeError>(m, "ComputeError");

  py::class_<Tolerance>(m, "Tolerance")
      .def(py::init(&make_tol), py::arg("rank_rel") = 1e-9,
           py::arg("residual_abs") = 1e-10, py::arg("max_iter") = 500)
      .def_readwrite("rank_rel", &Tolerance::rank_rel)
      .def_readwrite("residual_abs", &Tolerance::residual_abs)
      .def_readwrite("max_iter", &Tolerance::max_iter);

  py::class_<ADHMData>(m, "ADHMData")
      .def(py::init<Index, Index, CMatrix, CMatrix, CMatrix, CMatrix>(), py::arg("r"),
           py::arg("c"), py::arg("A"), py::arg("B"), py::arg("I"), py::arg("J"))
      .def_static("random", &ADHMData::random, py::arg("r"), py::arg("c"), py::arg("seed"))
      .def_readonly("r", &ADHMData::r)
      .def_readonly("c", &ADHMData::c)
      .def_readonly("A", &ADHMData::A)
      .def_readonly("B", &ADHMData::B)
      .def_readonly("I", &ADHMData::I)
      .def_readonly("J", &ADHMData::J);

  py::class_<ADHMSection>(m, "ADHMSection")
      .def(py::init<ADHMData, ADHMData>(), py::arg("X1"), py::arg("X2"))
      .def(py::init(&section_from_parts), py::arg("A1"), py::arg("B1"), py::arg("I1"),
           py::arg("J1"), py::arg("A2"), py::arg("B2"), py::arg("I2"), py::arg("J2"))
      .def_readonly("X1", &ADHMSection::X1)
      .def_readonly("X2", &ADHMSection::X2)
      .def("to_json", [](const ADHMSection& s) { return to_json(s).dump(); });

  m.def("mu_c", &mu_c, py::arg("x"));
  m.def("mu_r", &mu_r, py::arg("x"));
  m.def("is_stable", &is_stable, py::arg("x"), py::arg("tol") = Tolerance{});
  m.def("is_costable", &is_costable, py::arg("x"), py::arg("tol") = Tolerance{});
  m.def("is_regular", &is_regular, py::arg("x"), py::arg("tol") = Tolerance{});

  m.def("solve_adhm1d", &solve_adhm1d, py::arg("r"), py::arg("c"), py::arg("seed"),
        py::arg("tol") = Tolerance{});
  m.def(
      "tri_moment",
      [](const ADHMSection& s) {
        const MomentValue m_ = tri_moment(s);
        return py::make_tuple(m_.m1, m_.m2, m_.m3);
      },
      py::arg("s"));
  m.def(
      "tri_moment_norm", [](const ADHMSection& s) { return tri_moment(s).norm(); },
      py::arg("s"));
  m.def(
      "is_globally_regular",
      [](const ADHMSection& s, int n_samples, std::uint64_t seed, const Tolerance& tol) {
        return is_globally_regular(s, n_samples, seed, tol).flag;
      },
      py::arg("s"), py::arg("n_samples") = 64, py::arg("seed") = 0,
      py::arg("tol") = Tolerance{});
  m.def(
      "real_moment_at",
      [](const ADHMSection& s, Complex zeta, bool infinite) {
        return real_moment_at(s, infinite ? SpherePoint::infinity() : SpherePoint::at(zeta));
      },
      py::arg("s"), py::arg("zeta") = Complex(0, 0), py::arg("infinite") = false);
  m.def(
      "constancy_check",
      [](const ADHMSection& s, int n, std::uint64_t seed) {
        const ConstancyReport r = constancy_check(s, n, seed);
        return py::dict(py::arg("max_spread") = r.max_spread,
                        py::arg("mean_norm") = r.mean_norm, py::arg("ok") = r.ok);
      },
      py::arg("s"), py::arg("n_samples") = 50, py::arg("seed") = 0);
  m.def("real_moment_avg", &real_moment_avg, py::arg("s"), py::arg("n_quad") = 512,
        py::arg("seed") = 0);
  m.def(
      "moduli_dimension",
      [](const ADHMSection& s, const Tolerance& tol) {
        const ModuliReport r = moduli_dimension(s, tol);
        return py::dict(py::arg("ker_dim") = r.ker_dim, py::arg("orbit_dim") = r.orbit_dim,
                        py::arg("moduli_dim") = r.moduli_dim,
                        py::arg("jacobian_rank") = r.jacobian_rank,
                        py::arg("sv_gap") = r.sv_gap);
      },
      py::arg("s"), py::arg("tol") = Tolerance{});
  m.def(
      "rank2_unframed_dim",
      [](Index c, std::uint64_t seed, const Tolerance& tol) {
        return rank2_unframed_report(c, seed, tol).unframed_dim;
      },
      py::arg("c"), py::arg("seed") = 0, py::arg("tol") = Tolerance{});

  m.def(
      "tangent_rank_profile",
      [](const ADHMSection& s, int n_samples, std::uint64_t seed, const Tolerance& tol) {
        const RankProfileReport r = rank_profile(tangent_trispan(s), n_samples, seed, tol);
        std::map<Index, int> ranks(r.ranks.begin(), r.ranks.end());
        return py::dict(py::arg("ok") = r.ok, py::arg("half_dim") = r.half_dim,
                        py::arg("ranks") = ranks);
      },
      py::arg("s"), py::arg("n_samples") = 200, py::arg("seed") = 0,
      py::arg("tol") = Tolerance{});

  py::class_<MonadData>(m, "MonadData")
      .def_readonly("r", &MonadData::r)
      .def_readonly("c", &MonadData::c)
      .def("alpha_at", &MonadData::alpha_at)
      .def("beta_at", &MonadData::beta_at)
      .def("to_json", [](const MonadData& m_) { return to_json(m_).dump(); });

  m.def("build_monad", &build_monad, py::arg("s"), py::arg("tol") = Tolerance{});
  m.def(
      "verify_complex",
      [](const MonadData& m_) {
        const ComplexConditionReport r = verify_complex(m_);
        return py::dict(py::arg("ok") = r.ok, py::arg("coeff_norms") = r.coeff_norms);
      },
      py::arg("m"));
  m.def(
      "splitting_type",
      [](const MonadData& m_, std::optional<std::uint64_t> line_seed, int d_max,
         const Tolerance& tol) {
        const LineParam line = line_seed ? LineParam::random(*line_seed, tol)
                                         : LineParam::framing(tol);
        const SplittingReport r = splitting_type(m_, line, d_max, tol);
        return py::dict(py::arg("digits") = r.digits, py::arg("D_used") = r.d_used);
      },
      py::arg("m"), py::arg("line_seed") = py::none(), py::arg("d_max") = 0,
      py::arg("tol") = Tolerance{});
}
