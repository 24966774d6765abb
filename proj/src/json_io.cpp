#include "trisym/json_io.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace trisym {

Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("bad complex entry");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) data.push_back(to_json(m(i, j)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const Json& j) {
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  const Json& data = j.at("data");
  if (rows < 0 || cols < 0 || static_cast<Index>(data.size()) != rows * cols)
    throw std::invalid_argument("bad matrix payload");
  CMatrix m(rows, cols);
  Index k = 0;
  for (Index i = 0; i < rows; ++i)
    for (Index jj = 0; jj < cols; ++jj) m(i, jj) = complex_from_json(data[k++]);
  return m;
}

Json to_json(const ADHMData& x) {
  return Json{{"r", x.r}, {"c", x.c}, {"A", to_json(x.A)}, {"B", to_json(x.B)},
              {"I", to_json(x.I)}, {"J", to_json(x.J)}};
}

ADHMData adhm_from_json(const Json& j) {
  return ADHMData(j.at("r").get<Index>(), j.at("c").get<Index>(),
                  matrix_from_json(j.at("A")), matrix_from_json(j.at("B")),
                  matrix_from_json(j.at("I")), matrix_from_json(j.at("J")));
}

Json to_json(const ADHMSection& s) {
  return Json{{"X1", to_json(s.X1)}, {"X2", to_json(s.X2)}};
}

ADHMSection section_from_json(const Json& j) {
  return ADHMSection(adhm_from_json(j.at("X1")), adhm_from_json(j.at("X2")));
}

Json to_json(const TriSpan& s) {
  return Json{{"dim", s.dim()},
              {"forms", Json::array({to_json(s.basis[0].matrix), to_json(s.basis[1].matrix),
                                     to_json(s.basis[2].matrix)})}};
}

TriSpan trispan_from_json(const Json& j, const Tolerance& tol) {
  const Json& forms = j.at("forms");
  if (forms.size() != 3) throw std::invalid_argument("trispan needs three forms");
  return TriSpan(TwoForm(matrix_from_json(forms[0])), TwoForm(matrix_from_json(forms[1])),
                 TwoForm(matrix_from_json(forms[2])), tol);
}

Json to_json(const MonadData& m) {
  auto coeffs = [](const std::array<CMatrix, 4>& c) {
    return Json{{"z", to_json(c[0])}, {"w", to_json(c[1])}, {"x", to_json(c[2])},
                {"y", to_json(c[3])}};
  };
  return Json{{"r", m.r}, {"c", m.c}, {"alpha", coeffs(m.alpha)}, {"beta", coeffs(m.beta)}};
}

MonadData monad_from_json(const Json& j) {
  auto coeffs = [](const Json& c) {
    return std::array<CMatrix, 4>{matrix_from_json(c.at("z")), matrix_from_json(c.at("w")),
                                  matrix_from_json(c.at("x")), matrix_from_json(c.at("y"))};
  };
  return MonadData(j.at("r").get<Index>(), j.at("c").get<Index>(), coeffs(j.at("alpha")),
                   coeffs(j.at("beta")));
}

Json to_json(const MomentValue& m) {
  return Json{{"m1", to_json(m.m1)}, {"m2", to_json(m.m2)}, {"m3", to_json(m.m3)},
              {"norm", m.norm()}};
}

Json to_json(const RankProfileReport& r) {
  Json ranks = Json::array();
  for (const auto& [rank, count] : r.ranks)
    ranks.push_back(Json{{"rank", rank}, {"count", count}});
  return Json{{"ok", r.ok}, {"half_dim", r.half_dim}, {"ranks", std::move(ranks)}};
}

Json to_json(const GlobalRegularityReport& r) {
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses)
    witnesses.push_back(Json::array({to_json(w[0]), to_json(w[1])}));
  return Json{{"flag", r.flag},
              {"worst_margin", r.worst_margin},
              {"exact_certificate", r.exact_certificate},
              {"witnesses", std::move(witnesses)}};
}

Json to_json(const ModuliReport& r) {
  return Json{{"ker_dim", r.ker_dim},       {"orbit_dim", r.orbit_dim},
              {"moduli_dim", r.moduli_dim}, {"jacobian_rank", r.jacobian_rank},
              {"sv_gap", r.sv_gap}};
}

Json to_json(const ConstancyReport& r) {
  return Json{{"max_spread", r.max_spread}, {"mean_norm", r.mean_norm}, {"ok", r.ok}};
}

Json to_json(const ComplexConditionReport& r) {
  Json norms;
  for (const auto& [k, v] : r.coeff_norms) norms[k] = v;
  return Json{{"ok", r.ok}, {"coeff_norms", std::move(norms)}};
}

Json to_json(const ExactnessReport& r) {
  return Json{{"ok", r.ok},
              {"min_alpha_sv", r.min_alpha_sv},
              {"min_beta_sv", r.min_beta_sv},
              {"n_points", r.n_points}};
}

Json to_json(const SplittingReport& r, const LineParam& line) {
  Json p0 = Json::array(), p1 = Json::array();
  for (int i = 0; i < 4; ++i) {
    p0.push_back(to_json(line.p0(i)));
    p1.push_back(to_json(line.p1(i)));
  }
  return Json{{"line", Json::array({std::move(p0), std::move(p1)})},
              {"digits", r.digits},
              {"D_used", r.d_used}};
}

void write_atomic(const std::string& path, const Json& j, bool pretty) {
  const std::string payload = pretty ? j.dump(2) + "\n" : j.dump() + "\n";
  if (path.empty() || path == "-") {
    std::cout << payload;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open " + tmp);
    out << payload;
    if (!out) throw std::ios_base::failure("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace trisym
