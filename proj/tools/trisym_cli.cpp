// Command-line driver: solve the 1-dimensional ADHM equations, verify the
// structural invariants, measure moduli dimensions, build monads and
// splitting types. JSON in, JSON out.

#include "trisym/json_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

// exit codes: 0 ok, 1 invariant failure, 2 solver failure, 3 I/O,
// 64 usage, 65 parse
constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;

struct Options {
  long long r = 2, c = 1;
  std::uint64_t seed = 0;
  double tol_rank = 1e-9, tol_res = 1e-10;
  int samples = 64, quad = 512;
  std::string out = "-", in;
  bool pretty = false;
  int nlines = 1;
};

trisym::Tolerance tolerance(const Options& o) {
  trisym::Tolerance t;
  t.rank_rel = o.tol_rank;
  t.residual_abs = o.tol_res;
  return t;
}

trisym::Json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  trisym::Json j;
  in >> j;
  return j;
}

trisym::ADHMSection load_section(const Options& o) {
  const trisym::Json j = load_json(o.in);
  return trisym::section_from_json(j.contains("section") ? j.at("section") : j);
}

int cmd_solve(const Options& o) {
  const trisym::Tolerance tol = tolerance(o);
  const trisym::ADHMSection s = trisym::solve_adhm1d(o.r, o.c, o.seed, tol);
  trisym::Json out{{"r", o.r},
                   {"c", o.c},
                   {"seed", o.seed},
                   {"section", to_json(s)},
                   {"residual", trisym::tri_moment(s).norm()},
                   {"regularity", to_json(trisym::is_globally_regular(s, o.samples, o.seed, tol))}};
  trisym::write_atomic(o.out, out, o.pretty);
  return kExitOk;
}

int cmd_check(const Options& o) {
  const trisym::Tolerance tol = tolerance(o);
  const trisym::ADHMSection s = load_section(o);

  trisym::Json checks = trisym::Json::array();
  bool all_ok = true;
  auto add = [&](const std::string& name, bool ok, double residual, trisym::Json detail) {
    checks.push_back(trisym::Json{
        {"name", name}, {"pass", ok}, {"residual", residual}, {"detail", std::move(detail)}});
    all_ok = all_ok && ok;
  };

  const trisym::MomentValue m = trisym::tri_moment(s);
  add("adhm_equations", m.norm() <= 1e-8, m.norm(), trisym::Json{{"norm", m.norm()}});

  const auto reg = trisym::is_globally_regular(s, o.samples, o.seed, tol);
  add("global_regularity", reg.flag, reg.worst_margin, to_json(reg));

  if (m.norm() <= 1e-8) {
    const auto con = trisym::constancy_check(s, 50, o.seed);
    add("real_moment_constancy", con.ok, con.max_spread, to_json(con));
  } else {
    add("real_moment_constancy", false, m.norm(),
        trisym::Json{{"error", "section not in mu_C^-1(0)"}});
  }

  const trisym::MonadData monad = trisym::assemble_monad(s);
  const auto complex_rep = trisym::verify_complex(monad);
  double worst = 0;
  for (const auto& [k, v] : complex_rep.coeff_norms) worst = std::max(worst, v);
  add("monad_complex", complex_rep.ok, worst, to_json(complex_rep));
  const auto exact = trisym::fiberwise_exactness(monad, o.samples, o.seed, tol);
  add("monad_exactness", exact.ok, exact.min_alpha_sv, to_json(exact));

  const trisym::TriSpan span = trisym::tangent_trispan(s);
  const auto profile = trisym::rank_profile(span, o.samples, o.seed, tol);
  add("rank_trichotomy", profile.ok, 0.0, to_json(profile));
  try {
    const trisym::HAlgebra h = trisym::build_h_algebra(span, tol);
    add("mat2_algebra", true, 0.0, trisym::Json{{"dim", 4}});
    trisym::quadratic_form_q(span, tol, o.seed);
    add("degenerate_quadric", true, 0.0, trisym::Json{});
  } catch (const trisym::ComputeError& e) {
    add("mat2_algebra", false, 0.0, trisym::Json{{"error", e.what()}});
  }

  trisym::Json out{{"ok", all_ok}, {"checks", std::move(checks)}};
  trisym::write_atomic(o.out, out, o.pretty);
  return all_ok ? kExitOk : kExitInvariant;
}

int cmd_dim(const Options& o) {
  const trisym::Tolerance tol = tolerance(o);
  const trisym::ADHMSection s = trisym::solve_adhm1d(o.r, o.c, o.seed, tol);
  const trisym::ModuliReport rep = trisym::moduli_dimension(s, tol);
  trisym::Json out = to_json(rep);
  out["r"] = o.r;
  out["c"] = o.c;
  if (o.r == 2) out["unframed_dim"] = rep.moduli_dim - 3;
  trisym::write_atomic(o.out, out, o.pretty);
  return kExitOk;
}

int cmd_monad(const Options& o) {
  const trisym::Tolerance tol = tolerance(o);
  const trisym::ADHMSection s =
      o.in.empty() ? trisym::solve_adhm1d(o.r, o.c, o.seed, tol) : load_section(o);
  const trisym::MonadData m = trisym::build_monad(s, tol);
  trisym::Json out = to_json(m);
  out["complex_condition"] = to_json(trisym::verify_complex(m));
  out["exactness"] = to_json(trisym::fiberwise_exactness(m, o.samples, o.seed, tol));
  trisym::write_atomic(o.out, out, o.pretty);
  return kExitOk;
}

int cmd_splitting(const Options& o) {
  const trisym::Tolerance tol = tolerance(o);
  const trisym::MonadData m = [&] {
    if (!o.in.empty()) {
      const trisym::Json j = load_json(o.in);
      if (j.contains("alpha")) return trisym::monad_from_json(j);
      return trisym::build_monad(trisym::section_from_json(
                                     j.contains("section") ? j.at("section") : j),
                                 tol);
    }
    return trisym::build_monad(trisym::solve_adhm1d(o.r, o.c, o.seed, tol), tol);
  }();

  trisym::Json reports = trisym::Json::array();
  const trisym::LineParam framing = trisym::LineParam::framing(tol);
  reports.push_back(to_json(trisym::splitting_type(m, framing, 0, tol), framing));
  for (int k = 1; k < o.nlines; ++k) {
    const trisym::LineParam line = trisym::LineParam::random(o.seed + 977 * k, tol);
    reports.push_back(to_json(trisym::splitting_type(m, line, 0, tol), line));
  }
  trisym::write_atomic(o.out, trisym::Json{{"reports", std::move(reports)}}, o.pretty);
  return kExitOk;
}

int cmd_trispan(const Options& o) {
  const trisym::Tolerance tol = tolerance(o);
  const trisym::ADHMSection s =
      o.in.empty() ? trisym::solve_adhm1d(o.r, o.c, o.seed, tol) : load_section(o);
  const trisym::TriSpan span = trisym::tangent_trispan(s);
  const auto profile = trisym::rank_profile(span, o.samples, o.seed, tol);
  trisym::Json out{{"trispan", to_json(span)}, {"rank_profile", to_json(profile)}};
  try {
    trisym::build_h_algebra(span, tol);
    out["mat2_algebra_ok"] = true;
    const trisym::QForm q = trisym::quadratic_form_q(span, tol, o.seed);
    trisym::Json qrows = trisym::Json::array();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) qrows.push_back(trisym::to_json(q.matrix(i, j)));
    out["quadric"] = std::move(qrows);
  } catch (const trisym::ComputeError& e) {
    out["mat2_algebra_ok"] = false;
    out["error"] = e.what();
  }
  trisym::write_atomic(o.out, out, o.pretty);
  return profile.ok && out["mat2_algebra_ok"].get<bool>() ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trisymplectic ADHM toolkit"};
  app.require_subcommand(1);

  Options o;
  if (const char* threads = std::getenv("TRISYM_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  auto add_common = [&](CLI::App* cmd, bool needs_rc) {
    if (needs_rc) {
      cmd->add_option("--r", o.r, "rank (dim W)")->check(CLI::PositiveNumber);
      cmd->add_option("--c", o.c, "charge (dim V)")->check(CLI::PositiveNumber);
    }
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--tol-rank", o.tol_rank, "relative rank cutoff");
    cmd->add_option("--tol-res", o.tol_res, "absolute residual bound");
    cmd->add_option("--samples", o.samples, "sample count for probabilistic checks");
    cmd->add_option("--quad", o.quad, "quadrature points for sphere averages");
    cmd->add_option("--out", o.out, "output path ('-' for stdout)");
    cmd->add_flag("--pretty", o.pretty, "pretty-print JSON");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve the 1-dimensional ADHM equations");
  add_common(solve, true);
  CLI::App* check = app.add_subcommand("check", "run the invariant suite on a section file");
  add_common(check, false);
  check->add_option("--in", o.in, "input section JSON")->required();
  CLI::App* dim = app.add_subcommand("dim", "solve and measure the moduli dimension");
  add_common(dim, true);
  CLI::App* monad = app.add_subcommand("monad", "build the monad from a solved section");
  add_common(monad, true);
  monad->add_option("--in", o.in, "input section JSON (otherwise solve fresh)");
  CLI::App* splitting = app.add_subcommand("splitting", "splitting types on lines");
  add_common(splitting, true);
  splitting->add_option("--in", o.in, "input section or monad JSON");
  splitting->add_option("--nlines", o.nlines, "framing line plus n-1 random lines");
  CLI::App* trispan = app.add_subcommand("trispan", "tangent trisymplectic span report");
  add_common(trispan, true);
  trispan->add_option("--in", o.in, "input section JSON (otherwise solve fresh)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (check->parsed()) return cmd_check(o);
    if (dim->parsed()) return cmd_dim(o);
    if (monad->parsed()) return cmd_monad(o);
    if (splitting->parsed()) return cmd_splitting(o);
    if (trispan->parsed()) return cmd_trispan(o);
  } catch (const trisym::Json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const trisym::ComputeError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitUsage;
}
