// ncnorm: bipartite matrix norm calculator and property checker.
//
// Commands: psi, nc, cl, check, diverge, gen, nonmono.
// Exit codes: 0 success / checks passed, 1 check-style failure,
// 2 usage or input error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncnorm/ncnorm.hpp"

namespace {

using namespace ncnorm;

int cmd_psi(const std::string& input, double p, double q) {
  const BipartiteOp Y = read_matrix_file(input);
  const NormOrder ord = make_order(p, q);
  std::cout << format_real(psi(Y, ord)) << "\n";
  return 0;
}

int cmd_nc(const std::string& input, double p, double q, const OptimizerConfig& cfg) {
  const BipartiteOp Y = read_matrix_file(input);
  const NormOrder ord = make_order(p, q);
  const NormEstimate est = nc_norm(Y, ord, cfg);
  std::cout << "value " << format_real(est.value) << "\n"
            << "lower " << format_real(est.lower) << "\n"
            << "upper " << format_real(est.upper) << "\n"
            << "status " << to_string(est.status) << "\n";
  return 0;
}

int cmd_cl(const std::string& input, double p, double q, const OptimizerConfig& cfg) {
  const BipartiteOp Y = read_matrix_file(input);
  const NormOrder ord = make_order(p, q);
  const bool hermitian_path = is_hermitian(Y.mat);
  const CLResult res =
      hermitian_path ? cl_norm_hermitian(Y, ord, cfg) : cl_norm_general(Y, ord, cfg);
  std::cout << "value " << format_real(res.estimate.value) << "\n"
            << "upper " << format_real(res.estimate.upper) << "\n"
            << "status " << to_string(res.estimate.status) << "\n"
            << "hermitian-fast-path " << (hermitian_path ? "true" : "false") << "\n";
  return 0;
}

int cmd_check(const std::string& suite, int trials, std::uint64_t seed) {
  const CheckReport rep = run_suite(suite, trials, seed);
  std::cout << report_to_json(rep).dump(2) << "\n";
  return rep.passed ? 0 : 1;
}

int cmd_diverge(double p, double q, int n_min, int n_max, const std::string& out) {
  const NormOrder ord = make_order(p, q);
  std::vector<DivergenceRow> rows;
  try {
    rows = divergence_table(ord, n_min, n_max);
  } catch (const std::runtime_error& e) {
    std::cerr << "diverge: " << e.what() << "\n";
    return 1;
  }
  write_divergence_csv(out, rows);
  std::cout << format_real(rows.back().ratio) << "\n";
  for (size_t i = 1; i < rows.size(); ++i)
    if (rows[i].ratio < rows[i - 1].ratio - 1e-12) {
      std::cerr << "diverge: ratio column is not monotone at n = " << rows[i].n << "\n";
      return 1;
    }
  return 0;
}

int cmd_gen(const std::string& kind, int n, int m, std::uint64_t seed, const std::string& out) {
  write_matrix_file(out, random_instance(kind, n, m, seed));
  return 0;
}

int cmd_nonmono() {
  std::vector<double> p_grid, q_grid;
  for (double p = 1.1; p < 1.95; p += 0.1) p_grid.push_back(p);
  for (double q = 1.0; q <= 4.0 + 1e-9; q += 0.25) q_grid.push_back(q);
  const auto points = nonmono_scan(p_grid, q_grid, 1e-4);
  for (const auto& pt : points)
    std::cout << "p " << format_real(pt.p) << " q " << format_real(pt.q) << " deriv "
              << format_real(pt.deriv) << " deriv-printed " << format_real(pt.deriv_printed)
              << " deriv-m4x1 " << format_real(pt.deriv_m4) << "\n";
  std::cout << "negative-points " << points.size() << "\n";
  if (auto witness = cl_nonmono_search()) {
    std::cout << "cl-pair found p " << format_real(witness->p) << " q " << format_real(witness->q)
              << " t " << format_real(witness->t) << " cl-base " << format_real(witness->cl_base)
              << " cl-grown " << format_real(witness->cl_grown) << "\n";
  } else {
    std::cout << "cl-pair none-found-at-desk-scale\n";
  }
  return points.empty() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bipartite L^q(L^p) matrix norms: Psi, Carlen-Lieb, and Pisier-type NC"};
  app.require_subcommand(1);

  std::string input, out, suite, kind;
  double p = 2.0, q = 2.0;
  OptimizerConfig cfg;
  int trials = 100;
  std::uint64_t seed = 1;
  int n = 2, m = 2, n_min = 4, n_max = 24;

  auto* s_psi = app.add_subcommand("psi", "Psi_{p,q} of a PSD matrix file");
  s_psi->add_option("--input", input)->required();
  s_psi->add_option("--p", p)->required();
  s_psi->add_option("--q", q)->required();

  auto* s_nc = app.add_subcommand("nc", "NC norm (value/bracket) of a matrix file");
  s_nc->add_option("--input", input)->required();
  s_nc->add_option("--p", p)->required();
  s_nc->add_option("--q", q)->required();
  s_nc->add_option("--tol", cfg.tol);
  s_nc->add_option("--restarts", cfg.restarts);
  s_nc->add_option("--seed", cfg.seed);

  auto* s_cl = app.add_subcommand("cl", "Carlen-Lieb norm of a matrix file");
  s_cl->add_option("--input", input)->required();
  s_cl->add_option("--p", p)->required();
  s_cl->add_option("--q", q)->required();
  s_cl->add_option("--tol", cfg.tol);

  auto* s_check = app.add_subcommand("check", "run a property-check suite");
  s_check->add_option("--suite", suite)->required();
  s_check->add_option("--trials", trials);
  s_check->add_option("--seed", seed);

  auto* s_div = app.add_subcommand("diverge", "tabulate the divergence family to CSV");
  s_div->add_option("--p", p)->required();
  s_div->add_option("--q", q)->required();
  s_div->add_option("--n-min", n_min);
  s_div->add_option("--n-max", n_max);
  s_div->add_option("--out", out)->required();

  auto* s_gen = app.add_subcommand("gen", "generate a random instance file");
  s_gen->add_option("--kind", kind)->required();
  s_gen->add_option("--n", n)->required();
  s_gen->add_option("--m", m)->required();
  s_gen->add_option("--seed", seed);
  s_gen->add_option("--out", out)->required();

  app.add_subcommand("nonmono", "scan the Appendix B example for g'(0+) < 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (s_psi->parsed()) return cmd_psi(input, p, q);
    if (s_nc->parsed()) return cmd_nc(input, p, q, cfg);
    if (s_cl->parsed()) return cmd_cl(input, p, q, cfg);
    if (s_check->parsed()) return cmd_check(suite, trials, seed);
    if (s_div->parsed()) return cmd_diverge(p, q, n_min, n_max, out);
    if (s_gen->parsed()) return cmd_gen(kind, n, m, seed, out);
    return cmd_nonmono();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
