// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// pass. Criteria that exercise the command-line surface run the orbitope
// binary (path from argv[1] or ORBITOPE_CLI).
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <vector>

#include "orbitope/invariants.hpp"
#include "orbitope/json_io.hpp"
#include "orbitope/lifts.hpp"
#include "orbitope/relaxations.hpp"
#include "orbitope/sdpa_io.hpp"

using namespace orbitope;
using nlohmann::json;

namespace {

int failures = 0;
std::string cli_path;

void report(int criterion, const std::string& what, bool pass, const std::string& detail = "") {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++failures;
}

struct CliResult {
  int exit_code = -1;
  json output;
  bool ok = false;
};

CliResult run_cli(const std::string& args) {
  CliResult res;
  if (cli_path.empty()) return res;
  std::string tmp = "acceptance_cli_output.json";
  std::string cmd = cli_path + " " + args + " > " + tmp + " 2>/dev/null";
  int ret = std::system(cmd.c_str());
  res.exit_code = (ret >= 0) ? ((ret >> 8) & 0xff) : -1;
  std::ifstream in(tmp);
  if (in) {
    try {
      in >> res.output;
      res.ok = true;
    } catch (...) {
      res.ok = false;
    }
  }
  std::remove(tmp.c_str());
  return res;
}

const json* find_verdict(const json& report, const std::string& name) {
  if (!report.contains("verdicts")) return nullptr;
  for (const auto& v : report["verdicts"])
    if (v.value("name", "") == name) return &v;
  return nullptr;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               t0)
      .count();
}

// 1. Parity separation with exact rational arithmetic, n in 8..12, k < n/4.
void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  for (int n = 8; n <= 12 && pass; ++n)
    for (int k = 1; 4 * k < n && pass; ++k) {
      auto res = run_cli("parity-separate --n " + std::to_string(n) + " --level " +
                         std::to_string(k));
      if (!res.ok || res.exit_code != 0) {
        pass = false;
        detail = "cli failed at n=" + std::to_string(n) + " k=" + std::to_string(k);
        break;
      }
      const json* v = find_verdict(res.output, "separates");
      if (!v || !(*v)["pass"].get<bool>() || (*v)["L_p(facet)"].get<std::string>() != "-2" ||
          !(*v)["rank_one_identity"].get<bool>()) {
        pass = false;
        detail = "verdict wrong at n=" + std::to_string(n) + " k=" + std::to_string(k);
      }
    }
  double elapsed = ms_since(t0);
  if (elapsed > 30000) {
    pass = false;
    detail = "runtime " + std::to_string(elapsed) + " ms exceeds 30 s";
  }
  report(1, "parity separation, exact L_p(facet) = -2 and rank-one psd moment matrix", pass,
         detail.empty() ? std::to_string(static_cast<int>(elapsed)) + " ms" : detail);
}

// 2. Headline bounds from the D_{n,k} formula.
void criterion_2() {
  bool pass = true;
  std::string detail;
  struct Case {
    std::string polytope;
    int n;
    long long bound;
  };
  for (const Case& c : {Case{"parity", 8, 28}, Case{"parity", 12, 220}, Case{"cut", 8, 28}}) {
    auto res = run_cli("bounds --polytope " + c.polytope + " --n " + std::to_string(c.n));
    const json* v = res.ok ? find_verdict(res.output, "bounds computed") : nullptr;
    if (!v || (*v)["headline_bound"].get<long long>() != c.bound) {
      pass = false;
      detail = c.polytope + " n=" + std::to_string(c.n);
      break;
    }
    if (c.polytope == "parity" && c.n == 8 &&
        (*v)["D_table"]["D_{8,2}"].get<long long>() != 28) {
      pass = false;
      detail = "D_{8,2} wrong";
    }
  }
  if (d_parity_threshold(8, 2) != 28 || binomial(12, 3) != 220) pass = false;
  report(2, "headline bounds C(8,2) = 28, C(12,3) = 220, D_{8,2} = 28", pass, detail);
}

// 3. Irreducible decomposition of every grade for n <= 8, exact ranks.
void criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  for (int n = 2; n <= 8 && pass; ++n) {
    auto even = decompose(Domain::Even, n, GroupSpec::g_parity(n), 2);
    if (!even.all_irreducible || even.total_dimension != (1 << (n - 1))) {
      pass = false;
      detail = "EVEN_" + std::to_string(n);
      break;
    }
    for (int k = 0; k <= n / 2; ++k) {
      long long expect = (2 * k == n) ? binomial(n, k) / 2 : binomial(n, k);
      if (even.grade_dims[k] != expect) pass = false;
    }
    auto cube = decompose(Domain::Cube, n, GroupSpec::g_cube(n), 2);
    if (!cube.all_irreducible || cube.total_dimension != (1 << n)) {
      pass = false;
      detail = "C_" + std::to_string(n);
      break;
    }
    for (int k = 0; k <= n; ++k)
      if (cube.grade_dims[k] != binomial(n, k)) pass = false;
    // exact rank of the evaluation matrices equals the space dimension
    {
      auto basis = canonical_basis_even(n);
      auto pts = SignVector::all_even(n);
      RatMatrix M(static_cast<int>(basis.size()), static_cast<int>(pts.size()));
      for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < pts.size(); ++j) M.at(i, j) = evaluate(basis[i], pts[j]);
      if (rank(M) != (1 << (n - 1))) pass = false;
    }
    {
      auto basis = canonical_basis_cube(n);
      auto pts = SignVector::all(n);
      RatMatrix M(static_cast<int>(basis.size()), static_cast<int>(pts.size()));
      for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < pts.size(); ++j) M.at(i, j) = evaluate(basis[i], pts[j]);
      if (rank(M) != (1 << n)) pass = false;
    }
  }
  double elapsed = ms_since(t0);
  if (elapsed > 60000) {
    pass = false;
    detail = "runtime " + std::to_string(elapsed) + " ms exceeds 60 s";
  }
  report(3, "orbit-span irreducibility of every grade, n <= 8, exact ranks", pass,
         detail.empty() ? std::to_string(static_cast<int>(elapsed)) + " ms" : detail);
}

// 4. Square lift: equivariance, exact facet certificate, level-1 exactness.
void criterion_4() {
  bool pass = true;
  std::string detail;
  auto verdict = verify_equivariance(square_lift_fixture(), square_lift_rep(),
                                     GroupSpec::dihedral8());
  if (!verdict.equivariant || verdict.detail.find("8") == std::string::npos) {
    pass = false;
    detail = "equivariance";
  }
  // 1 - x1 = (1 - x1)^2 / 2 on {-1,1}^2, exactly
  CubeSosCertificate cert;
  cert.target = CubeFunction::constant(2, make_rational(1)) -
                CubeFunction::monomial(SubsetMask::from_indices({1}, 2));
  cert.subspace = CubeSubspace{2, {CubeFunction::constant(2, make_rational(1)),
                                   CubeFunction::monomial(SubsetMask::from_indices({1}, 2))}};
  cert.summands.push_back({make_rational(1, 2), cert.target});
  if (!sos_certificate_verify(cert, SignVector::all(2), 0.0).ok) {
    pass = false;
    detail = "facet certificate";
  }
  if (!theta_rank_probe_cube(2, 1).exact) {
    pass = false;
    detail = "theta rank probe";
  }
  auto sol = maximize_over_lift(square_lift_fixture(), {make_rational(1), make_rational(0)});
  if (sol.status != SdpStatus::Optimal || std::abs(sol.primal_obj - 1.0) > 1e-6) {
    pass = false;
    detail = "max x1";
  }
  report(4, "square lift: dihedral equivariance, exact facet certificate, TH_1 exact", pass,
         detail);
}

// 5. Hyperboloid negative control.
void criterion_5() {
  auto fail = verify_equivariance(hyperboloid_lift_fixture(), hyperboloid_s3_block_rep(),
                                  GroupSpec::symmetric(3));
  bool pass = !fail.equivariant && fail.witness.has_value();
  auto ok = verify_equivariance(hyperboloid_lift_fixture(), hyperboloid_swap12_rep(),
                                GroupSpec::custom(3, {SignedPermutation::transposition(3, 1, 2)}));
  pass = pass && ok.equivariant;
  report(5, "hyperboloid: S_3 check fails with witness, x1<->x2 subgroup passes", pass);
}

// 6. Q_1(CUT_3) strictness at the explicit moment point.
void criterion_6() {
  bool pass = true;
  std::string detail;
  auto body = build_Qk_cut(3, 1);
  Eigen::VectorXd half = Eigen::VectorXd::Constant(3, -0.5);
  if (!theta_body_membership(half, body).member) {
    pass = false;
    detail = "membership";
  }
  // exact moment matrix at y_0 = 1, y_i = 0, y_ij = -1/2: eigenvalues 1, 3/2, 3/2, 0
  PseudoExpectation E;
  E.ambient_n = 3;
  E.domain = Domain::Cube;
  E.degree_bound = 2;
  E.values[0] = 1;
  for (int i = 0; i < 3; ++i) E.values[1u << i] = 0;
  for (std::uint32_t m : {0b011u, 0b101u, 0b110u}) E.values[m] = make_rational(-1, 2);
  auto mm = moment_matrix(E, 1);
  auto eig_is = [&](const RatVec& v, const Rational& lambda) {
    RatVec mv = mm.M * v;
    for (size_t i = 0; i < v.size(); ++i)
      if (mv[i] != lambda * v[i]) return false;
    return true;
  };
  if (!eig_is({Rational(1), Rational(0), Rational(0), Rational(0)}, Rational(1))) pass = false;
  if (!eig_is({Rational(0), Rational(1), Rational(1), Rational(1)}, Rational(0))) pass = false;
  if (!eig_is({Rational(0), Rational(1), Rational(-1), Rational(0)}, make_rational(3, 2)))
    pass = false;
  if (!eig_is({Rational(0), Rational(1), Rational(0), Rational(-1)}, make_rational(3, 2)))
    pass = false;
  if (!psd_check_exact(mm.M).psd) pass = false;
  // triangle facet violated by exactly 1/2, and the solver reproduces 3/2
  Rational violation = make_rational(3, 2) - 1;
  if (violation != make_rational(1, 2)) pass = false;
  RatVec ell(3, make_rational(-1));
  auto sol = maximize_over_lift(body.lift, ell);
  if (sol.status != SdpStatus::Optimal || std::abs(sol.primal_obj - 1.5) > 1e-6) {
    pass = false;
    detail = "optimum";
  }
  report(6, "Q_1(CUT_3) strictness: y_ij = -1/2 feasible, eigenvalues {1,3/2,3/2,0}, optimum 3/2",
         pass, detail);
}

// 7. Factorization of the square lift over all four facets.
void criterion_7() {
  bool pass = true;
  std::string detail;
  PsdLiftSpec lift = square_lift_fixture();
  LiftedRep rep = square_lift_rep();
  GroupSpec d8 = GroupSpec::dihedral8();
  RatVec x0{make_rational(1), make_rational(1)};
  auto rho = materialize_exact(rep);
  std::vector<RatVec> facets = {{make_rational(1), make_rational(0)},
                                {make_rational(-1), make_rational(0)},
                                {make_rational(0), make_rational(1)},
                                {make_rational(0), make_rational(-1)}};
  for (const auto& ell : facets) {
    Factorization f = factorize_lift(lift, d8, rep, x0, ell);
    if (f.max_slack_violation > 1e-6 || f.min_eig_A < -1e-8 || f.min_eig_B < -1e-8) {
      pass = false;
      detail = "slack or psd bound";
      break;
    }
    for (const auto& [g, R] : rho) {
      Eigen::MatrixXd Rd = R.to_double();
      for (size_t i = 0; i < f.points.size(); ++i) {
        Eigen::VectorXd gx = g.act(Eigen::VectorXd(f.points[i]));
        size_t j = 0;
        while (j < f.points.size() && (f.points[j] - gx).norm() > 1e-9) ++j;
        if (j == f.points.size() || (f.A[j] - Rd * f.A[i] * Rd.transpose()).norm() > 1e-7) {
          pass = false;
          detail = "A-map equivariance";
        }
      }
    }
  }
  report(7, "square-lift factorization: slack identity within 1e-6, psd within 1e-8, equivariant",
         pass, detail);
}

// 8. Structure-theorem pipeline on the level-1 theta body of EVEN_4.
void criterion_8() {
  bool pass = true;
  std::string detail;
  auto body = theta_body_level(Domain::Even, 4, 1, GroupSpec::g_parity(4));
  if (!body.rep) {
    report(8, "structure-theorem pipeline on TH_1(EVEN_4)", false, "no rep");
    return;
  }
  RatVec x0(4, make_rational(1));
  auto extracted = extract_invariant_subspace_regular(*body.rep, GroupSpec::n_parity(4), x0);
  int alpha = alpha_bound(GroupSpec::n_parity(4), body.lift.d);
  if (extracted.domain != Domain::Even || extracted.dimension() > alpha * body.lift.d) {
    pass = false;
    detail = "dimension bound";
  }
  if (!invariance_check(extracted.even, GroupSpec::g_parity(4)).invariant) {
    pass = false;
    detail = "invariance";
  }
  // certify every facet of PAR_4 over the extracted subspace
  auto X = SignVector::all_even(4);
  std::vector<EvenFunction> targets;
  for (std::uint32_t a = 0; a < 16; ++a) {
    if ((__builtin_popcount(a) & 1) == 0) continue;
    EvenFunction f = EvenFunction::constant(4, make_rational(2));
    for (int i = 1; i <= 4; ++i) {
      auto e = EvenFunction::basis_element(SubsetMask::from_indices({i}, 4));
      f = ((a >> (i - 1)) & 1u) ? f + e : f - e;
    }
    targets.push_back(std::move(f));
  }
  for (int i = 1; i <= 4; ++i) {
    auto e = EvenFunction::basis_element(SubsetMask::from_indices({i}, 4));
    targets.push_back(EvenFunction::constant(4, make_rational(1)) - e);
    targets.push_back(EvenFunction::constant(4, make_rational(1)) + e);
  }
  for (const auto& target : targets) {
    auto out = sos_certificate_search(target, extracted.even, X);
    if (out.status != SosSearchOutcome::Status::Found ||
        !sos_certificate_verify(*out.even_cert, X, 1e-6).ok) {
      pass = false;
      detail = "facet certificate";
      break;
    }
  }
  report(8, "TH_1(EVEN_4) extraction: dim <= alpha*d, invariant, certifies all PAR_4 facets",
         pass, detail);
}

// 9. Orthogonalization of 50 seeded conjugated representations.
void criterion_9() {
  bool pass = true;
  std::string detail;
  std::mt19937_64 rng(20240917);
  std::normal_distribution<double> gauss;
  std::vector<MatrixRepresentation> base_reps;
  auto defining = [](const GroupSpec& spec) {
    MatrixRepresentation rep;
    rep.spec = spec;
    rep.dimension = spec.ambient_n;
    for (const auto& g : spec.generators) rep.generator_images.push_back(g.matrix_double());
    return rep;
  };
  base_reps.push_back(defining(GroupSpec::dihedral8()));      // order 8
  base_reps.push_back(defining(GroupSpec::symmetric(4)));     // order 24
  base_reps.push_back(defining(GroupSpec::g_parity(3)));      // order 24
  base_reps.push_back(defining(GroupSpec::g_cube(3)));        // order 48
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& base = base_reps[trial % base_reps.size()];
    int d = base.dimension;
    Eigen::MatrixXd S(d, d);
    do {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) S(i, j) = gauss(rng);
    } while (std::abs(S.determinant()) < 0.05);
    MatrixRepresentation conj = base;
    Eigen::MatrixXd Sinv = S.inverse();
    for (auto& m : conj.generator_images) m = S * m * Sinv;
    auto res = orthogonalize_representation(conj);
    worst = std::max(worst, res.orthogonality_defect);
    if (res.orthogonality_defect > 1e-10) {
      pass = false;
      detail = "defect " + std::to_string(res.orthogonality_defect) + " at trial " +
               std::to_string(trial);
      break;
    }
  }
  report(9, "orthogonalization: 50 seeded conjugations, defect <= 1e-10 for every element", pass,
         detail.empty() ? "worst defect " + std::to_string(worst) : detail);
}

// 10. SDPA interchange: bit-exact round trips and matching objectives.
void criterion_10() {
  bool pass = true;
  std::string detail;
  SdpProblem elliptope =
      lift_maximization_problem(square_lift_fixture(), {make_rational(1), make_rational(0)});
  auto qbody = build_Qk_cut(3, 1);
  SdpProblem qcut =
      lift_maximization_problem(qbody.lift, RatVec(3, make_rational(-1)));
  struct Case {
    const char* name;
    SdpProblem* p;
    double expect;
    const char* file;
  };
  Case cases[] = {{"elliptope", &elliptope, 1.0, "acceptance_elliptope.dat-s"},
                  {"qcut", &qcut, 1.5, "acceptance_q1cut3.dat-s"}};
  for (auto& c : cases) {
    std::string text = export_sdpa(*c.p);
    if (export_sdpa(import_sdpa(text)) != text) {
      pass = false;
      detail = std::string(c.name) + " round trip";
      break;
    }
    auto sol = solve(import_sdpa(text));
    if (sol.status != SdpStatus::Optimal || std::abs(sol.primal_obj - c.expect) > 1e-6) {
      pass = false;
      detail = std::string(c.name) + " objective";
      break;
    }
    std::ofstream(c.file) << text;
  }
  report(10, "SDPA export: bit-exact round trip, objectives 1 and 3/2 (files kept for the "
             "documented external cross-check)",
         pass, detail);
}

// 11. Function-algebra oracle: multiplicativity and reduction, exact.
void criterion_11() {
  bool pass = true;
  std::string detail;
  std::mt19937_64 rng(424243);
  auto random_fn = [&](int n) {
    CubeFunction f(n);
    int terms = 1 + static_cast<int>(rng() % 6);
    for (int t = 0; t < terms; ++t) {
      std::uint32_t mask = static_cast<std::uint32_t>(rng()) & ((1u << n) - 1);
      int num = static_cast<int>(rng() % 11) - 5;
      int den = 1 + static_cast<int>(rng() % 4);
      f = f + CubeFunction::monomial(SubsetMask(mask, n), make_rational(num, den));
    }
    return f;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 2 + static_cast<int>(rng() % 9);  // 2..10
    CubeFunction f = random_fn(n), g = random_fn(n);
    SignVector x{static_cast<std::uint32_t>(rng()) & ((1u << n) - 1), n};
    if (evaluate(multiply(f, g), x) != evaluate(f, x) * evaluate(g, x)) {
      pass = false;
      detail = "multiplicativity at trial " + std::to_string(trial);
      break;
    }
  }
  for (int n = 2; n <= 10 && pass; ++n)
    for (int rep = 0; rep < 5 && pass; ++rep) {
      CubeFunction f = random_fn(n);
      EvenFunction e = reduce_to_even(f);
      for (const auto& x : SignVector::all_even(n))
        if (evaluate(f, x) != evaluate(e, x)) {
          pass = false;
          detail = "reduce_to_even at n=" + std::to_string(n);
          break;
        }
    }
  report(11, "function-algebra oracle: 1000 exact product triples, exhaustive even reduction",
         pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_path = argv[1];
  else if (const char* env = std::getenv("ORBITOPE_CLI")) cli_path = env;
  if (cli_path.empty()) {
    std::cerr << "note: no CLI path supplied; pass it as argv[1] or ORBITOPE_CLI\n";
    return 77;
  }
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (failures == 0)
    std::printf("acceptance: all 11 criteria passed\n");
  else
    std::printf("acceptance: %d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
