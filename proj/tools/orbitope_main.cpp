// orbitope: construct, analyze and verify equivariant psd lifts of symmetric
// polytopes from the command line. JSON reports on stdout; --pretty adds a
// plain table. Exit codes: 0 all verdicts pass, 1 verdict failed, 2 usage
// error, 3 numerical failure.
#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <json.hpp>

#include "orbitope/invariants.hpp"
#include "orbitope/json_io.hpp"
#include "orbitope/lifts.hpp"
#include "orbitope/relaxations.hpp"
#include "orbitope/sdpa_io.hpp"

using namespace orbitope;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "orbitope 0.1.0";

struct RunReport {
  std::string command;
  json inputs = json::object();
  json verdicts = json::array();
  json certificates = json::object();
  unsigned seed = kInvariantsSeed;
  int threads = 1;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void add_verdict(const std::string& name, bool pass, json extra = json::object()) {
    extra["name"] = name;
    extra["pass"] = pass;
    verdicts.push_back(std::move(extra));
  }

  bool all_pass() const {
    for (const auto& v : verdicts)
      if (!v["pass"].get<bool>()) return false;
    return true;
  }

  int emit(bool pretty) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["seed"] = seed;
    j["threads"] = threads;
    j["inputs"] = inputs;
    j["verdicts"] = verdicts;
    if (!certificates.empty()) j["certificates"] = certificates;
    auto elapsed = std::chrono::steady_clock::now() - start;
    j["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    if (pretty) {
      std::cout << j.dump(2) << "\n";
      std::cout << "\n  verdict                                   status\n";
      std::cout << "  ----------------------------------------  ------\n";
      for (const auto& v : verdicts) {
        std::string name = v["name"].get<std::string>();
        name.resize(40, ' ');
        std::cout << "  " << name << "  " << (v["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
      }
    } else {
      std::cout << j.dump() << "\n";
    }
    return all_pass() ? 0 : 1;
  }
};

RatVec parse_rational_list(const std::string& text) {
  RatVec out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto q = parse_rational(item);
    if (!q) throw CLI::ValidationError("cannot parse rational entry '" + item + "'");
    out.push_back(*q);
  }
  return out;
}

int default_threads() {
  if (const char* env = std::getenv("ORBITOPE_SOS_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

json perm_to_json(const SignedPermutation& g) {
  return json::parse(group_to_json(GroupSpec::custom(g.ambient_n(), {g})))["generators"][0];
}

PsdLiftSpec load_lift(const std::string& name) {
  if (name == "square") return square_lift_fixture();
  if (name == "hyperboloid") return hyperboloid_lift_fixture();
  if (!name.empty() && name[0] == '@') return lift_from_json(read_text_file(name.substr(1)));
  throw CLI::ValidationError("--lift must be square, hyperboloid, or @file.json");
}

LiftedRep load_rep(const std::string& name, const std::string& lift_name, const GroupSpec& spec) {
  if (name == "auto") {
    if (lift_name == "square") return square_lift_rep();
    if (lift_name == "hyperboloid") {
      if (spec.kind == GroupKind::SymmetricGroup && spec.ambient_n == 3)
        return hyperboloid_s3_block_rep();
      return hyperboloid_swap12_rep();
    }
    throw CLI::ValidationError("--rep auto only works for the bundled fixtures");
  }
  if (!name.empty() && name[0] == '@') return rep_from_json(read_text_file(name.substr(1)));
  throw CLI::ValidationError("--rep must be auto or @file.json");
}

int cmd_parity_separate(int n, int level, bool pretty) {
  RunReport rep;
  rep.command = "parity-separate";
  rep.inputs = {{"n", n}, {"level", level}};
  auto L = parity_separating_functional(n);
  auto v = verify_separation(L, level, n);
  rep.add_verdict("separates", v.separates,
                  {{"L_p(facet)", to_string(v.facet_value)},
                   {"moment_matrix_psd", v.psd},
                   {"rank_one_identity", v.rank_one_identity},
                   {"exact", true}});
  return rep.emit(pretty);
}

int cmd_theta_rank(const std::string& polytope, int n, int k, int threads, bool pretty) {
  RunReport rep;
  rep.command = "theta-rank";
  rep.threads = threads;
  rep.inputs = {{"polytope", polytope}, {"n", n}, {"k", k}};
  if (polytope == "parity") {
    if (n > 8) throw CLI::ValidationError("parity probes are capped at n <= 8");
    auto report = theta_rank_probe_parity(n, k, {}, threads);
    for (const auto& f : report.facets) {
      json extra;
      if (f.separating_value) extra["separating_value"] = *f.separating_value;
      rep.add_verdict(f.name, f.certified, extra);
    }
    rep.add_verdict("TH_" + std::to_string(k) + " exact", report.exact,
                    {{"facets", report.facets.size()}});
  } else if (polytope == "square") {
    auto report = theta_rank_probe_cube(2, k);
    for (const auto& f : report.facets) rep.add_verdict(f.name, f.certified);
    rep.add_verdict("TH_" + std::to_string(k) + " exact", report.exact);
  } else if (polytope == "cut") {
    if (n > 4) throw CLI::ValidationError("cut probes are capped at n <= 4");
    auto body = build_Qk_cut(n, k);
    // triangle facets  -(z_ij + z_ik + z_jk) <= 1  and the three sign variants
    bool all_tight = true;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        for (int l = j + 1; l <= n; ++l) {
          auto pair_pos = [&](int a, int b) {
            int t = 0;
            for (int p = 1; p <= n; ++p)
              for (int q = p + 1; q <= n; ++q) {
                if (p == a && q == b) return t;
                ++t;
              }
            return -1;
          };
          for (int variant = 0; variant < 4; ++variant) {
            RatVec ell(body.lift.ambient_dim, Rational(0));
            int s12 = (variant == 1) ? 1 : -1;
            int s13 = (variant == 2) ? 1 : -1;
            int s23 = (variant == 3) ? 1 : -1;
            ell[pair_pos(i, j)] = s12;
            ell[pair_pos(i, l)] = s13;
            ell[pair_pos(j, l)] = s23;
            // exact maximum over the cut vertices
            Rational exact(-100);
            for (const auto& x : SignVector::all(n)) {
              Rational v = Rational(s12 * x.coord(i) * x.coord(j)) +
                           Rational(s13 * x.coord(i) * x.coord(l)) +
                           Rational(s23 * x.coord(j) * x.coord(l));
              exact = std::max(exact, v);
            }
            auto sol = maximize_over_lift(body.lift, ell);
            if (sol.status != SdpStatus::Optimal) throw Error("cut probe: " + sol.message);
            bool tight = std::abs(sol.primal_obj - to_double(exact)) <= 1e-6;
            all_tight = all_tight && tight;
            rep.add_verdict("triangle{" + std::to_string(i) + "," + std::to_string(j) + "," +
                                std::to_string(l) + "}v" + std::to_string(variant),
                            tight,
                            {{"relaxation_value", sol.primal_obj},
                             {"polytope_value", to_double(exact)}});
          }
        }
    rep.add_verdict("Q_" + std::to_string(k) + " exact on triangle facets", all_tight);
  } else {
    throw CLI::ValidationError("--polytope must be parity, square, or cut");
  }
  return rep.emit(pretty);
}

int cmd_bounds(const std::string& polytope, int n, bool pretty) {
  RunReport rep;
  rep.command = "bounds";
  rep.inputs = {{"polytope", polytope}, {"n", n}};
  json table = json::object();
  for (int k = 1; 2 * k <= n; ++k)
    table["D_{" + std::to_string(n) + "," + std::to_string(k) + "}"] = d_parity_threshold(n, k);
  int kstar = (n + 3) / 4;  // ceil(n/4)
  long long headline = binomial(n, kstar);
  json extra = {{"D_table", table},
                {"headline_bound", headline},
                {"headline_k", kstar},
                {"headline", "binom(" + std::to_string(n) + "," + std::to_string(kstar) + ")"}};
  if (polytope == "parity" && n < 8)
    extra["caveat"] = "the parity lower bound is stated for n >= 8";
  rep.add_verdict("bounds computed", true, extra);
  return rep.emit(pretty);
}

int cmd_verify_lift(const std::string& lift_name, const std::string& group_name,
                    const std::string& rep_name, bool pretty) {
  RunReport rep;
  rep.command = "verify-lift";
  rep.inputs = {{"lift", lift_name}, {"group", group_name}, {"rep", rep_name}};
  PsdLiftSpec lift = load_lift(lift_name);
  GroupSpec spec = parse_group_spec(group_name);
  LiftedRep lrep = load_rep(rep_name, lift_name, spec);
  auto verdict = verify_equivariance(lift, lrep, spec);
  json extra = {{"detail", verdict.detail}};
  if (verdict.witness) extra["witness"] = perm_to_json(*verdict.witness);
  rep.add_verdict("equivariant", verdict.equivariant, extra);
  return rep.emit(pretty);
}

int cmd_factorize(const std::string& lift_name, const std::string& group_name,
                  const std::string& rep_name, const std::string& x0_text,
                  const std::string& ell_text, bool pretty) {
  RunReport rep;
  rep.command = "factorize";
  rep.inputs = {{"lift", lift_name}, {"group", group_name}, {"rep", rep_name},
                {"x0", x0_text}, {"ell", ell_text}};
  PsdLiftSpec lift = load_lift(lift_name);
  std::optional<GroupSpec> spec;
  if (group_name != "none") spec = parse_group_spec(group_name);
  std::optional<LiftedRep> lrep;
  if (rep_name != "none") {
    if (!spec) throw CLI::ValidationError("--rep requires --group");
    lrep = load_rep(rep_name, lift_name, *spec);
  }
  RatVec x0 = parse_rational_list(x0_text);
  RatVec ell = parse_rational_list(ell_text);
  Factorization f = factorize_lift(lift, spec, lrep, x0, ell);
  rep.add_verdict("slack identity", f.max_slack_violation <= 1e-6,
                  {{"max_violation", f.max_slack_violation}, {"ell_max", f.ell_max}});
  rep.add_verdict("psd factors", f.min_eig_A >= -1e-8 && f.min_eig_B >= -1e-8,
                  {{"min_eig_A", f.min_eig_A}, {"min_eig_B", f.min_eig_B}});
  json B = json::array();
  for (int i = 0; i < f.B.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < f.B.cols(); ++j) row.push_back(f.B(i, j));
    B.push_back(row);
  }
  rep.certificates["B"] = B;
  rep.certificates["orbit_size"] = f.points.size();
  return rep.emit(pretty);
}

int cmd_decompose(const std::string& domain_name, int n, const std::string& group_name,
                  const std::string& subspace_file, int k, unsigned seed, bool pretty) {
  RunReport rep;
  rep.command = "decompose";
  rep.seed = seed;
  Domain domain = (domain_name == "even") ? Domain::Even : Domain::Cube;
  GroupSpec spec = group_name.empty()
                       ? (domain == Domain::Even ? GroupSpec::g_parity(n) : GroupSpec::g_cube(n))
                       : parse_group_spec(group_name);
  rep.inputs = {{"domain", domain_name}, {"n", n}, {"group", spec.name()},
                {"subspace", subspace_file}, {"k", k}};

  if (subspace_file.empty()) {
    auto report = decompose(domain, n, spec, 4, seed);
    for (size_t g = 0; g < report.grade_dims.size(); ++g)
      rep.add_verdict("Pol_" + std::to_string(g) + " irreducible", report.grade_irreducible[g],
                      {{"dimension", report.grade_dims[g]}});
    rep.add_verdict("grades sum to the space", report.total_dimension ==
                        basis_dimension(domain, n),
                    {{"total", report.total_dimension}});
    rep.certificates["report"] = json::parse(report.to_json());
    return rep.emit(pretty);
  }

  json sub = json::parse(read_text_file(subspace_file));
  int max_degree = 0;
  DecompositionReport dr;
  dr.ambient_n = n;
  dr.domain = domain;
  dr.group = spec.name();
  {
    std::map<int, int> dims;
    if (domain == Domain::Even)
      for (const auto& f : canonical_basis_even(n)) dims[f.degree()]++;
    else
      for (const auto& f : canonical_basis_cube(n)) dims[f.degree()]++;
    for (const auto& [g, dcount] : dims) {
      dr.grade_dims.push_back(dcount);
      dr.total_dimension += dcount;
    }
  }
  auto record = [&](const std::string& name, bool pass, const std::string& detail) {
    rep.add_verdict(name, pass, {{"detail", detail}});
    dr.containment_verdicts.push_back({name, detail});
  };
  if (domain == Domain::Even) {
    EvenSubspace V{n, {}};
    for (const auto& t : sub.at("functions"))
      V.basis.push_back(even_from_text(t.get<std::string>(), n));
    for (const auto& f : V.basis) max_degree = std::max(max_degree, f.degree());
    auto inv = invariance_check(V, spec);
    record("invariant under " + spec.name(), inv.invariant,
           inv.invariant ? "yes" : "violating generator found");
    if (k > 0) {
      auto c = containment_bound_check(V, spec, k);
      record("containment check", c.status == ContainmentStatus::Contained, c.detail);
    }
  } else {
    CubeSubspace V{n, {}};
    for (const auto& t : sub.at("functions"))
      V.basis.push_back(cube_from_text(t.get<std::string>(), n));
    for (const auto& f : V.basis) max_degree = std::max(max_degree, f.degree());
    auto inv = invariance_check(V, spec);
    record("invariant under " + spec.name(), inv.invariant,
           inv.invariant ? "yes" : "violating generator found");
    if (k > 0) {
      auto c = containment_bound_check(V, spec, k);
      record("containment check", c.status == ContainmentStatus::Contained, c.detail);
    }
  }
  std::string contained = "Pol_{<=" + std::to_string(max_degree) + "}";
  rep.add_verdict("contained in " + contained, true, {{"contained_in", contained}});
  dr.containment_verdicts.push_back({"contained_in", contained});
  rep.certificates["report"] = json::parse(dr.to_json());
  return rep.emit(pretty);
}

int cmd_export_sdpa(const std::string& problem, const std::string& out, int n, int k,
                    bool pretty) {
  RunReport rep;
  rep.command = "export-sdpa";
  rep.inputs = {{"problem", problem}, {"out", out}, {"n", n}, {"k", k}};
  SdpProblem p;
  if (problem == "elliptope") {
    p = lift_maximization_problem(square_lift_fixture(), {make_rational(1), make_rational(0)});
  } else if (problem == "qcut") {
    auto body = build_Qk_cut(n, k);
    RatVec ell(body.lift.ambient_dim, make_rational(-1));
    p = lift_maximization_problem(body.lift, ell);
  } else if (!problem.empty() && problem[0] == '@') {
    p = read_sdpa_file(problem.substr(1));
  } else {
    throw CLI::ValidationError("--problem must be elliptope, qcut, or @file.dat-s");
  }
  std::string text = export_sdpa(p);
  write_text_file(out, text);
  bool roundtrip = export_sdpa(import_sdpa(text)) == text;
  rep.add_verdict("bit-exact round trip", roundtrip, {{"path", out}});
  auto sol = solve(p);
  rep.add_verdict("solved locally", sol.status == SdpStatus::Optimal,
                  {{"objective", sol.primal_obj},
                   {"note", "feed the file to an external SDPA-format solver to cross-check"}});
  return rep.emit(pretty);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) +
               " - equivariant psd lifts of symmetric polytopes"};
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "render a human-readable table next to the JSON report");

  int n = 0, k = 1, level = 1, threads = default_threads();
  unsigned seed = kInvariantsSeed;
  std::string polytope = "parity", lift_name = "square", group_name = "dihedral8";
  std::string rep_name = "auto", x0_text = "1,1", ell_text = "1,0";
  std::string domain_name = "even", subspace_file, problem = "elliptope", out = "problem.dat-s";

  auto* ps = app.add_subcommand("parity-separate",
                                "separating pseudo-expectation for the parity polytope");
  ps->add_option("--n", n, "ambient dimension (3..16)")->required()->check(CLI::Range(3, 16));
  ps->add_option("--level", level, "relaxation level k")->check(CLI::Range(1, 8));

  auto* tr = app.add_subcommand("theta-rank", "probe exactness of the level-k relaxation");
  tr->add_option("--polytope", polytope, "parity | square | cut");
  tr->add_option("--n", n, "ambient dimension")->required();
  tr->add_option("--k", k, "level");
  tr->add_option("--threads", threads, "parallel certificate searches");

  auto* bd = app.add_subcommand("bounds", "dimension thresholds and the headline lower bound");
  bd->add_option("--polytope", polytope, "parity | cut");
  bd->add_option("--n", n, "ambient dimension")->required()->check(CLI::Range(3, 30));

  auto* vl = app.add_subcommand("verify-lift", "check the two equivariance conditions");
  vl->add_option("--lift", lift_name, "square | hyperboloid | @file.json");
  vl->add_option("--group", group_name, "group spec, e.g. dihedral8, g_parity:4, s_3");
  vl->add_option("--rep", rep_name, "auto | @file.json");

  auto* fz = app.add_subcommand("factorize", "slack-identity factorization A(x), B(ell)");
  fz->add_option("--lift", lift_name, "square | hyperboloid | @file.json");
  fz->add_option("--group", group_name, "group spec or none");
  fz->add_option("--rep", rep_name, "auto | @file.json | none");
  fz->add_option("--x0", x0_text, "base vertex, comma-separated rationals");
  fz->add_option("--ell", ell_text, "linear form, comma-separated rationals");

  auto* dc = app.add_subcommand("decompose", "grade decomposition / subspace analysis");
  dc->add_option("--domain", domain_name, "cube | even");
  dc->add_option("--n", n, "ambient dimension")->required()->check(CLI::Range(1, 12));
  dc->add_option("--group", group_name, "group spec (defaults to the full symmetry group)");
  dc->add_option("--subspace", subspace_file, "JSON file {\"functions\": [text, ...]}");
  dc->add_option("--k", k, "containment threshold grade (0 = skip)");
  dc->add_option("--seed", seed, "seed for the random-element batches");

  auto* ex = app.add_subcommand("export-sdpa", "write a problem in SDPA sparse format");
  ex->add_option("--problem", problem, "elliptope | qcut | @file.dat-s");
  ex->add_option("--out", out, "output path");
  ex->add_option("--n", n, "qcut: number of nodes");
  ex->add_option("--k", k, "qcut: relaxation level");

  // decompose has no required group; reuse defaults per subcommand
  group_name = "";
  vl->parse_complete_callback([&] { if (group_name.empty()) group_name = "dihedral8"; });
  fz->parse_complete_callback([&] { if (group_name.empty()) group_name = "dihedral8"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ps->parsed()) return cmd_parity_separate(n, level, pretty);
    if (tr->parsed()) return cmd_theta_rank(polytope, n, k, threads, pretty);
    if (bd->parsed()) return cmd_bounds(polytope, n, pretty);
    if (vl->parsed()) return cmd_verify_lift(lift_name, group_name, rep_name, pretty);
    if (fz->parsed()) return cmd_factorize(lift_name, group_name, rep_name, x0_text, ell_text, pretty);
    if (dc->parsed()) {
      if (n == 0) throw CLI::ValidationError("--n required");
      if (dc->count("--k") == 0) k = 0;
      return cmd_decompose(domain_name, n, group_name, subspace_file, k, seed, pretty);
    }
    if (ex->parsed()) {
      if (ex->count("--n") == 0) n = 3;
      if (ex->count("--k") == 0) k = 1;
      return cmd_export_sdpa(problem, out, n, k, pretty);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::string what = e.what();
    bool numerical = what.find("solve") != std::string::npos ||
                     what.find("numerical") != std::string::npos ||
                     what.find("solver") != std::string::npos;
    return numerical ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
