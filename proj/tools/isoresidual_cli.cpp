#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "isoresidual/acceptance.hpp"
#include "isoresidual/arrangement.hpp"
#include "isoresidual/fiber_enumeration.hpp"
#include "isoresidual/monodromy.hpp"
#include "isoresidual/permgroup.hpp"
#include "isoresidual/report.hpp"
#include "isoresidual/stratum_core.hpp"

namespace {

using namespace isoresidual;

enum Exit { kOk = 0, kVerifyFailed = 1, kBadInput = 2, kInfeasible = 3, kScaleLimit = 4 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Infeasible:
    case ErrorKind::UnrealizableSign: return kInfeasible;
    case ErrorKind::ScaleLimit: return kScaleLimit;
    case ErrorKind::PartitionMismatch: return kVerifyFailed;
    default: return kBadInput;
  }
}

struct Globals {
  bool json = false;
  unsigned threads = 1;
  std::uint64_t seed = kDefaultGroupSeed;
};

struct StratumArgs {
  int a = 0;
  std::string b;
  StratumSignature sig() const { return make_signature(a, parse_int_list(b)); }
};

struct SignArgs {
  std::string residues;
  std::string psi;
  bool given() const { return !residues.empty() || !psi.empty(); }
  // Residues take precedence over an explicit sign map.
  SignFunction get(int p) const {
    if (!residues.empty()) {
      auto r = parse_residues(residues);
      if (r.poles() != p) throw Error(ErrorKind::BadInput, "expected " + std::to_string(p) + " residues");
      return sign_function_of(r);
    }
    return parse_sign_function(psi, p);
  }
};

void add_stratum(CLI::App* cmd, StratumArgs& s) {
  cmd->add_option("--a", s.a, "order of the zero")->required();
  cmd->add_option("--b", s.b, "pole orders, comma separated")->required();
}

void add_sign(CLI::App* cmd, SignArgs& s, const std::string& what) {
  cmd->add_option("--residues", s.residues, "residues as rationals, comma separated (" + what + ")");
  cmd->add_option("--psi", s.psi, "sign function: key like \"+-+\" or pairs like \"1=+;2=-;1,2=+\" (" + what + ")");
}

// One rendering for both outputs: JSON when asked, otherwise "key: value" lines.
struct Report {
  std::string command;
  Json inputs = Json::object();
  Json outputs = Json::object();
  Json checks = Json::array();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void check(const std::string& name, bool pass, const std::string& detail = "") {
    Json c{{"name", name}, {"pass", pass}};
    if (!detail.empty()) c["detail"] = detail;
    checks.push_back(c);
  }

  void print(const Globals& g) const {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (g.json) {
      Json j{{"command", command}, {"inputs", inputs}, {"outputs", outputs}, {"checks", checks}, {"seed", g.seed}, {"seconds", secs}};
      std::cout << j.dump(2) << "\n";
      return;
    }
    for (const auto& [k, v] : outputs.items()) print_value(k, v);
    for (const auto& c : checks) {
      std::cout << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>();
      if (c.contains("detail")) std::cout << ": " << c["detail"].get<std::string>();
      std::cout << "\n";
    }
  }

  static void print_value(const std::string& key, const Json& v) {
    if (v.is_array() && !v.empty() && (v.front().is_string() || v.front().is_object())) {
      std::cout << key << ":\n";
      for (const auto& x : v) std::cout << "  " << (x.is_string() ? x.get<std::string>() : x.dump()) << "\n";
    } else if (v.is_object()) {
      std::cout << key << ":\n";
      for (const auto& [k, x] : v.items()) std::cout << "  " << k << ": " << (x.is_string() ? x.get<std::string>() : x.dump()) << "\n";
    } else if (v.is_string()) {
      std::cout << key << ": " << v.get<std::string>() << "\n";
    } else {
      std::cout << key << ": " << v.dump() << "\n";
    }
  }
};

std::string factorial_text(int n) { return std::to_string(n) + "!"; }

int cmd_degree(const Globals& g, const StratumArgs& s) {
  auto sig = s.sig();
  Report r{"degree"};
  r.inputs["stratum"] = to_json(sig);
  r.outputs["degree"] = generic_degree(sig);
  r.outputs["formula"] = "a!/(a+2-p)! = " + factorial_text(sig.a) + "/" + factorial_text(sig.a + 2 - sig.poles());
  r.print(g);
  return kOk;
}

int cmd_enumerate(const Globals& g, const StratumArgs& s, const SignArgs& sa) {
  auto sig = s.sig();
  if (!sa.given()) throw Error(ErrorKind::BadInput, "give --residues or --psi");
  auto psi = sa.get(sig.poles());
  auto f = enumerate_fiber(sig, psi);
  Report r{"enumerate"};
  r.inputs["stratum"] = to_json(sig);
  r.inputs["psi"] = psi.key();
  if (g.json) {
    r.outputs = to_json(f);
    r.outputs["count"] = f.size();
  } else {
    r.outputs["psi"] = describe(psi);
    r.outputs["count"] = f.size();
    r.outputs["trees"] = f.keys;
  }
  r.print(g);
  return kOk;
}

int cmd_count(const Globals& g, const StratumArgs& s, const SignArgs& sa, const std::string& hyperplane, bool deep) {
  auto sig = s.sig();
  const int p = sig.poles();
  Report r{"count"};
  r.inputs["stratum"] = to_json(sig);
  r.outputs["generic_degree"] = generic_degree(sig);
  std::optional<SignFunction> psi;
  if (sa.given()) {
    psi = sa.get(p);
    r.inputs["psi"] = psi->key();
    r.outputs["enumerated"] = enumerate_fiber(sig, *psi).size();
  }
  if (!hyperplane.empty()) {
    auto I = parse_subset(hyperplane, p);
    r.inputs["hyperplane"] = to_string(I);
    auto [c, d] = resonance_degree(sig, I);
    r.outputs["resonance_degree"] = Json{{"c", c}, {"d", d}};
    r.outputs["single_resonance_count"] = single_resonance_count(sig, I);
    SignFunction generic = psi && psi->nowhere_zero() ? *psi : standard_sign_function(p);
    auto em = edge_marked_count(sig, generic, I);
    r.outputs["edge_marked"] = Json{{"total", em.total}, {"class_count", em.class_count}, {"class_size", em.class_size}};
  }
  if (deep) {
    r.outputs["deep_resonance_count"] = deep_resonance_count(sig);
    r.outputs["deep_resonance_enumerated"] = enumerate_fiber(sig, chain_sign_function(p)).size();
  }
  r.print(g);
  return kOk;
}

int cmd_chambers(const Globals& g, int p) {
  auto graph = chamber_graph(p);
  Report r{"chambers"};
  r.inputs["poles"] = p;
  if (g.json) {
    r.outputs = to_json(*graph);
  } else {
    r.outputs["chambers"] = graph->size();
    r.outputs["walls"] = graph->edge_count();
    r.outputs["connected"] = graph->is_connected();
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < graph->size(); ++i) {
      std::string w;
      for (const auto& I : graph->walls(i)) w += to_string(I);
      lines.push_back(graph->chamber(i).psi.key() + "  residues " + to_string(graph->chamber(i).witness) + "  walls " + w);
    }
    r.outputs["nodes"] = lines;
  }
  r.print(g);
  return kOk;
}

std::optional<SignFunction> base_of(const SignArgs& sa, int p) {
  if (!sa.given()) return std::nullopt;
  auto psi = sa.get(p);
  if (!psi.nowhere_zero()) throw Error(ErrorKind::BadInput, "the base must be a chamber (no zero signs)");
  return psi;
}

void fill_group(Report& r, const IsoresidualCover& cover, const Globals& g, bool list_generators) {
  auto rep = monodromy_group(cover, g.seed);
  r.outputs["group"] = to_json(rep);
  r.check("transitive", rep.group.transitive);
  r.check("gallery independent", rep.gallery_defects == 0, std::to_string(rep.gallery_defects) + " defects");
  r.check("parity matches the case analysis", rep.all_even == monodromy_is_even(cover.signature()));
  if (list_generators) {
    std::vector<std::string> lines;
    for (const auto& bg : cover.based_generators()) {
      lines.push_back(to_string(bg.wall) + " at " + cover.graph().chamber(bg.chamber).psi.key() + ": " + to_cycle_string(bg.perm));
    }
    r.outputs["generators"] = lines;
    r.outputs["base_fiber"] = cover.base_fiber().keys;
  }
}

int cmd_monodromy(const Globals& g, const StratumArgs& s, const SignArgs& sa, const std::string& hyperplane, bool group,
                  bool list_generators) {
  auto sig = s.sig();
  const int p = sig.poles();
  Report r{group ? "group" : "monodromy"};
  r.inputs["stratum"] = to_json(sig);
  if (group || hyperplane.empty()) {
    IsoresidualCover cover(sig, base_of(sa, p), CoverOptions{g.threads, false});
    r.inputs["base"] = cover.base().psi.key();
    fill_group(r, cover, g, list_generators);
  } else {
    auto psi = sa.given() ? sa.get(p) : standard_sign_function(p);
    auto I = parse_subset(hyperplane, p);
    r.inputs["base"] = psi.key();
    r.inputs["hyperplane"] = to_string(I);
    auto fp = local_gamma(sig, make_chamber(psi), I);
    r.outputs["permutation"] = to_cycle_string(fp.perm);
    r.outputs["cycle_type"] = cycle_type(fp.perm);
    r.outputs["parity"] = parity(fp.perm) == Parity::Even ? "even" : "odd";
    r.outputs["fiber"] = fp.fiber->keys;
    auto predicted = predicted_meridian_cycle_type(sig, I);
    r.check("cycle type matches the closed form", cycle_type(fp.perm) == predicted);
  }
  r.print(g);
  return kOk;
}

int cmd_commutator(const Globals& g, const StratumArgs& s, const std::string& i, const std::string& j) {
  auto sig = s.sig();
  const int p = sig.poles();
  auto I = parse_subset(i, p), J = parse_subset(j, p);
  auto rep = commutator_structure(sig, I, J);
  Report r{"commutator"};
  r.inputs["stratum"] = to_json(sig);
  r.inputs["I"] = to_string(I);
  r.inputs["J"] = to_string(J);
  r.outputs = to_json(rep);
  r.outputs["chamber"] = chamber_graph(p)->chamber(rep.chamber).psi.key();
  if (rep.predicted) r.check("matches the predicted class", rep.matches_prediction());
  r.print(g);
  return kOk;
}

int cmd_classes(const Globals& g, const StratumArgs& s) {
  auto sig = s.sig();
  auto t = topological_class_partition(sig, CoverOptions{g.threads, false});
  Report r{"classes"};
  r.inputs["stratum"] = to_json(sig);
  r.inputs["base"] = topological_base(sig.poles()).key();
  r.outputs = to_json(t, sig.poles());
  r.check("k equal classes", true);
  r.print(g);
  return kOk;
}

int cmd_verify(const Globals& g, const std::string& suite, bool strict) {
  namespace acc = acceptance;
  acc::Options opt;
  opt.suite = suite == "full" ? acc::Suite::Full : acc::Suite::Quick;
  opt.threads = g.threads;
  opt.seed = g.seed;
  Report r{"verify"};
  r.inputs["suite"] = suite;
  auto checks = acc::run(opt);
  bool ok = true;
  for (const auto& c : checks) {
    if (!c.pass() && (strict || !c.known_failure())) ok = false;
    if (g.json) {
      Json parts = Json::array();
      for (const auto& sc : c.parts) parts.push_back(Json{{"name", sc.name}, {"pass", sc.pass}, {"known", sc.known}, {"detail", sc.detail}});
      r.checks.push_back(Json{{"name", std::to_string(c.id) + " " + c.title}, {"pass", c.pass()}, {"known_deviation", c.known_failure()},
                              {"seconds", c.seconds}, {"parts", parts}});
    } else {
      std::cout << acc::format_line(c) << "\n";
    }
  }
  r.outputs["all_pass"] = ok;
  if (g.json) r.print(g);
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isoresidual fibers, chambers and monodromy of genus-zero strata with one zero"};
  Globals g;
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", g.seed, "seed for the randomized group-order phase");
  app.require_subcommand(1);
  app.fallthrough();

  StratumArgs st;
  SignArgs sa;
  std::string hyperplane, i_text, j_text, suite = "quick";
  bool deep = false, group = false, generators = false, strict = false;
  int poles = 0;

  auto* degree = app.add_subcommand("degree", "generic degree of the isoresidual cover");
  add_stratum(degree, st);

  auto* enumerate = app.add_subcommand("enumerate", "decorated trees of one fiber");
  add_stratum(enumerate, st);
  add_sign(enumerate, sa, "the fiber");

  auto* count = app.add_subcommand("count", "closed-form counts, optionally against enumeration");
  add_stratum(count, st);
  add_sign(count, sa, "enumerate this fiber too");
  count->add_option("--hyperplane", hyperplane, "subset I for the single-wall and edge-marked counts");
  count->add_flag("--deep", deep, "count over the intersection of the singleton walls 2..p-1");

  auto* chambers = app.add_subcommand("chambers", "chambers of the real resonance arrangement");
  chambers->add_option("--poles", poles, "number of poles")->required();

  auto* monodromy = app.add_subcommand("monodromy", "meridian of one hyperplane, or the whole group");
  add_stratum(monodromy, st);
  add_sign(monodromy, sa, "base chamber");
  monodromy->add_option("--hyperplane", hyperplane, "subset I, e.g. 1,3");
  monodromy->add_flag("--group", group, "report the monodromy group");
  monodromy->add_flag("--generators", generators, "list every based generator");

  auto* grp = app.add_subcommand("group", "monodromy group of the cover");
  add_stratum(grp, st);
  add_sign(grp, sa, "base chamber");
  grp->add_flag("--generators", generators, "list every based generator");

  auto* comm = app.add_subcommand("commutator", "commutator of two meridians near their common face");
  add_stratum(comm, st);
  comm->add_option("--I", i_text, "first subset")->required();
  comm->add_option("--J", j_text, "second subset")->required();

  auto* classes = app.add_subcommand("classes", "topological class partition of the base fiber");
  add_stratum(classes, st);

  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--suite", suite, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_flag("--strict", strict, "count known deviations as failures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*degree) return cmd_degree(g, st);
    if (*enumerate) return cmd_enumerate(g, st, sa);
    if (*count) return cmd_count(g, st, sa, hyperplane, deep);
    if (*chambers) return cmd_chambers(g, poles);
    if (*monodromy) return cmd_monodromy(g, st, sa, hyperplane, group, generators);
    if (*grp) return cmd_monodromy(g, st, sa, "", true, generators);
    if (*comm) return cmd_commutator(g, st, i_text, j_text);
    if (*classes) return cmd_classes(g, st);
    if (*verify) return cmd_verify(g, suite, strict);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kVerifyFailed;
  }
  return kBadInput;
}
