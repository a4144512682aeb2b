// Command-line front end.  Everything goes through the shared-library C API.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abelgen.h"

namespace {

struct CommonFlags {
  double tail_bound = 1e-12;
  int radius = 0;
  int grid = 0;     // 0: suite defaults
  int torsion = -1; // -1: suite defaults
  int threads = 1;
  std::string report_path;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--tail-bound", f.tail_bound, "certified theta tail bound")
      ->envname("ABELGEN_TAIL_BOUND");
  app->add_option("--radius", f.radius, "fixed series radius (0 = adaptive)")
      ->envname("ABELGEN_RADIUS");
  app->add_option("--grid", f.grid, "sample grid edge (points = grid^(2g))")
      ->envname("ABELGEN_GRID");
  app->add_option("--torsion", f.torsion, "add torsion points up to this order")
      ->envname("ABELGEN_TORSION");
  app->add_option("--threads", f.threads, "worker threads for sample evaluation")
      ->envname("ABELGEN_THREADS");
  app->add_option("--report", f.report_path, "write the JSON report here")
      ->envname("ABELGEN_REPORT");
}

int exit_code_for(ag_status s) {
  switch (s) {
    case AG_OK: return 0;
    case AG_ERR_PARSE:
    case AG_ERR_REFERENCE:
    case AG_ERR_IO:
      return 2;
    default: return 3;
  }
}

int fail_with(ag_status s) {
  std::cerr << "error (" << ag_status_name(s) << "): " << ag_last_error() << "\n";
  return exit_code_for(s);
}

struct StringOut {
  char* ptr = nullptr;
  ~StringOut() { ag_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

int emit_report(const std::string& report, const std::string& path) {
  if (path.empty()) {
    std::cout << report;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return 2;
  }
  out << report;
  return 0;
}

ag_gg_options gg_options(const CommonFlags& f, int default_grid, int default_torsion) {
  ag_gg_options o{};
  o.grid = f.grid > 0 ? f.grid : default_grid;
  o.torsion = f.torsion >= 0 ? f.torsion : default_torsion;
  o.refine = 1;
  o.tail_bound = f.tail_bound;
  o.radius = f.radius;
  o.threads = f.threads;
  return o;
}

ag_run_options run_options(const CommonFlags& f) {
  ag_run_options o{};
  o.tail_bound = f.tail_bound;
  o.radius = f.radius;
  o.grid_override = f.grid;
  o.torsion_override = f.torsion;
  o.threads = f.threads;
  return o;
}

using ScenePtr = std::unique_ptr<ag_scene, decltype(&ag_scene_free)>;

ScenePtr load_scene(const std::string& path, ag_status& status) {
  ag_scene* raw = nullptr;
  status = ag_scene_load(path.c_str(), &raw);
  return ScenePtr(raw, &ag_scene_free);
}

// "r;c1,c2,...;ch2" -> flat vector (r, c1..., ch2)
bool parse_mukai_vector(const std::string& text, std::vector<int64_t>& out) {
  out.clear();
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) parts.push_back(item);
  if (parts.size() != 3) return false;
  auto push_ints = [&](const std::string& chunk) {
    std::stringstream cs(chunk);
    std::string tok;
    while (std::getline(cs, tok, ',')) {
      if (tok.empty()) return false;
      out.push_back(std::strtoll(tok.c_str(), nullptr, 10));
    }
    return true;
  };
  if (!push_ints(parts[0])) return false;
  size_t r_len = out.size();
  if (r_len != 1) return false;
  if (!push_ints(parts[1])) return false;
  if (!push_ints(parts[2])) return false;
  return out.size() >= 3;
}

// "exact:2", "lower:3", "upper:3", "interval:2:5"
std::string entry_json_from_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) return {};
  std::ostringstream out;
  if (parts[0] == "interval" && parts.size() == 3) {
    out << "{\"kind\":\"interval\",\"a\":" << parts[1] << ",\"b\":" << parts[2] << "}";
  } else if (parts.size() == 2) {
    out << "{\"kind\":\"" << parts[0] << "\",\"k\":" << parts[1] << "}";
  } else {
    return {};
  }
  return out.str();
}

// Gram matrix from a one-line file: "rho" then rho*rho integers, whitespace
// separated; '#' comments allowed.
bool load_gram(const std::string& path, int& rho, std::vector<int64_t>& gram) {
  std::ifstream in(path);
  if (!in.good()) return false;
  std::vector<int64_t> values;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::stringstream ss(line);
    int64_t v;
    while (ss >> v) values.push_back(v);
  }
  if (values.empty()) return false;
  rho = static_cast<int>(values[0]);
  if (rho < 1 || static_cast<size_t>(rho) * rho + 1 != values.size()) return false;
  gram.assign(values.begin() + 1, values.end());
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bundles on complex tori: construction, global-generation checks, "
               "Mukai and Fujita arithmetic"};
  app.require_subcommand(1);
  CommonFlags flags;

  // torus ------------------------------------------------------------------
  auto* cmd_torus = app.add_subcommand("torus", "inspect a torus from a scene document");
  std::string scene_path, obj_name;
  cmd_torus->add_option("--scene", scene_path, "scene document (.toml or .json)")->required();
  cmd_torus->add_option("--name", obj_name, "torus name")->required();
  std::vector<double> reduce_point;
  cmd_torus->add_option("--reduce", reduce_point,
                        "ambient point (2g doubles, re/im interleaved) to reduce");

  // bundle -----------------------------------------------------------------
  auto* cmd_bundle = app.add_subcommand("bundle", "inspect a line bundle from a scene document");
  std::string b_scene, b_name;
  cmd_bundle->add_option("--scene", b_scene, "scene document")->required();
  cmd_bundle->add_option("--name", b_name, "bundle name")->required();

  // sh ---------------------------------------------------------------------
  auto* cmd_sh = app.add_subcommand("sh", "inspect a semihomogeneous pushforward bundle");
  std::string s_scene, s_name;
  cmd_sh->add_option("--scene", s_scene, "scene document")->required();
  cmd_sh->add_option("--name", s_name, "pushforward name")->required();

  // gg ---------------------------------------------------------------------
  auto* cmd_gg = app.add_subcommand("gg", "global-generation checks");
  auto* cmd_gg_check = cmd_gg->add_subcommand("check", "evaluation-rank check over a sample set");
  std::string gg_file, gg_name, gg_push;
  int gg_power = 1;
  cmd_gg_check->add_option("--bundle", gg_file, "scene document with the bundle")->required();
  cmd_gg_check->add_option("--name", gg_name, "bundle name (default: the unique bundle)");
  cmd_gg_check->add_option("--pushforward", gg_push, "check this pushforward instead");
  cmd_gg_check->add_option("--power", gg_power, "tensor power m");
  add_common(cmd_gg_check, flags);

  auto* cmd_gg_lef = cmd_gg->add_subcommand("lefschetz", "basepoint-freeness of L, L^2, L^3");
  std::string lef_file, lef_name;
  cmd_gg_lef->add_option("--bundle", lef_file, "scene document with the bundle")->required();
  cmd_gg_lef->add_option("--name", lef_name, "bundle name (default: the unique bundle)");
  add_common(cmd_gg_lef, flags);

  // mukai ------------------------------------------------------------------
  auto* cmd_mukai = app.add_subcommand("mukai", "Mukai-lattice arithmetic");
  std::string gram_path, v_spec, w_spec;
  int64_t gate_m = 2;
  bool fixed_det = false;
  auto* mk_pair = cmd_mukai->add_subcommand("pair", "Mukai pairing <v,w>");
  auto* mk_dim = cmd_mukai->add_subcommand("dim", "moduli dimension and Albanese fibre");
  auto* mk_gate = cmd_mukai->add_subcommand("gate", "global-generation gate with checklist");
  for (auto* sc : {mk_pair, mk_dim, mk_gate}) {
    sc->add_option("--ns-gram", gram_path, "file: rho then rho*rho Gram entries")->required();
    sc->add_option("--v", v_spec, "Mukai vector \"r;c1,..;ch2\"")->required();
  }
  mk_pair->add_option("--w", w_spec, "second vector (default: v)");
  mk_gate->add_option("--m", gate_m, "tensor power m");
  mk_gate->add_flag("--fixed-det", fixed_det, "fixed-determinant moduli");

  // fujita -----------------------------------------------------------------
  auto* cmd_fujita = app.add_subcommand("fujita", "Fujita-number catalog and checks");
  auto* fj_show = cmd_fujita->add_subcommand("show", "print the catalog");
  auto* fj_check = cmd_fujita->add_subcommand("check", "closed-form family values");
  int64_t fj_n = 0, fj_d = 0, fj_blow = 0;
  bool fj_vg = false;
  std::string fj_ta;
  fj_check->add_option("--hypersurface-n", fj_n, "ambient projective dimension N");
  fj_check->add_option("--hypersurface-d", fj_d, "degree d");
  fj_check->add_flag("--very-general", fj_vg, "very general member (N = 3 case)");
  fj_check->add_option("--blowup", fj_blow, "blow-up of a point on an n-dim abelian variety");
  fj_check->add_option("--theorem-a", fj_ta, "fibre entry spec kind:k for the exponent rule");
  auto* fj_conj = cmd_fujita->add_subcommand("conjecture", "f_X <= f_pi * f_Y bound check");
  std::string fj_total, fj_fiber, fj_base;
  fj_conj->add_option("--total", fj_total, "entry spec kind:k or interval:a:b")->required();
  fj_conj->add_option("--fiber", fj_fiber, "entry spec")->required();
  fj_conj->add_option("--base", fj_base, "entry spec")->required();

  // selftest / run ----------------------------------------------------------
  auto* cmd_selftest = app.add_subcommand("selftest", "run the built-in verification corpus");
  bool list_only = false;
  cmd_selftest->add_flag("--list", list_only, "list suites without running");
  add_common(cmd_selftest, flags);

  auto* cmd_run = app.add_subcommand("run", "run the suites of a scene document");
  std::string run_scene_path;
  cmd_run->add_option("--scene", run_scene_path, "scene document")->required();
  add_common(cmd_run, flags);

  CLI11_PARSE(app, argc, argv);

  // ---- torus ----
  if (cmd_torus->parsed()) {
    ag_status st;
    ScenePtr scene = load_scene(scene_path, st);
    if (st != AG_OK) return fail_with(st);
    ag_torus* t = nullptr;
    st = ag_scene_get_torus(scene.get(), obj_name.c_str(), &t);
    if (st != AG_OK) return fail_with(st);
    int g = ag_torus_dim(t);
    std::cout << "{\"g\":" << g;
    if (!reduce_point.empty()) {
      if (static_cast<int>(reduce_point.size()) != 2 * g) {
        std::cerr << "error: --reduce needs " << 2 * g << " doubles\n";
        ag_torus_free(t);
        return 2;
      }
      std::vector<double> out(2 * g);
      st = ag_torus_reduce(t, reduce_point.data(), out.data());
      if (st != AG_OK) {
        ag_torus_free(t);
        return fail_with(st);
      }
      std::cout << ",\"reduced\":[";
      for (size_t i = 0; i < out.size(); ++i) std::cout << (i ? "," : "") << out[i];
      std::cout << "]";
    }
    std::cout << "}\n";
    ag_torus_free(t);
    return 0;
  }

  // ---- bundle ----
  if (cmd_bundle->parsed()) {
    ag_status st;
    ScenePtr scene = load_scene(b_scene, st);
    if (st != AG_OK) return fail_with(st);
    ag_bundle* l = nullptr;
    st = ag_scene_get_bundle(scene.get(), b_name.c_str(), &l);
    if (st != AG_OK) return fail_with(st);
    StringOut info;
    st = ag_bundle_info_json(l, &info.ptr);
    ag_bundle_free(l);
    if (st != AG_OK) return fail_with(st);
    std::cout << info.str();
    return 0;
  }

  // ---- sh ----
  if (cmd_sh->parsed()) {
    ag_status st;
    ScenePtr scene = load_scene(s_scene, st);
    if (st != AG_OK) return fail_with(st);
    ag_sh_bundle* e = nullptr;
    st = ag_scene_get_pushforward(scene.get(), s_name.c_str(), &e);
    if (st != AG_OK) return fail_with(st);
    int64_t h0 = 0;
    st = ag_sh_h0(e, &h0);
    if (st != AG_OK) {
      ag_sh_free(e);
      return fail_with(st);
    }
    std::cout << "{\"rank\":" << ag_sh_rank(e) << ",\"h0\":" << h0 << "}\n";
    StringOut chern;
    if (ag_sh_chern_chi_json(e, &chern.ptr) == AG_OK) std::cout << chern.str();
    ag_sh_free(e);
    return 0;
  }

  // ---- gg check / lefschetz ----
  auto pick_bundle_name = [](ag_scene* scene, std::string& name) -> ag_status {
    if (!name.empty()) return AG_OK;
    StringOut names;
    ag_status st = ag_scene_names_json(scene, &names.ptr);
    if (st != AG_OK) return st;
    // names JSON: {"tori":[...],"bundles":["x"],...}; pick the unique bundle.
    std::string text = names.str();
    auto pos = text.find("\"bundles\":[");
    if (pos == std::string::npos) return AG_ERR_REFERENCE;
    pos += std::strlen("\"bundles\":[");
    auto end = text.find(']', pos);
    std::string inner = text.substr(pos, end - pos);
    if (inner.empty() || inner.find(',') != std::string::npos) return AG_ERR_REFERENCE;
    name = inner.substr(1, inner.size() - 2);  // strip quotes
    return AG_OK;
  };

  if (cmd_gg_check->parsed()) {
    ag_status st;
    ScenePtr scene = load_scene(gg_file, st);
    if (st != AG_OK) return fail_with(st);
    ag_gg_options opt = gg_options(flags, 8, 0);
    StringOut report;
    if (!gg_push.empty()) {
      ag_sh_bundle* e = nullptr;
      st = ag_scene_get_pushforward(scene.get(), gg_push.c_str(), &e);
      if (st != AG_OK) return fail_with(st);
      st = ag_gg_check_bundle(e, gg_power, &opt, &report.ptr);
      ag_sh_free(e);
    } else {
      st = pick_bundle_name(scene.get(), gg_name);
      if (st != AG_OK) {
        std::cerr << "error: pass --name (scene does not have a unique bundle)\n";
        return 2;
      }
      ag_bundle* l = nullptr;
      st = ag_scene_get_bundle(scene.get(), gg_name.c_str(), &l);
      if (st != AG_OK) return fail_with(st);
      st = ag_gg_check_line(l, gg_power, &opt, &report.ptr);
      ag_bundle_free(l);
    }
    if (st != AG_OK) return fail_with(st);
    return emit_report(report.str(), flags.report_path);
  }

  if (cmd_gg_lef->parsed()) {
    ag_status st;
    ScenePtr scene = load_scene(lef_file, st);
    if (st != AG_OK) return fail_with(st);
    st = pick_bundle_name(scene.get(), lef_name);
    if (st != AG_OK) {
      std::cerr << "error: pass --name (scene does not have a unique bundle)\n";
      return 2;
    }
    ag_bundle* l = nullptr;
    st = ag_scene_get_bundle(scene.get(), lef_name.c_str(), &l);
    if (st != AG_OK) return fail_with(st);
    ag_gg_options opt = gg_options(flags, 20, 4);
    StringOut report;
    st = ag_lefschetz_suite(l, &opt, &report.ptr);
    ag_bundle_free(l);
    if (st != AG_OK) return fail_with(st);
    return emit_report(report.str(), flags.report_path);
  }

  // ---- mukai ----
  if (mk_pair->parsed() || mk_dim->parsed() || mk_gate->parsed()) {
    int rho = 0;
    std::vector<int64_t> gram;
    if (!load_gram(gram_path, rho, gram)) {
      std::cerr << "error: cannot read Gram file '" << gram_path << "'\n";
      return 2;
    }
    std::vector<int64_t> v;
    if (!parse_mukai_vector(v_spec, v) || static_cast<int>(v.size()) != rho + 2) {
      std::cerr << "error: --v must be \"r;c1,..;ch2\" with " << rho << " c1 entries\n";
      return 2;
    }
    if (mk_pair->parsed()) {
      std::vector<int64_t> w = v;
      if (!w_spec.empty() &&
          (!parse_mukai_vector(w_spec, w) || static_cast<int>(w.size()) != rho + 2)) {
        std::cerr << "error: malformed --w\n";
        return 2;
      }
      int64_t out = 0;
      ag_status st = ag_mukai_pair(rho, gram.data(), v.data(), w.data(), &out);
      if (st != AG_OK) return fail_with(st);
      std::cout << "{\"pair\":" << out << "}\n";
      return 0;
    }
    if (mk_dim->parsed()) {
      int64_t dim = 0;
      ag_status st = ag_mukai_moduli_dim(rho, gram.data(), v.data(), &dim);
      if (st != AG_OK) return fail_with(st);
      std::cout << "{\"dim\":" << dim;
      int64_t n = 0, fd = 0;
      st = ag_mukai_albanese_fiber(rho, gram.data(), v.data(), &n, &fd);
      if (st == AG_OK) {
        std::cout << ",\"kummer_index\":" << n << ",\"fiber_dim\":" << fd;
      } else {
        std::cout << ",\"albanese_fiber\":\"HYPOTHESIS_NOT_MET\"";
      }
      std::cout << "}\n";
      return 0;
    }
    StringOut checklist;
    ag_status st = ag_mukai_theorem_b_gate(rho, gram.data(), v.data(), gate_m, fixed_det ? 1 : 0,
                                           &checklist.ptr);
    if (st != AG_OK) return fail_with(st);
    return emit_report(checklist.str(), flags.report_path);
  }

  // ---- fujita ----
  if (fj_show->parsed()) {
    StringOut out;
    ag_status st = ag_fujita_catalog_json(&out.ptr);
    if (st != AG_OK) return fail_with(st);
    std::cout << out.str();
    return 0;
  }
  if (fj_check->parsed()) {
    if (fj_n > 0 && fj_d > 0) {
      StringOut out;
      ag_status st = ag_fujita_hypersurface(fj_n, fj_d, fj_vg ? 1 : 0, &out.ptr);
      if (st != AG_OK) return fail_with(st);
      std::cout << out.str();
      return 0;
    }
    if (fj_blow > 0) {
      StringOut out;
      ag_status st = ag_fujita_blowup(fj_blow, &out.ptr);
      if (st != AG_OK) return fail_with(st);
      std::cout << out.str();
      return 0;
    }
    if (!fj_ta.empty()) {
      std::string entry = entry_json_from_spec(fj_ta);
      if (entry.empty()) {
        std::cerr << "error: malformed --theorem-a spec\n";
        return 2;
      }
      int64_t min_m = 0;
      ag_status st = ag_fujita_theorem_a(entry.c_str(), &min_m);
      if (st != AG_OK) return fail_with(st);
      std::cout << "{\"min_m\":" << min_m << ",\"exponents\":\"{2m : m >= " << min_m << "}\"}\n";
      return 0;
    }
    std::cerr << "error: pass --hypersurface-n/--hypersurface-d, --blowup, or --theorem-a\n";
    return 2;
  }
  if (fj_conj->parsed()) {
    std::string tj = entry_json_from_spec(fj_total);
    std::string fj = entry_json_from_spec(fj_fiber);
    std::string bj = entry_json_from_spec(fj_base);
    if (tj.empty() || fj.empty() || bj.empty()) {
      std::cerr << "error: entry specs are kind:k or interval:a:b\n";
      return 2;
    }
    StringOut out;
    ag_status st = ag_fujita_conjecture_check(tj.c_str(), fj.c_str(), bj.c_str(), &out.ptr);
    if (st != AG_OK) return fail_with(st);
    std::cout << out.str();
    return 0;
  }

  // ---- selftest ----
  if (cmd_selftest->parsed()) {
    if (list_only) {
      StringOut names;
      ag_status st = ag_selftest_list(&names.ptr);
      if (st != AG_OK) return fail_with(st);
      std::cout << names.str();
      return 0;
    }
    ag_run_options opt = run_options(flags);
    StringOut report;
    int all_ok = 0;
    ag_status st = ag_selftest(&opt, &report.ptr, &all_ok);
    if (st != AG_OK) return fail_with(st);
    std::cerr << ag_last_run_summary();
    int rc = emit_report(report.str(), flags.report_path);
    if (rc != 0) return rc;
    return all_ok ? 0 : 1;
  }

  // ---- run ----
  if (cmd_run->parsed()) {
    ag_status st;
    ScenePtr scene = load_scene(run_scene_path, st);
    if (st != AG_OK) return fail_with(st);
    ag_run_options opt = run_options(flags);
    StringOut report;
    int all_ok = 0;
    st = ag_scene_run(scene.get(), &opt, &report.ptr, &all_ok);
    if (st != AG_OK) return fail_with(st);
    std::cerr << ag_last_run_summary();
    int rc = emit_report(report.str(), flags.report_path);
    if (rc != 0) return rc;
    return all_ok ? 0 : 1;
  }

  return 0;
}
