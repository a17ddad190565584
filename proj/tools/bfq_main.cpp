// Command line front end; talks to the core exclusively through the C API.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bfq/bfq.h"

namespace {

struct ComplexHandle {
  bfq_complex* ptr = nullptr;
  ~ComplexHandle() { bfq_complex_free(ptr); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

[[noreturn]] void die_api(bfq_status st) {
  std::cerr << "error (" << static_cast<int>(st) << "): " << bfq_last_error() << "\n";
  std::exit(2);
}

ComplexHandle load_complex(const std::string& path, nlohmann::ordered_json& inputs) {
  std::string text = read_file(path);
  inputs[path] = fnv1a_hex(text);
  ComplexHandle h;
  bfq_status st = bfq_complex_from_json(text.c_str(), &h.ptr);
  if (st != BFQ_OK) die_api(st);
  return h;
}

int finish(char* report, const std::vector<std::string>& argv_echo,
           const nlohmann::ordered_json& inputs, bool pretty, double timing_ms, bool with_timing) {
  std::string body = report ? report : "{}";
  bfq_string_free(report);
  auto j = nlohmann::ordered_json::parse(body);
  j["command"] = argv_echo;
  j["inputs"] = inputs;
  if (with_timing) j["timing_ms"] = timing_ms;
  bool pass = j.value("pass", true);
  if (pretty) {
    for (auto& c : j.value("checks", nlohmann::ordered_json::array()))
      std::cout << (c.value("status", "") == "pass" ? "[PASS] " : "[FAIL] ") << c.value("name", "")
                << (c.contains("detail") ? "  (" + c["detail"].get<std::string>() + ")" : "") << "\n";
    if (j.contains("values"))
      for (auto& [k, v] : j["values"].items()) std::cout << k << ": " << v.get<std::string>() << "\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return pass ? 0 : 1;
}

int thread_cap() {
  const char* env = std::getenv("BFQ_THREADS");
  if (!env) return 0;
  int n = std::atoi(env);
  return n > 0 ? n : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact cellular BF theory and Poisson sigma model toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  bool pretty = false, with_timing = false;
  app.add_flag("--pretty", pretty, "human readable output");
  app.add_flag("--timing", with_timing, "include wall time in the report (breaks byte-identity)");

  std::vector<std::string> argv_echo(argv, argv + argc);

  std::string complex_path, rel = "out";
  std::string left_path, right_path, interface_path;
  bool compare_direct = false;
  std::string keep_csv, coarsen_csv;
  int gj = 0, gk = 0, gl = 0, max_valence = 3, max_leaves = 4;
  std::string emit = "json";
  std::string graph_path, pi_path;
  std::uint64_t samples = 4000000, seed = 20240811;
  double tolerance = -1.0;
  long long order = 2;
  bool check_assoc = false;

  auto* cohomology = app.add_subcommand("cohomology", "Betti numbers and representatives");
  cohomology->add_option("complex", complex_path)->required();
  cohomology->add_option("--rel", rel, "out|in|none");

  auto* torsion = app.add_subcommand("torsion", "Reidemeister torsion magnitude");
  torsion->add_option("complex", complex_path)->required();
  torsion->add_option("--rel", rel, "out|in|none");

  auto* classical = app.add_subcommand("classical-check", "classical structure identities");
  classical->add_option("complex", complex_path)->required();

  auto* partition = app.add_subcommand("partition", "partition function state");
  partition->add_option("complex", complex_path)->required();

  auto* qme = app.add_subcommand("qme", "quantum master equation check");
  qme->add_option("complex", complex_path)->required();

  auto* glue = app.add_subcommand("glue", "compose two cobordisms across an interface");
  glue->add_option("left", left_path)->required();
  glue->add_option("right", right_path)->required();
  glue->add_option("--interface", interface_path)->required();
  glue->add_flag("--compare-direct", compare_direct);

  auto* realize = app.add_subcommand("realize", "partition function at a residual-field realization");
  realize->add_option("complex", complex_path)->required();
  realize->add_option("--keep", keep_csv, "comma separated cells kept as residual slots")->required();
  realize->add_option("--coarsen-to", coarsen_csv, "pushforward target slots");

  auto* psm = app.add_subcommand("psm", "Poisson sigma model tools");
  psm->require_subcommand(1);
  auto* graphs = psm->add_subcommand("graphs", "enumerate admissible graphs");
  graphs->add_option("--in", gj)->required();
  graphs->add_option("--out", gk)->required();
  graphs->add_option("--internal", gl)->required();
  graphs->add_option("--max-valence", max_valence);
  graphs->add_option("--leaves", max_leaves);
  graphs->add_option("--emit", emit, "json|tex");
  auto* weight = psm->add_subcommand("weight", "angle-form weight by seeded quadrature");
  weight->add_option("graph", graph_path)->required();
  weight->add_option("--samples", samples);
  weight->add_option("--seed", seed);
  weight->add_option("--tolerance", tolerance, "required statistical error (<0: report only)");
  auto* star = psm->add_subcommand("star", "star product checks");
  star->add_option("--pi", pi_path)->required();
  star->add_option("--order", order);
  star->add_flag("--check-assoc", check_assoc);

  auto* selftest = app.add_subcommand("selftest", "seeded property test battery");
  selftest->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  char* report = nullptr;
  bfq_status st = BFQ_OK;
  auto t0 = std::chrono::steady_clock::now();

  try {
    if (*cohomology || *torsion || *classical || *partition || *qme) {
      ComplexHandle x = load_complex(complex_path, inputs);
      if (*cohomology) st = bfq_cohomology(x.ptr, rel == "none" ? "none" : rel.c_str(), &report);
      else if (*torsion) st = bfq_torsion(x.ptr, rel.c_str(), &report);
      else if (*classical) st = bfq_classical_check(x.ptr, &report);
      else if (*partition) st = bfq_partition(x.ptr, &report);
      else st = bfq_qme(x.ptr, &report);
    } else if (*glue) {
      ComplexHandle a = load_complex(left_path, inputs);
      ComplexHandle b = load_complex(right_path, inputs);
      std::string itext = read_file(interface_path);
      inputs[interface_path] = fnv1a_hex(itext);
      st = bfq_glue(a.ptr, b.ptr, itext.c_str(), compare_direct ? 1 : 0, &report);
    } else if (*realize) {
      ComplexHandle x = load_complex(complex_path, inputs);
      nlohmann::json request;
      request["keep"] = nlohmann::json::array();
      std::stringstream ks(keep_csv);
      std::string item;
      while (std::getline(ks, item, ','))
        if (!item.empty()) request["keep"].push_back(item);
      if (realize->count("--coarsen-to")) {
        request["coarsen_to"] = nlohmann::json::array();
        std::stringstream cs(coarsen_csv);
        while (std::getline(cs, item, ','))
          if (!item.empty()) request["coarsen_to"].push_back(item);
      }
      st = bfq_realize(x.ptr, request.dump().c_str(), &report);
    } else if (*graphs) {
      st = bfq_psm_graphs(gj, gk, gl, max_valence, max_leaves, emit.c_str(), &report);
    } else if (*weight) {
      std::string gtext = read_file(graph_path);
      inputs[graph_path] = fnv1a_hex(gtext);
      st = bfq_psm_weight(gtext.c_str(), samples, seed, thread_cap(), tolerance, &report);
    } else if (*star) {
      std::string ptext = read_file(pi_path);
      inputs[pi_path] = fnv1a_hex(ptext);
      st = bfq_psm_star(ptext.c_str(), order, check_assoc ? 1 : 0, &report);
    } else if (*selftest) {
      st = bfq_selftest(seed, &report);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (st != BFQ_OK) die_api(st);
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return finish(report, argv_echo, inputs, pretty, ms, with_timing);
}
