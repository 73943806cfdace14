// skelet command-line experiment runner.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "skelet/skelet.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int report(skelet_status st) {
  std::fprintf(stderr, "skelet: %s: %s\n", skelet_status_name(st), skelet_last_error());
  return static_cast<int>(st) == 0 ? 0 : 1 + (st == SKELET_PARSE_ERROR);
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string join(const std::vector<size_t>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skelet: column-skeleton low-rank approximation experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", skelet_version());

  std::string config, out, matrix_path, spec_path;
  unsigned workers = default_workers();
  uint64_t seed = 0;
  size_t k = 0;

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over algorithms and ranks; writes CSV");
  sweep->add_option("--config", config, "sweep config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "output CSV (default stdout)");
  sweep->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  auto* seed_opt = sweep->add_option("--seed", seed, "override the config seed");
  sweep->footer(skelet_sweep_help());

  auto* oracle = app.add_subcommand("oracle", "exhaustive best k-column subset of a small matrix");
  oracle->add_option("--matrix", matrix_path, "matrix file")->required()->check(CLI::ExistingFile);
  oracle->add_option("--k", k, "number of columns")->required()->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen-matrix", "build a test matrix from a spec file");
  gen->add_option("--spec", spec_path, "test matrix spec file")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", out, "output matrix file")->required();

  auto* proj = app.add_subcommand("projector-exp", "element-wise projector error experiment; writes CSV");
  proj->add_option("--config", config, "projector config file")->required()->check(CLI::ExistingFile);
  proj->add_option("--out", out, "output CSV (default stdout)");
  proj->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  proj->footer(skelet_projector_help());

  double target = 0.0;
  size_t n = 0;
  auto* cal = app.add_subcommand("calibrate", "find the mixing weight alpha for a target coherence");
  cal->add_option("--n", n, "matrix size")->required();
  cal->add_option("--k", k, "rank")->required();
  cal->add_option("--target", target, "target coherence")->required();
  cal->add_option("--seed", seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      const std::string text = read_file(config);
      char* csv = nullptr;
      const skelet_status st = skelet_sweep(text.c_str(), workers, *seed_opt ? &seed : nullptr, &csv);
      if (st != SKELET_OK) return report(st);
      write_output(out, csv);
      skelet_string_free(csv);
    } else if (*proj) {
      const std::string text = read_file(config);
      char* csv = nullptr;
      const skelet_status st = skelet_projector_experiment(text.c_str(), workers, &csv);
      if (st != SKELET_OK) return report(st);
      write_output(out, csv);
      skelet_string_free(csv);
    } else if (*gen) {
      const std::string text = read_file(spec_path);
      skelet_matrix* m = nullptr;
      skelet_status st = skelet_testgen_build(text.c_str(), &m);
      if (st != SKELET_OK) return report(st);
      st = skelet_matrix_save(m, out.c_str());
      skelet_matrix_free(m);
      if (st != SKELET_OK) return report(st);
    } else if (*oracle) {
      skelet_matrix* m = nullptr;
      skelet_status st = skelet_matrix_load(matrix_path.c_str(), &m);
      if (st != SKELET_OK) return report(st);
      std::vector<size_t> js(k), jf(k);
      double es = 0.0, ef = 0.0;
      uint64_t count = 0;
      st = skelet_oracle(m, k, js.data(), &es, jf.data(), &ef, &count);
      skelet_matrix_free(m);
      if (st != SKELET_OK) return report(st);
      std::printf("subsets,%llu\n", static_cast<unsigned long long>(count));
      std::printf("spectral,%.17g,%s\n", es, join(js).c_str());
      std::printf("frobenius,%.17g,%s\n", ef, join(jf).c_str());
    } else if (*cal) {
      double alpha = 0.0, c = 0.0;
      const skelet_status st = skelet_testgen_calibrate(n, k, target, seed, &alpha, &c);
      if (st != SKELET_OK) return report(st);
      std::printf("alpha,%.17g\ncoherence,%.17g\n", alpha, c);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "skelet: %s\n", e.what());
    return 1;
  }
  return 0;
}
