// Command-line front end: feasibility checks, constructive decomposition,
// partition verification, the exhaustive small-order oracle, instance
// generation and a small benchmark driver.
//
// Exit codes: 0 success/feasible, 1 infeasible (a certificate was printed),
// 2 usage or input error, 3 internal diagnostic failure.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "baldiag/decompose.hpp"
#include "baldiag/grid.hpp"
#include "baldiag/io.hpp"
#include "baldiag/oracle.hpp"

namespace {

constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDiagnostic = 3;

void print_pretty(std::ostream& out, const baldiag::BicoloredGrid& g,
                  const baldiag::DiagonalPartition& p) {
  const int n = g.n;
  std::vector<int> label(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (int d = 0; d < static_cast<int>(p.diagonals.size()); ++d)
    for (const baldiag::Cell& c : p.diagonals[static_cast<std::size_t>(d)].cells)
      label[g.index(c.row, c.col)] = d + 1;
  int width = 1;
  for (int v = n; v >= 10; v /= 10) ++width;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (c) out << ' ';
      out << std::setw(width) << label[g.index(r, c)] << baldiag::color_char(g.at(r, c));
    }
    out << '\n';
  }
}

baldiag::RandomSpec parse_spec(const std::string& text) {
  std::string head = text;
  std::string arg;
  if (auto pos = text.find(':'); pos != std::string::npos) {
    head = text.substr(0, pos);
    arg = text.substr(pos + 1);
  }
  if (head == "uniform") return baldiag::RandomSpec::uniform(arg.empty() ? 0.5 : std::stod(arg));
  if (head == "exact") {
    if (arg.empty()) throw std::invalid_argument("spec 'exact' needs a count, e.g. exact:13");
    return baldiag::RandomSpec::exact_blue(std::stoi(arg));
  }
  if (head == "feasible") return baldiag::RandomSpec::condition_satisfying();
  if (head == "cross") return baldiag::RandomSpec::cross_counterexample();
  if (head == "mineach") {
    if (arg.empty()) throw std::invalid_argument("spec 'mineach' needs a count, e.g. mineach:13");
    return baldiag::RandomSpec::min_each_color(std::stoi(arg));
  }
  throw std::invalid_argument("unknown spec '" + text +
                              "' (use uniform[:p], exact:M, feasible, cross, mineach:M)");
}

int run_check(const std::string& file) {
  baldiag::BicoloredGrid g = baldiag::read_grid_file(file);
  baldiag::FeasibilityWitness w = baldiag::check_feasibility(g);
  std::cout << baldiag::describe(w) << '\n';
  if (const auto* f = std::get_if<baldiag::FeasibilityWitness::Feasible>(&w.value)) {
    auto dump = [](const baldiag::CellSet& s) {
      std::ostringstream out;
      for (std::size_t i = 0; i < s.cells.size(); ++i) {
        if (i) out << ' ';
        out << '(' << s.cells[i].row << ',' << s.cells[i].col << ')';
      }
      return out.str();
    };
    std::cout << "blue witness: " << dump(f->blue_subset) << '\n';
    std::cout << "red witness:  " << dump(f->red_subset) << '\n';
  }
  return w.feasible() ? kExitFeasible : kExitInfeasible;
}

int run_decompose(const std::string& file, std::uint64_t seed, bool trace, bool pretty) {
  baldiag::BicoloredGrid g = baldiag::read_grid_file(file);
  baldiag::PipelineTrace tr;
  try {
    baldiag::DecomposeResult result = baldiag::decompose(g, seed, &tr);
    if (trace) std::cerr << baldiag::trace_to_json(tr).dump() << '\n';
    if (const auto* w = std::get_if<baldiag::FeasibilityWitness>(&result)) {
      std::cout << baldiag::describe(*w) << '\n';
      return kExitInfeasible;
    }
    if (std::holds_alternative<baldiag::NoDecomposition>(result)) {
      std::cout << "NoDecomposition (condition holds, exhaustive search found none; n < 7)\n";
      return kExitInfeasible;
    }
    const auto& partition = std::get<baldiag::DiagonalPartition>(result);
    if (pretty)
      print_pretty(std::cout, g, partition);
    else
      std::cout << baldiag::partition_to_json(partition) << '\n';
    return kExitFeasible;
  } catch (const baldiag::PipelineError& e) {
    std::cerr << "diagnostic: " << e.what() << '\n';
    if (trace) std::cerr << baldiag::trace_to_json(e.trace).dump() << '\n';
    return kExitDiagnostic;
  }
}

int run_verify(const std::string& grid_file, const std::string& partition_file) {
  baldiag::BicoloredGrid g = baldiag::read_grid_file(grid_file);
  baldiag::DiagonalPartition p =
      baldiag::partition_from_json(baldiag::partition_file_to_string(partition_file), g.n);
  baldiag::PartitionReport report = baldiag::verify_partition(g, p);
  if (report.ok()) {
    std::cout << "valid balanced partition\n";
    return kExitFeasible;
  }
  for (const auto& issue : report.issues) std::cout << baldiag::describe(issue) << '\n';
  return kExitInfeasible;
}

int run_oracle(const std::string& file, int limit) {
  baldiag::BicoloredGrid g = baldiag::read_grid_file(file);
  baldiag::OracleVerdict v = baldiag::oracle_decompose(g, limit);
  if (v.found()) {
    std::cout << baldiag::partition_to_json(*v.partition) << '\n';
    return kExitFeasible;
  }
  std::cout << "NoneExists\n";
  return kExitInfeasible;
}

int run_gen(int n, const std::string& spec_text, std::uint64_t seed) {
  baldiag::BicoloredGrid g = baldiag::random_grid(n, parse_spec(spec_text), seed);
  baldiag::write_grid(std::cout, g);
  return kExitFeasible;
}

int run_bench(int n, int count, std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  std::vector<double> ms;
  ms.reserve(static_cast<std::size_t>(count));
  int early = 0;
  for (int i = 0; i < count; ++i) {
    baldiag::BicoloredGrid g =
        baldiag::random_grid(n, baldiag::RandomSpec::condition_satisfying(), seed + static_cast<std::uint64_t>(i));
    baldiag::PipelineTrace tr;
    auto t0 = clock::now();
    baldiag::DecomposeResult r = baldiag::decompose(g, seed + static_cast<std::uint64_t>(i), &tr);
    auto t1 = clock::now();
    if (!baldiag::decomposed(r)) {
      std::cerr << "bench: instance " << i << " unexpectedly not decomposed\n";
      return kExitDiagnostic;
    }
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    if (tr.early_done) ++early;
  }
  std::sort(ms.begin(), ms.end());
  double total = 0;
  for (double v : ms) total += v;
  std::cout << "n=" << n << " count=" << count << " seed=" << seed << '\n';
  std::cout << std::fixed << std::setprecision(3);
  std::cout << "min=" << ms.front() << "ms median=" << ms[ms.size() / 2]
            << "ms mean=" << total / static_cast<double>(count) << "ms max=" << ms.back() << "ms\n";
  std::cout << "early_done=" << early << "/" << count << '\n';
  return kExitFeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"balanced-diagonal decomposition of 2-colored square arrays"};
  app.require_subcommand(1);

  std::string check_file;
  auto* check = app.add_subcommand("check", "report the feasibility certificate of a grid");
  check->add_option("file", check_file, "grid file")->required();

  std::string dec_file;
  std::uint64_t dec_seed = 0;
  bool dec_trace = false, dec_pretty = false;
  auto* dec = app.add_subcommand("decompose", "construct a balanced-diagonal partition");
  dec->add_option("file", dec_file, "grid file")->required();
  dec->add_option("--seed", dec_seed, "seed for the window-walk fallbacks")->envname("BALDIAG_SEED");
  dec->add_flag("--trace", dec_trace, "dump the pipeline trace as JSON on stderr");
  dec->add_flag("--pretty", dec_pretty, "render the partition as a labeled grid");

  std::string ver_grid, ver_partition;
  auto* ver = app.add_subcommand("verify", "verify a partition file against a grid");
  ver->add_option("file", ver_grid, "grid file")->required();
  ver->add_option("partition", ver_partition, "partition file (JSON)")->required();

  std::string ora_file;
  int ora_limit = 7;
  auto* ora = app.add_subcommand("oracle", "exhaustive search for a balanced partition");
  ora->add_option("file", ora_file, "grid file")->required();
  ora->add_option("--limit", ora_limit, "largest order the oracle will attempt");

  int gen_n = 0;
  std::string gen_spec = "uniform";
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "emit a random grid");
  gen->add_option("--n", gen_n, "grid order")->required();
  gen->add_option("--spec", gen_spec, "uniform[:p] | exact:M | feasible | cross | mineach:M");
  gen->add_option("--seed", gen_seed, "generator seed")->envname("BALDIAG_SEED");

  int bench_n = 0, bench_count = 10;
  std::uint64_t bench_seed = 0;
  auto* bench = app.add_subcommand("bench", "time decompose on random feasible instances");
  bench->add_option("--n", bench_n, "grid order")->required();
  bench->add_option("--count", bench_count, "number of instances");
  bench->add_option("--seed", bench_seed, "base seed")->envname("BALDIAG_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*check) return run_check(check_file);
    if (*dec) return run_decompose(dec_file, dec_seed, dec_trace, dec_pretty);
    if (*ver) return run_verify(ver_grid, ver_partition);
    if (*ora) return run_oracle(ora_file, ora_limit);
    if (*gen) return run_gen(gen_n, gen_spec, gen_seed);
    if (*bench) return run_bench(bench_n, bench_count, bench_seed);
  } catch (const baldiag::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const baldiag::PipelineError& e) {
    std::cerr << "diagnostic: " << e.what() << '\n';
    return kExitDiagnostic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
