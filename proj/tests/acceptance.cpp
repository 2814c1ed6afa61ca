// Acceptance run: one PASS/FAIL line per criterion, with the sub-checks that
// decide it listed underneath. `--criterion k` runs a single criterion.

#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcity/io.hpp"
#include "pcity/validation.hpp"

using namespace pcity;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::function<std::vector<TestReport>(const BatteryConfig&)> run;
};

std::vector<Criterion> criteria() {
  return {
      {1, "mean central flow equals 2 (N=20, eps=1e-4, 1e5 replicates)",
       [](const BatteryConfig& c) {
         return std::vector<TestReport>{
             mean_flow_experiment(battery_stream(c.seed, kTagFlow), 20, 1e-4, 100'000, c.threads).at(0)};
       }},
      {2, "Rayleigh one-point law at s in {1, 0.5, 0.25}, dynamics and envelope (1e4 each, 1% KS)",
       [](const BatteryConfig& c) {
         std::vector<TestReport> out;
         for (CurveGenerator gen : {CurveGenerator::dynamics, CurveGenerator::envelope}) {
           for (double s : {1.0, 0.5, 0.25}) {
             out.push_back(ks_rayleigh(battery_stream(c.seed, kTagKs).fork(static_cast<std::uint64_t>(gen)), s,
                                       10'000, gen, 1.0, c.threads));
           }
         }
         return out;
       }},
      {3, "E[3^n Y_n] within 3 SE of sqrt(pi)/2 for n <= 10; intercept identity to 1e-12",
       [](const BatteryConfig& c) {
         return std::vector<TestReport>{
             martingale_check(battery_stream(c.seed, kTagMartingale), 10, 100'000, 3.0, false, c.threads),
             pathwise_identity_check(battery_stream(c.seed, kTagPathwise), 10, 100'000, c.threads)};
       }},
      {4, "3^n E[Y_n^3/S_n] below the decay bound + 3 SE at n in {4, 8}",
       [](const BatteryConfig& c) {
         std::vector<TestReport> out;
         for (std::size_t n : {4u, 8u}) {
           out.push_back(decay_check(battery_stream(c.seed, kTagDecay).fork(n), n, 100'000, 3.0, c.threads));
         }
         return out;
       }},
      {5, "mean |T(5) - T(25)| <= l1_error_bound(5) + bracket budgets (1e4 shared-stream replicates)",
       [](const BatteryConfig& c) {
         return std::vector<TestReport>{
             truncation_check(battery_stream(c.seed, kTagTruncation), 5, 25, 1e-4, 10'000, c.threads)};
       }},
      {6, "box volume by Monte Carlo and by quadrature agree (H=3, 1e5 pairs, grid 200, 20 realizations + empty)",
       [](const BatteryConfig& c) {
         BoxVolumeParams p;
         p.H = 3.0;
         p.n_mc = 100'000;
         p.grid = 200;
         return std::vector<TestReport>{box_oracle_check(battery_stream(c.seed, kTagBox), 20, p, c.threads)};
       }},
      {7, "six closed-form moments within 3 SE at 1e6 samples and 1e-10 by quadrature",
       [](const BatteryConfig& c) { return moment_unit_checks(battery_stream(c.seed, kTagMoments), 1'000'000); }},
      {8, "mean product-of-integrals term equals 4 pi / 9 within 3 SE + budget (1e5 replicates)",
       [](const BatteryConfig& c) {
         return std::vector<TestReport>{
             mean_flow_experiment(battery_stream(c.seed, kTagFlow), 20, 1e-4, 100'000, c.threads).at(1)};
       }},
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  BatteryConfig config;
  app.add_option("--criterion", only, "Run only this criterion (1-8)")->check(CLI::Range(0, 8));
  app.add_option("--seed", config.seed, "Root seed")->capture_default_str();
  app.add_option("--threads", config.threads, "Worker threads (0: all cores)")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  bool all_ok = true;
  for (const Criterion& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    const std::vector<TestReport> reports = c.run(config);
    const bool ok = all_passed(reports);
    all_ok = all_ok && ok;
    std::cout << "criterion " << c.id << ": " << (ok ? "PASS" : "FAIL") << "  " << c.title << '\n';
    for (const TestReport& r : reports) {
      std::cout << "    " << (r.passed ? "ok   " : "FAIL ") << r.name << "  statistic=" << format_double(r.statistic)
                << "  threshold=" << format_double(r.threshold) << "  n=" << r.n_samples << '\n';
    }
    std::cout.flush();
  }
  return all_ok ? 0 : 1;
}
