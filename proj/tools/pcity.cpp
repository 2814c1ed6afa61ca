// pcity: experiment runner for seminal curves, flow estimates, the validation
// battery and the brute-force line-process oracle.
//
// Exit codes: 0 success, 1 validation failure, 2 I/O or configuration error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcity/curve.hpp"
#include "pcity/estimator.hpp"
#include "pcity/io.hpp"
#include "pcity/oracle.hpp"
#include "pcity/parallel.hpp"
#include "pcity/validation.hpp"

namespace {

using nlohmann::json;
using namespace pcity;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::uint64_t seed = 20240607;
  std::size_t replicates = 1;
  std::size_t depth = 20;
  double eps = 1e-4;
  std::string out = "-";
  std::string format = "csv";
  unsigned threads = 1;
  bool no_timestamp = false;
  bool summary = false;
  double s = 0.5;
  double M = 0.0;  // 0: default window
  double B = 20.0;
  double H = 3.0;
  std::size_t grid = 200;
  std::size_t n_mc = 100'000;
  bool empty = false;
  std::string lines_out;
  bool corrupt_sampler = false;
  std::string config_path;
};

// Options registered under the JSON key they may also be set from.
struct Command {
  CLI::App* app = nullptr;
  std::map<std::string, CLI::Option*> options;
};

void add_common(Command& cmd, ExperimentConfig& c) {
  CLI::App* a = cmd.app;
  a->add_option("--config", c.config_path, "JSON config file; flags given on the command line win");
  cmd.options["seed"] = a->add_option("--seed", c.seed, "Root seed")->capture_default_str();
  cmd.options["replicates"] = a->add_option("--replicates", c.replicates, "Number of replicates")->capture_default_str();
  cmd.options["depth"] = a->add_option("--depth", c.depth, "Truncation depth N")->capture_default_str();
  cmd.options["eps"] = a->add_option("--eps", c.eps, "Deterministic bracket budget")->capture_default_str();
  cmd.options["out"] = a->add_option("--out", c.out, "Output path ('-' for stdout)")->capture_default_str();
  cmd.options["format"] =
      a->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd.options["threads"] = a->add_option("--threads", c.threads, "Worker threads (0: all cores)")->capture_default_str();
  cmd.options["no_timestamp"] = a->add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp header");
}

template <class T>
void take(const json& j, const char* key, T& dst) {
  try {
    dst = j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

void apply_config_file(const Command& cmd, ExperimentConfig& c) {
  if (c.config_path.empty()) return;
  std::ifstream in(c.config_path);
  if (!in) throw ConfigError("cannot open config file " + c.config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    const auto it = cmd.options.find(key);
    if (it == cmd.options.end()) throw ConfigError("config: unknown key '" + key + "' for this command");
    if (it->second->count() > 0) continue;  // command line wins
    const char* k = key.c_str();
    if (key == "seed") take(value, k, c.seed);
    else if (key == "replicates") take(value, k, c.replicates);
    else if (key == "depth") take(value, k, c.depth);
    else if (key == "eps") take(value, k, c.eps);
    else if (key == "out") take(value, k, c.out);
    else if (key == "format") take(value, k, c.format);
    else if (key == "threads") take(value, k, c.threads);
    else if (key == "no_timestamp") take(value, k, c.no_timestamp);
    else if (key == "summary") take(value, k, c.summary);
    else if (key == "s") take(value, k, c.s);
    else if (key == "M") take(value, k, c.M);
    else if (key == "B") take(value, k, c.B);
    else if (key == "H") take(value, k, c.H);
    else if (key == "grid") take(value, k, c.grid);
    else if (key == "n_mc") take(value, k, c.n_mc);
    else if (key == "empty") take(value, k, c.empty);
    else if (key == "lines_out") take(value, k, c.lines_out);
  }
}

void check_config(const ExperimentConfig& c) {
  if (c.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (!(c.eps > 0.0)) throw ConfigError("eps must be positive");
  if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
  if (!(c.s > 0.0 && c.s <= 1.0)) throw ConfigError("s must lie in (0, 1]");
  if (!(c.H > 0.0) || c.grid == 0 || c.n_mc < 2) throw ConfigError("need H > 0, grid >= 1, n_mc >= 2");
  if (c.M < 0.0 || !(c.B > 0.0)) throw ConfigError("need M >= 0 and B > 0");
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// stdout or a file; failures throw std::ios_base::failure.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") {
      os_ = &std::cout;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::ios_base::failure("cannot open " + path + " for writing");
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }
  void finish() {
    os_->flush();
    if (!*os_) throw std::ios_base::failure("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

json header_json(const std::string& command, const ExperimentConfig& c) {
  json h = {{"command", command}, {"seed", c.seed}};
  if (!c.no_timestamp) h["generated_at"] = timestamp();
  return h;
}

void csv_header(std::ostream& os, const std::string& command, const ExperimentConfig& c) {
  os << "# command=" << command << " seed=" << c.seed;
  if (!c.no_timestamp) os << " generated_at=" << timestamp();
  os << '\n';
}

// ---------------------------------------------------------------------------

int cmd_simulate_curve(const ExperimentConfig& c) {
  const RngStream root(c.seed, 0);
  const auto curves = map_replicates(c.replicates, c.threads, [&](std::size_t i) {
    CurveSource src = CurveSource::draw(replicate_stream(root, i), Orientation::right);
    src.extend_until(stop_at_depth(c.depth));
    return src.curve;
  });

  Sink sink(c.out);
  std::ostream& os = *sink;
  if (c.summary) {
    // Per-n mean of Y_n against E[Y_n] = 3^-n sqrt(pi) / 2.
    json rows = json::array();
    for (std::size_t n = 0; n <= c.depth; ++n) {
      RunningStats st;
      for (const SeminalCurve& cv : curves) st.push(cv.vertex(n).Y);
      const double expected = std::pow(3.0, -static_cast<double>(n)) * kMeanY0;
      rows.push_back({{"n", n},
                      {"mean_Y", st.mean()},
                      {"se_Y", st.standard_error()},
                      {"expected_Y", expected},
                      {"within_3se", std::abs(st.mean() - expected) <= 3.0 * st.standard_error()}});
    }
    if (c.format == "json") {
      json doc = header_json("simulate-curve", c);
      doc["summary"] = rows;
      os << doc.dump(2) << '\n';
    } else {
      csv_header(os, "simulate-curve", c);
      os << "n,mean_Y,se_Y,expected_Y,within_3se\n";
      for (const json& r : rows) {
        os << r["n"].get<std::size_t>() << ',' << format_double(r["mean_Y"]) << ',' << format_double(r["se_Y"]) << ','
           << format_double(r["expected_Y"]) << ',' << (r["within_3se"].get<bool>() ? 1 : 0) << '\n';
      }
    }
  } else if (c.format == "json") {
    json doc = header_json("simulate-curve", c);
    json recs = json::array();
    for (std::size_t i = 0; i < curves.size(); ++i) {
      recs.push_back({{"replicate_id", i}, {"vertices", curve_to_json(curves[i])}});
    }
    doc["curves"] = recs;
    os << doc.dump() << '\n';
  } else {
    csv_header(os, "simulate-curve", c);
    os << "replicate_id,n,S,Y,sigma\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
      for (const CurveVertex& v : curves[i].vertices()) {
        os << i << ',' << v.n << ',' << format_double(v.S) << ',' << format_double(v.Y) << ','
           << format_double(v.sigma) << '\n';
      }
    }
  }
  sink.finish();
  return kExitOk;
}

int cmd_sample_flow(const ExperimentConfig& c) {
  const RngStream root(c.seed, 0);
  const auto estimates = map_replicates(c.replicates, c.threads, [&](std::size_t i) {
    return sample_total_flow(replicate_stream(root, i), c.depth, c.eps);
  });
  RunningStats value, product;
  double widest = 0.0;
  for (const FlowEstimate& e : estimates) {
    value.push(e.value);
    product.push(e.product_term);
    widest = std::max(widest, e.bracket_width);
  }
  const double l1 = l1_error_bound(c.depth);
  const double budget = 3.0 * value.standard_error() + c.eps + l1;
  nlohmann::ordered_json agg = {{"replicates", c.replicates},
              {"N", c.depth},
              {"mean", value.mean()},
              {"se", value.standard_error()},
              {"product_term_mean", product.mean()},
              {"product_term_se", product.standard_error()},
              {"max_bracket_width", widest},
              {"l1_bound", l1},
              {"error_budget", budget}};

  Sink sink(c.out);
  std::ostream& os = *sink;
  if (c.format == "json") {
    json doc = header_json("sample-flow", c);
    json recs = json::array();
    for (std::size_t i = 0; i < estimates.size(); ++i) recs.push_back(flow_to_json(i, estimates[i]));
    doc["estimates"] = recs;
    doc["aggregate"] = agg;
    os << doc.dump() << '\n';
  } else {
    csv_header(os, "sample-flow", c);
    os << kFlowCsvHeader << '\n';
    for (std::size_t i = 0; i < estimates.size(); ++i) write_flow_row(os, i, estimates[i]);
    for (const auto& [k, v] : agg.items()) {
      os << "# " << k << '=' << (v.is_number_float() ? format_double(v.get<double>()) : v.dump()) << '\n';
    }
  }
  sink.finish();
  return kExitOk;
}

void write_reports(const ExperimentConfig& c, const std::string& command, const std::vector<TestReport>& reports) {
  Sink sink(c.out);
  std::ostream& os = *sink;
  if (c.format == "json") {
    json doc = header_json(command, c);
    doc["reports"] = reports_to_json(reports);
    os << doc.dump(2) << '\n';
  } else {
    csv_header(os, command, c);
    os << "name,statistic,threshold,n_samples,passed,seed\n";
    for (const TestReport& r : reports) {
      os << r.name << ',' << format_double(r.statistic) << ',' << format_double(r.threshold) << ',' << r.n_samples
         << ',' << (r.passed ? 1 : 0) << ',' << r.seed << '\n';
    }
  }
  sink.finish();
}

int cmd_validate(const ExperimentConfig& c) {
  BatteryConfig b;
  b.seed = c.seed;
  b.threads = c.threads;
  b.flow_depth = c.depth;
  b.eps = c.eps;
  b.corrupt_sampler = c.corrupt_sampler;
  const std::vector<TestReport> reports = run_validation_battery(b);
  write_reports(c, "validate", reports);
  for (const TestReport& r : reports) {
    if (!r.passed) std::cerr << "FAIL " << r.name << ": " << r.statistic << " > " << r.threshold << '\n';
  }
  return all_passed(reports) ? kExitOk : kExitValidation;
}

int cmd_oracle_compare(const ExperimentConfig& c) {
  BoxVolumeParams params;
  params.H = c.H;
  params.grid = c.grid;
  params.n_mc = c.n_mc;
  const RngStream root(c.seed, 0);

  struct Row {
    std::size_t lines;
    BoxVolume v;
  };
  const auto rows = map_replicates(c.replicates, c.threads, [&](std::size_t i) {
    RngStream rs = replicate_stream(root, i);
    RngStream line_stream = rs.fork(1);
    RngStream point_stream = rs.fork(2);
    std::vector<Line> lines;
    if (!c.empty) lines = sample_box_realization(line_stream, params);
    return Row{lines.size(), box_volume_two_ways(lines, point_stream, params)};
  });
  if (!c.lines_out.empty()) {
    RngStream rs = replicate_stream(root, 0).fork(1);
    std::vector<Line> lines;
    if (!c.empty) lines = sample_box_realization(rs, params);
    std::ofstream f(c.lines_out, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open " + c.lines_out + " for writing");
    write_lines_csv(f, lines);
    if (!f) throw std::ios_base::failure("write failed: " + c.lines_out);
  }

  EnvelopeWindow window;
  if (c.M > 0.0) window.M = c.M;
  window.B = c.B;
  const std::size_t ks_n = std::max<std::size_t>(1000, 10 * c.replicates);
  std::vector<TestReport> ks;
  for (CurveGenerator gen : {CurveGenerator::dynamics, CurveGenerator::envelope}) {
    ks.push_back(ks_rayleigh(root.fork(100 + static_cast<std::uint64_t>(gen)), c.s, ks_n, gen, 1.0, c.threads, window));
  }

  bool ok = true;
  json recs = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const BoxVolume& v = rows[i].v;
    const double band = 3.0 * v.mc_se + v.quad_error_bound;
    const bool within = std::abs(v.mc - v.quad) <= band;
    ok = ok && within;
    recs.push_back({{"realization", i},       {"line_count", rows[i].lines}, {"mc", v.mc},
                    {"mc_se", v.mc_se},       {"quad", v.quad},              {"quad_error_bound", v.quad_error_bound},
                    {"within_band", within}});
  }
  for (const TestReport& r : ks) ok = ok && r.passed;

  Sink sink(c.out);
  std::ostream& os = *sink;
  if (c.format == "json") {
    json doc = header_json("oracle-compare", c);
    doc["box_volumes"] = recs;
    doc["ks"] = reports_to_json(ks);
    os << doc.dump(2) << '\n';
  } else {
    csv_header(os, "oracle-compare", c);
    os << "realization,line_count,mc,mc_se,quad,quad_error_bound,within_band\n";
    for (const json& r : recs) {
      os << r["realization"].get<std::size_t>() << ',' << r["line_count"].get<std::size_t>() << ','
         << format_double(r["mc"]) << ',' << format_double(r["mc_se"]) << ',' << format_double(r["quad"]) << ','
         << format_double(r["quad_error_bound"]) << ',' << (r["within_band"].get<bool>() ? 1 : 0) << '\n';
    }
    for (const TestReport& r : ks) {
      os << "# " << r.name << " statistic=" << format_double(r.statistic) << " threshold=" << format_double(r.threshold)
         << " passed=" << (r.passed ? 1 : 0) << '\n';
    }
  }
  sink.finish();
  return ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seminal curves, central flow estimates and their validation"};
  app.require_subcommand(1);
  ExperimentConfig config;

  Command simulate{app.add_subcommand("simulate-curve", "Emit vertex lists of simulated seminal curves"), {}};
  add_common(simulate, config);
  simulate.options["summary"] =
      simulate.app->add_flag("--summary", config.summary, "Per-n means of Y_n instead of vertex lists");

  Command flow{app.add_subcommand("sample-flow", "Emit central flow estimates and their aggregate"), {}};
  add_common(flow, config);

  Command validate{app.add_subcommand("validate", "Run the validation battery; exit 1 if any check fails"), {}};
  add_common(validate, config);
  validate.app->add_flag("--corrupt-sampler", config.corrupt_sampler)->group("");

  Command oracle{app.add_subcommand("oracle-compare", "Box volumes two ways and envelope-vs-dynamics KS tests"), {}};
  add_common(oracle, config);
  oracle.options["s"] = oracle.app->add_option("--s", config.s, "Abscissa for the KS tests")->capture_default_str();
  oracle.options["M"] = oracle.app->add_option("--M", config.M, "Envelope slope window (0: 50/s)")->capture_default_str();
  oracle.options["B"] = oracle.app->add_option("--B", config.B, "Envelope intercept window")->capture_default_str();
  oracle.options["H"] = oracle.app->add_option("--H", config.H, "Box height")->capture_default_str();
  oracle.options["grid"] = oracle.app->add_option("--grid", config.grid, "Quadrature grid size")->capture_default_str();
  oracle.options["n_mc"] = oracle.app->add_option("--n-mc", config.n_mc, "Monte Carlo point pairs")->capture_default_str();
  oracle.options["empty"] = oracle.app->add_flag("--empty", config.empty, "Use the empty line realization");
  oracle.options["lines_out"] =
      oracle.app->add_option("--lines-out", config.lines_out, "Write realization 0 as sigma,b CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitIo;
  }

  try {
    for (const Command* cmd : {&simulate, &flow, &validate, &oracle}) {
      if (!cmd->app->parsed()) continue;
      apply_config_file(*cmd, config);
      check_config(config);
      if (cmd == &simulate) return cmd_simulate_curve(config);
      if (cmd == &flow) return cmd_sample_flow(config);
      if (cmd == &validate) return cmd_validate(config);
      return cmd_oracle_compare(config);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const pcity::InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitIo;
}
