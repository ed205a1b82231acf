// Command line front end: `process` turns a CSV stream into one JSON
// report line per window, `datagen` writes synthetic experiment data,
// `bench` times windowed updates against full recomputation.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cumstream/copula_gen.hpp"
#include "cumstream/csv.hpp"
#include "cumstream/cumulants.hpp"
#include "cumstream/gauge.hpp"
#include "cumstream/moments.hpp"
#include "cumstream/parallel.hpp"
#include "cumstream/serialize.hpp"
#include "cumstream/stream.hpp"
#include "json.hpp"

namespace {

using namespace cumstream;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

struct ProcessArgs {
  std::string input = "-";
  std::string output = "-";
  std::string dump_dir;
  int dim = 0;
  int order = 4;
  std::size_t window = 0;
  std::size_t update = 0;
  int block = 1;
  int workers = 0;
  std::size_t resync = 1000;
  bool header = false;
};

int run_process(const ProcessArgs& args) {
  StreamConfig cfg;
  cfg.dim = args.dim;
  cfg.max_order = args.order;
  cfg.window_len = args.window;
  cfg.update_len = args.update;
  cfg.block_size = args.block;
  cfg.workers = args.workers;
  cfg.resync_every = args.resync;
  cfg.validate();

  std::ifstream fin;
  if (args.input != "-") {
    fin.open(args.input);
    if (!fin) throw std::runtime_error("cannot open input file: " + args.input);
  }
  std::istream& in = args.input == "-" ? std::cin : fin;

  std::ofstream fout;
  if (args.output != "-") {
    fout.open(args.output);
    if (!fout) throw std::runtime_error("cannot open output file: " + args.output);
  }
  std::ostream& out = args.output == "-" ? std::cout : fout;

  if (!args.dump_dir.empty()) std::filesystem::create_directories(args.dump_dir);

  CsvBatchSource source(in, static_cast<std::size_t>(args.dim), args.header);

  // Reports come from run(); tensor dumps need the cumulants themselves,
  // so the dump path drives the window loop directly.
  if (args.dump_dir.empty()) {
    run(cfg, source, [&](const WindowReport& rep) { out << report_json_line(rep) << "\n"; });
    return 0;
  }

  const auto dump = [&](std::uint64_t window, const CumulantSeries& cums) {
    const auto path =
        std::filesystem::path(args.dump_dir) / ("window_" + std::to_string(window) + ".json");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << to_json(cums, window, 1) << "\n";
  };

  auto first = source.next(cfg.window_len);
  if (!first || first->rows < cfg.window_len)
    throw std::runtime_error("input ended before the first window was full");
  WindowState state = prime(cfg, *first);
  first.reset();
  {
    const CumulantSeries cums = moms2cums(state.moments, cfg.workers);
    out << report_json_line(make_window_report(state.window, cums)) << "\n";
    dump(state.window, cums);
  }
  for (;;) {
    auto batch = source.next(cfg.update_len);
    if (!batch) break;
    if (batch->rows < cfg.update_len) {
      std::cerr << "warning: discarding " << batch->rows
                << " trailing rows shorter than one update\n";
      break;
    }
    const CumulantSeries cums = step(state, *batch);
    out << report_json_line(make_window_report(state.window, cums)) << "\n";
    dump(state.window, cums);
  }
  return 0;
}

struct DatagenArgs {
  std::string output;
  std::string meta;
  int dim = 0;
  std::size_t window = 0;
  std::size_t update = 0;
  int windows = 1;
  double dof = 10.0;
  std::uint64_t seed = 0;
  bool header = false;
};

int run_datagen(const DatagenArgs& args) {
  GenConfig cfg;
  cfg.dim = args.dim;
  cfg.window_len = args.window;
  cfg.update_len = args.update;
  cfg.windows = args.windows;
  cfg.copula_dof = args.dof;
  cfg.seed = args.seed;
  cfg.validate();

  std::ofstream fout;
  if (args.output != "-") {
    fout.open(args.output);
    if (!fout) throw std::runtime_error("cannot open output file: " + args.output);
  }
  std::ostream& out = args.output == "-" ? std::cout : fout;

  if (args.header) {
    for (int c = 0; c < cfg.dim; ++c) out << (c ? ",x" : "x") << (c + 1);
    out << "\n";
  }

  ExperimentStream stream(cfg);
  std::size_t total = 0;
  for (int k = 0; k < cfg.windows; ++k) {
    const auto batch = stream.next(k == 0 ? cfg.window_len : cfg.update_len);
    write_csv(out, *batch);
    total += batch->rows;
  }

  std::string meta_path = args.meta;
  if (meta_path.empty() && args.output != "-") meta_path = args.output + ".meta.json";
  if (!meta_path.empty()) {
    nlohmann::ordered_json j;
    j["dim"] = cfg.dim;
    j["window_len"] = cfg.window_len;
    j["update_len"] = cfg.update_len;
    j["windows"] = cfg.windows;
    j["copula_dof"] = cfg.copula_dof;
    j["seed"] = cfg.seed;
    j["rows"] = total;
    std::ofstream f(meta_path);
    if (!f) throw std::runtime_error("cannot write " + meta_path);
    f << j.dump(1) << "\n";
  }
  return 0;
}

struct BenchArgs {
  std::vector<int> dims{30};
  std::vector<int> orders{4};
  std::vector<int> blocks{4};
  std::vector<std::size_t> windows{100000};
  std::vector<std::size_t> updates{5000};
  int reps = 5;
  int workers = 0;
  std::uint64_t seed = 1;
  double max_elements = 2e8;
  std::string output = "-";
};

std::uint64_t binom_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

double footprint_elements(int n, int d, int b, std::size_t t) {
  const int grid = (n + b - 1) / b;
  double total = static_cast<double>(t) * n;  // window buffer
  for (int s = 1; s <= d; ++s) {
    double bs = 1.0;
    for (int k = 0; k < s; ++k) bs *= b;
    total += static_cast<double>(binom_u64(grid + s - 1, s)) * bs;  // stored blocks
    total += static_cast<double>(binom_u64(n + s - 1, s));          // accumulator
  }
  return total;
}

int run_bench(const BenchArgs& args) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int n : args.dims)
    for (int d : args.orders)
      for (int b : args.blocks)
        for (std::size_t t : args.windows)
          for (std::size_t t_up : args.updates) {
            nlohmann::ordered_json row;
            row["dim"] = n;
            row["order"] = d;
            row["block_size"] = b;
            row["window_len"] = t;
            row["update_len"] = t_up;
            row["workers"] = resolve_workers(args.workers);
            if (b > n || t_up > t) {
              row["skipped"] = "invalid combination";
              rows.push_back(std::move(row));
              continue;
            }
            const double fp = footprint_elements(n, d, b, t);
            if (fp > args.max_elements) {
              row["skipped"] = "estimated footprint above --max-elements";
              row["estimated_elements"] = fp;
              rows.push_back(std::move(row));
              continue;
            }

            GenConfig gen;
            gen.dim = n;
            gen.window_len = t;
            gen.update_len = t_up;
            gen.windows = 1;
            gen.seed = args.seed;

            StreamConfig cfg;
            cfg.dim = n;
            cfg.max_order = d;
            cfg.window_len = t;
            cfg.update_len = t_up;
            cfg.block_size = b;
            cfg.workers = args.workers;
            cfg.resync_every = 0;  // measure the pure update path
            WindowState state = prime(cfg, gaussian_batch(gen, t, 1));

            std::vector<double> step_upd, step_conv, step_gauge, step_total;
            for (int rep = 0; rep <= args.reps; ++rep) {
              const DataBatch x =
                  gaussian_batch(gen, t_up, static_cast<std::uint64_t>(rep) + 2);
              StepTiming tm;
              const auto t0 = std::chrono::steady_clock::now();
              const CumulantSeries cums = step(state, x, &tm);
              const auto t1 = std::chrono::steady_clock::now();
              const WindowReport rep_out = make_window_report(state.window, cums);
              const auto t2 = std::chrono::steady_clock::now();
              (void)rep_out;
              if (rep == 0) continue;  // warm-up
              step_upd.push_back(tm.update_s);
              step_conv.push_back(tm.moms2cums_s);
              step_gauge.push_back(std::chrono::duration<double>(t2 - t1).count());
              step_total.push_back(std::chrono::duration<double>(t2 - t0).count());
            }

            const DataBatch window = state.buffer.materialize();
            std::vector<double> full_total;
            for (int rep = 0; rep < args.reps; ++rep) {
              const auto t0 = std::chrono::steady_clock::now();
              const CumulantSeries cums =
                  cumulant_series(window, d, b, args.workers);
              const WindowReport rep_out = make_window_report(state.window, cums);
              const auto t1 = std::chrono::steady_clock::now();
              (void)rep_out;
              full_total.push_back(std::chrono::duration<double>(t1 - t0).count());
            }

            row["step_update_s"] = median(step_upd);
            row["step_moms2cums_s"] = median(step_conv);
            row["step_gauge_s"] = median(step_gauge);
            row["step_total_s"] = median(step_total);
            row["full_recompute_s"] = median(full_total);
            row["measured_speedup"] = median(full_total) / median(step_total);
            row["predicted_speedup"] = predicted_speedup(t, t_up, d);
            row["predicted_moment_speedup"] = predicted_moment_speedup(t, t_up);
            row["updates_per_s"] = 1.0 / mean(step_total);
            row["frequency_hz"] = static_cast<double>(t_up) / mean(step_total);
            row["rows_processed"] =
                t + static_cast<std::size_t>(args.reps + 1) * t_up;
            row["timings"] = {{"update_s", step_upd},
                              {"moms2cums_s", step_conv},
                              {"gauge_s", step_gauge},
                              {"total_s", step_total},
                              {"full_recompute_s", full_total}};
            rows.push_back(std::move(row));
          }

  nlohmann::ordered_json manifest;
  manifest["reps"] = args.reps;
  manifest["seed"] = args.seed;
  manifest["results"] = std::move(rows);

  if (args.output == "-") {
    std::cout << manifest.dump(1) << "\n";
  } else {
    std::ofstream f(args.output);
    if (!f) throw std::runtime_error("cannot open output file: " + args.output);
    f << manifest.dump(1) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming cumulant tensors in block storage"};
  app.require_subcommand(1);

  ProcessArgs pa;
  CLI::App* process = app.add_subcommand("process", "CSV stream to one JSON line per window");
  process->add_option("-i,--input", pa.input, "input CSV path, - for stdin");
  process->add_option("-o,--output", pa.output, "output path, - for stdout");
  process->add_option("-n,--dim", pa.dim, "columns per row")->required();
  process->add_option("-d,--order", pa.order, "highest cumulant order");
  process->add_option("-t,--window", pa.window, "rows per window")->required();
  process->add_option("-u,--update", pa.update, "rows per update step")->required();
  process->add_option("-b,--block", pa.block, "tensor block size");
  process->add_option("-w,--workers", pa.workers,
                      "worker threads (CUMSTREAM_WORKERS overrides, 0 = all cores)");
  process->add_option("--resync", pa.resync, "recompute moments every N steps, 0 = never");
  process->add_flag("--header", pa.header, "skip one header line before the data");
  process->add_option("--dump-cumulants", pa.dump_dir,
                      "also write per-window cumulant tensors into this directory");

  DatagenArgs da;
  CLI::App* datagen = app.add_subcommand("datagen", "synthetic experiment data as CSV");
  datagen->add_option("-o,--output", da.output, "output CSV path, - for stdout")->required();
  datagen->add_option("--meta", da.meta, "sidecar JSON path (default <output>.meta.json)");
  datagen->add_option("-n,--dim", da.dim, "columns per row")->required();
  datagen->add_option("-t,--window", da.window, "rows of the opening Gaussian batch")
      ->required();
  datagen->add_option("-u,--update", da.update, "rows per later copula batch");
  datagen->add_option("-W,--windows", da.windows, "total number of batches");
  datagen->add_option("--dof", da.dof, "degrees of freedom of the t copula");
  datagen->add_option("-s,--seed", da.seed, "generator seed")->required();
  datagen->add_flag("--header", da.header, "write a column-name header line");

  BenchArgs ba;
  CLI::App* bench = app.add_subcommand("bench", "update vs full-recompute timings");
  bench->add_option("-n,--dim", ba.dims, "dims to sweep")->delimiter(',');
  bench->add_option("-d,--order", ba.orders, "orders to sweep")->delimiter(',');
  bench->add_option("-b,--block", ba.blocks, "block sizes to sweep")->delimiter(',');
  bench->add_option("-t,--window", ba.windows, "window lengths to sweep")->delimiter(',');
  bench->add_option("-u,--update", ba.updates, "update lengths to sweep")->delimiter(',');
  bench->add_option("-r,--reps", ba.reps, "measured repetitions per point")
      ->check(CLI::PositiveNumber);
  bench->add_option("-w,--workers", ba.workers, "worker threads");
  bench->add_option("-s,--seed", ba.seed, "generator seed");
  bench->add_option("--max-elements", ba.max_elements,
                    "skip grid points whose footprint exceeds this many doubles");
  bench->add_option("-o,--output", ba.output, "manifest path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // 0 is --help / --version
  }

  try {
    if (process->parsed()) return run_process(pa);
    if (datagen->parsed()) return run_datagen(da);
    if (bench->parsed()) return run_bench(ba);
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
