// End-to-end checks of the installed binary, driven through the shell.
// CUMSTREAM_BIN is injected by the build so the tests run the exact
// artifact that ships.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cumstream/serialize.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "cumstream_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args, const std::string& prefix = "") {
  const std::string cmd = prefix + CUMSTREAM_BIN " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream out;
  out << f.rdbuf();
  return out.str();
}

std::vector<nlohmann::json> json_lines(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::vector<nlohmann::json> out;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

}  // namespace

TEST_CASE("datagen writes the advertised stream shape") {
  const fs::path csv = scratch() / "gen.csv";
  const fs::path meta = scratch() / "gen.csv.meta.json";  // sidecar default
  const int code = run_cli("datagen -o " + csv.string() + " -n 3 -t 20 -u 5 -W 4 -s 9");
  CHECK(code == 0);

  const std::string body = slurp(csv);
  std::size_t lines = 0;
  for (char c : body) lines += c == '\n';
  CHECK(lines == 20 + 3 * 5);  // t + (W-1) * t_up

  const auto j = nlohmann::json::parse(slurp(meta));
  CHECK(j.at("dim") == 3);
  CHECK(j.at("window_len") == 20);
  CHECK(j.at("update_len") == 5);
  CHECK(j.at("windows") == 4);
  CHECK(j.at("seed") == 9);
  CHECK(j.at("rows") == 35);

  SUBCASE("the same seed reproduces the file byte for byte") {
    const fs::path again = scratch() / "gen2.csv";
    REQUIRE(run_cli("datagen -o " + again.string() + " -n 3 -t 20 -u 5 -W 4 -s 9") == 0);
    CHECK(slurp(again) == body);
    const fs::path other = scratch() / "gen3.csv";
    REQUIRE(run_cli("datagen -o " + other.string() + " -n 3 -t 20 -u 5 -W 4 -s 10") == 0);
    CHECK(slurp(other) != body);
  }

  SUBCASE("an optional header names the columns") {
    const fs::path hdr = scratch() / "gen_hdr.csv";
    REQUIRE(run_cli("datagen -o " + hdr.string() + " -n 3 -t 20 -u 5 -W 4 -s 9 --header") == 0);
    const std::string with = slurp(hdr);
    CHECK(with.substr(0, 9) == "x1,x2,x3\n");
    CHECK(with.substr(9) == body);
  }
}

TEST_CASE("process emits hand-checkable reports on a toy stream") {
  const fs::path csv = scratch() / "toy.csv";
  write_file(csv, "1\n2\n3\n4\n5\n6\n");
  const fs::path out = scratch() / "toy.jsonl";
  const int code =
      run_cli("process -i " + csv.string() + " -o " + out.string() + " -n 1 -t 4 -u 2");
  CHECK(code == 0);

  const auto reports = json_lines(out);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].at("window") == 1);
  CHECK(reports[1].at("window") == 2);
  CHECK(reports[0].at("rows") == 4);
  // Window 1 = rows {1,2,3,4}: mean 2.5, biased variance 1.25, zero skew,
  // fourth cumulant 2.5625 - 3 * 1.5625 = -2.125.
  CHECK(reports[0].at("norm_c1").get<double>() == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(reports[0].at("norm_c2").get<double>() == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(reports[0].at("nu").at("3").get<double>() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(reports[0].at("nu").at("4").get<double>() ==
        doctest::Approx(2.125 / (1.25 * 1.25)).epsilon(1e-10));
  // Window 2 = rows {3,4,5,6}: same shape, shifted mean.
  CHECK(reports[1].at("norm_c1").get<double>() == doctest::Approx(4.5).epsilon(1e-10));
  CHECK(reports[1].at("norm_c2").get<double>() == doctest::Approx(1.25).epsilon(1e-10));

  SUBCASE("a header line is skipped on request") {
    const fs::path hcsv = scratch() / "toy_hdr.csv";
    write_file(hcsv, "value\n1\n2\n3\n4\n5\n6\n");
    const fs::path hout = scratch() / "toy_hdr.jsonl";
    REQUIRE(run_cli("process --header -i " + hcsv.string() + " -o " + hout.string() +
                    " -n 1 -t 4 -u 2") == 0);
    CHECK(slurp(hout) == slurp(out));
  }
}

TEST_CASE("process is deterministic across reruns and worker settings") {
  const fs::path csv = scratch() / "det.csv";
  REQUIRE(run_cli("datagen -o " + csv.string() + " -n 4 -t 50 -u 10 -W 5 -s 31") == 0);

  const auto process_to = [&](const std::string& name, const std::string& prefix,
                              const std::string& extra) {
    const fs::path out = scratch() / name;
    REQUIRE(run_cli("process -i " + csv.string() + " -o " + out.string() +
                        " -n 4 -d 4 -t 50 -u 10 -b 2" + extra,
                    prefix) == 0);
    return slurp(out);
  };

  const std::string a = process_to("det_a.jsonl", "", " -w 2");
  const std::string b = process_to("det_b.jsonl", "", " -w 2");
  CHECK(a == b);

  // The environment override beats the flag; with itself it is stable.
  const std::string c = process_to("det_c.jsonl", "CUMSTREAM_WORKERS=3 ", " -w 1");
  const std::string d = process_to("det_d.jsonl", "CUMSTREAM_WORKERS=3 ", " -w 2");
  CHECK(c == d);
}

TEST_CASE("process can dump the cumulant tensors per window") {
  const fs::path csv = scratch() / "dump.csv";
  write_file(csv, "1\n2\n3\n4\n5\n6\n");
  const fs::path out = scratch() / "dump.jsonl";
  const fs::path dir = scratch() / "dumps";
  REQUIRE(run_cli("process -i " + csv.string() + " -o " + out.string() +
                  " -n 1 -t 4 -u 2 -d 2 --dump-cumulants " + dir.string()) == 0);
  CHECK(json_lines(out).size() == 2);

  for (int w = 1; w <= 2; ++w) {
    const auto j = nlohmann::json::parse(slurp(dir / ("window_" + std::to_string(w) + ".json")));
    CHECK(j.at("window") == w);
    CHECK(j.at("rows") == 4);
    REQUIRE(j.at("tensors").size() == 2);
    const cumstream::SymTensor c1 = cumstream::sym_tensor_from_json(j.at("tensors")[0].dump());
    const cumstream::SymTensor c2 = cumstream::sym_tensor_from_json(j.at("tensors")[1].dump());
    CHECK(c1.get({0}) == doctest::Approx(w == 1 ? 2.5 : 4.5).epsilon(1e-12));
    CHECK(c2.get({0, 0}) == doctest::Approx(1.25).epsilon(1e-12));
  }
}

TEST_CASE("bench writes a manifest for the grid including skipped points") {
  const fs::path out = scratch() / "bench.json";
  const int code = run_cli("bench -n 3,5 -d 3 -b 1,4 -t 300 -u 60 -r 2 -s 5 -o " + out.string());
  CHECK(code == 0);

  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j.at("reps") == 2);
  REQUIRE(j.at("results").size() == 4);  // {3,5} x {1,4}
  int measured = 0, skipped = 0;
  for (const auto& row : j.at("results")) {
    if (row.contains("skipped")) {
      ++skipped;  // b=4 > n=3
      continue;
    }
    ++measured;
    CHECK(row.at("measured_speedup").get<double>() > 0.0);
    CHECK(row.at("predicted_speedup").get<double>() ==
          doctest::Approx(300.0 / (2 * 60 + 5)).epsilon(1e-12));
    CHECK(row.at("frequency_hz").get<double>() > 0.0);
    CHECK(row.at("rows_processed") == 300 + 3 * 60);  // window + (reps+1) updates
    REQUIRE(row.at("timings").at("update_s").size() == 2);
    REQUIRE(row.at("timings").at("full_recompute_s").size() == 2);
    CHECK(row.at("workers").get<int>() >= 1);
  }
  CHECK(measured == 3);
  CHECK(skipped == 1);
}

TEST_CASE("usage problems exit 1, data problems exit 2") {
  const fs::path csv = scratch() / "errs.csv";
  write_file(csv, "1,2\n3,4\n5,6\n7,8\n");

  // Missing required flags / inconsistent shapes are usage errors.
  CHECK(run_cli("process -i " + csv.string() + " -t 2 -u 1") == 1);  // no -n
  CHECK(run_cli("process -i " + csv.string() + " -n 2 -t 2 -u 3") == 1);
  CHECK(run_cli("process -i " + csv.string() + " -n 2 -t 2 -u 1 -b 3") == 1);
  CHECK(run_cli("datagen -o - -n 2 -t 5") == 1);  // no seed
  CHECK(run_cli("nonsense") == 1);

  // Unreadable or malformed data is a data error.
  CHECK(run_cli("process -i " + (scratch() / "missing.csv").string() + " -n 2 -t 2 -u 1") == 2);
  const fs::path bad = scratch() / "bad.csv";
  write_file(bad, "1,2\n3,oops\n5,6\n7,8\n");
  CHECK(run_cli("process -i " + bad.string() + " -n 2 -t 4 -u 1") == 2);
  const fs::path ragged = scratch() / "ragged.csv";
  write_file(ragged, "1,2\n3\n5,6\n7,8\n");
  CHECK(run_cli("process -i " + ragged.string() + " -n 2 -t 4 -u 1") == 2);
  CHECK(run_cli("process -i " + csv.string() + " -n 2 -t 9 -u 1") == 2);  // short input

  // --help is not an error.
  CHECK(run_cli("--help >/dev/null") == 0);
  CHECK(run_cli("process --help >/dev/null") == 0);
}
