#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "scimap/io/table.hpp"

namespace fs = std::filesystem;
using scimap::cli::runCommand;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = runCommand(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(SCIMAP_FIXTURES) + "/" + name; }

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("scimap-cli-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

scimap::io::Table table(const fs::path& p, scimap::io::ArtifactHeader* h = nullptr) {
  return scimap::io::readTable(scimap::io::readFile(p), p.string(), h);
}

std::string headerValue(const scimap::io::ArtifactHeader& h, const std::string& key) {
  for (const auto& [k, v] : h.entries)
    if (k == key) return v;
  return {};
}

}  // namespace

TEST_CASE("exit statuses") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"stats"}).code == 2);
  CHECK(run({"mfas"}).code == 2);
  const auto dir = scratch("exit");
  scimap::io::writeFile(dir / "bad.jsonl", "not json\n");
  CHECK(run({"--out", dir.string(), "stats", (dir / "bad.jsonl").string()}).code == 1);
  CHECK(run({"--out", dir.string(), "stats", (dir / "missing.jsonl").string()}).code == 1);
  CHECK(run({"--out", dir.string(), "themes", fixture("sample_wos.txt")}).code == 2);
}

TEST_CASE("ingest then analyze") {
  const auto dir = scratch("ingest");
  const auto corpus = (dir / "corpus.dat").string();
  const auto r = run({"--out", dir.string(), "--format", "plaintext", "ingest", fixture("sample_wos.txt"), "-o", corpus});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(corpus));
  const auto ledger = table(dir / "corpus.screening.csv");
  CHECK(ledger.rows.size() == 2);
  CHECK(run({"--out", dir.string(), "stats", corpus}).code == 0);
  CHECK(fs::exists(dir / "summary.csv"));
  CHECK(run({"--out", dir.string(), "--format", "bibtex", "ingest", fixture("sample_wos.txt"), "-o", corpus}).code == 1);
}

TEST_CASE("amortize table command reproduces the worked example") {
  const auto dir = scratch("amortize");
  REQUIRE(run({"--out", dir.string(), "amortize", "--table", fixture("table_b1.csv")}).code == 0);
  scimap::io::ArtifactHeader h;
  const auto t = table(dir / "amortize.csv", &h);
  REQUIRE(t.rows.size() == 10);
  CHECK(headerValue(h, "reference_year") == "2000");
  CHECK(t.rows[0][5] == "5.1000");
  CHECK(t.rows[6][5] == "5.2500");
  CHECK(t.rows[9][5] == "5.0000");
}

TEST_CASE("mfas command reports the optimum and the exact bound") {
  const auto dir = scratch("mfas");
  REQUIRE(run({"--out", dir.string(), "mfas", "--graph", fixture("triangle.tsv"), "-t", "20", "--seed", "7"}).code == 0);
  scimap::io::ArtifactHeader h;
  const auto rep = table(dir / "mfas_report.csv", &h);
  std::map<std::string, std::string> kv;
  for (const auto& row : rep.rows) kv[row[0]] = row[1];
  CHECK(kv["best_size"] == "1");
  CHECK(kv["oracle_optimum"] == "1");
  CHECK(kv["reference_bound"] == "0.99999904632568359375");
  CHECK(headerValue(h, "seed") == "7");
  CHECK(headerValue(h, "rng") == "mt19937_64+splitmix64");

  const auto unseeded = run({"--out", dir.string(), "mfas", "--graph", fixture("triangle.tsv")});
  CHECK(unseeded.code == 0);
  CHECK(unseeded.out.find("seed not given; using ") != std::string::npos);
}

TEST_CASE("configuration precedence") {
  const auto dir = scratch("config");
  const auto cfg = dir / "scimap.toml";
  scimap::io::writeFile(cfg, "out = \"" + (dir / "from-config").generic_string() + "\"\n");
  const auto b1 = fixture("table_b1.csv");

  ::setenv("SCIMAP_OUT", (dir / "from-env").string().c_str(), 1);
  CHECK(run({"amortize", "--table", b1}).code == 0);
  CHECK(fs::exists(dir / "from-env" / "amortize.csv"));
  CHECK(run({"--config", cfg.string(), "amortize", "--table", b1}).code == 0);
  CHECK(fs::exists(dir / "from-config" / "amortize.csv"));
  CHECK(run({"--config", cfg.string(), "--out", (dir / "from-flag").string(), "amortize", "--table", b1}).code == 0);
  CHECK(fs::exists(dir / "from-flag" / "amortize.csv"));
  ::unsetenv("SCIMAP_OUT");
}

TEST_CASE("repeated invocations are byte-identical") {
  const auto a = scratch("det-a");
  const auto b = scratch("det-b");
  for (const auto& d : {a, b})
    REQUIRE(run({"--out", d.string(), "mfas-calibrate", "--graph", fixture("triangle.tsv"), "--trials", "50", "--seed", "3"}).code == 0);
  for (const char* f : {"calibration_trials.csv", "calibration_curve.csv", "calibration_summary.csv"})
    CHECK(scimap::io::readFile(a / f) == scimap::io::readFile(b / f));
}
