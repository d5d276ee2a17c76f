#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string bin() {
  const char* b = std::getenv("HC2_BIN");
  REQUIRE(b != nullptr);
  return b;
}

fs::path work() {
  const char* w = std::getenv("HC2_WORK");
  REQUIRE(w != nullptr);
  fs::create_directories(w);
  return w;
}

int run(const std::string& args) {
  std::string cmd = bin() + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("count writes the table and a manifest") {
  fs::path out = work() / "counts20.csv";
  fs::remove(out);
  fs::remove(out.string() + ".manifest.json");
  CHECK(run("count --n 20 --bridges --out " + out.string()) == 0);
  std::string csv = slurp(out);
  CHECK(csv.find("n,c_n,b_n") == 0);
  CHECK(csv.find("20,20114,1722") != std::string::npos);
  CHECK(csv.find("3,6,1") != std::string::npos);
  CHECK(fs::exists(out.string() + ".manifest.json"));
  std::string manifest = slurp(out.string() + ".manifest.json");
  CHECK(manifest.find("fnv1a64") != std::string::npos);
}

TEST_CASE("usage and guard errors use exit code 2") {
  CHECK(run("count --n 0 --out " + (work() / "x.csv").string() + " --force") == 2);
  CHECK(run("count --out y.csv") == 2);           // missing --n
  CHECK(run("count --n 50 --out " + (work() / "x50.csv").string()) == 2);  // needs --extended
  CHECK(run("definitely-not-a-command") == 2);
}

TEST_CASE("outputs are append-safe without --force") {
  fs::path out = work() / "protected.csv";
  {
    std::ofstream f(out);
    f << "sentinel\n";
  }
  CHECK(run("count --n 3 --out " + out.string()) == 2);
  CHECK(slurp(out) == "sentinel\n");
  CHECK(run("count --n 3 --out " + out.string() + " --force") == 0);
  CHECK(slurp(out).find("n,c_n") == 0);
}

TEST_CASE("bounds pipeline over a counts table") {
  fs::path table = work() / "table16.csv";
  CHECK(run("count --n 16 --bridges --out " + table.string() + " --force") == 0);
  fs::path rep = work() / "fekete16.json";
  CHECK(run("bounds --fekete --n 16 --table " + table.string() + " --out " +
            rep.string() + " --force") == 0);
  std::string json = slurp(rep);
  CHECK(json.find("\"method\": \"fekete\"") != std::string::npos);
  CHECK(json.find("mu_upper") != std::string::npos);
  CHECK(json.find("mu_lower") != std::string::npos);

  fs::path alm = work() / "alm.json";
  CHECK(run("bounds --alm --m 4 --n 12 --out " + alm.string() + " --force") == 0);
  CHECK(slurp(alm).find("\"method\": \"alm\"") != std::string::npos);

  fs::path thr = work() / "thr.json";
  CHECK(run("bounds --lambda --mu 1.5883 --out " + thr.string() + " --force") == 0);
  CHECK(slurp(thr).find("5.36") != std::string::npos);

  CHECK(run("bounds --fekete --alm --out " + (work() / "z.json").string()) == 2);
}

TEST_CASE("classify handles the format and independence errors") {
  fs::path grid = work() / "grid.txt";
  {
    std::ofstream f(grid);
    f << "....\n....\n....\n....\n";
  }
  fs::path wout = work() / "witness.json";
  CHECK(run("classify --in " + grid.string() + " --out " + wout.string() +
            " --force") == 0);
  CHECK(slurp(wout).find("fault_line") != std::string::npos);

  {
    std::ofstream f(grid);
    f << "o.o.\n.o.o\no.o.\n.o.o\n";
  }
  CHECK(run("classify --in " + grid.string() + " --out " + wout.string() +
            " --force") == 0);
  CHECK(slurp(wout).find("cross") != std::string::npos);

  {
    std::ofstream f(grid);
    f << "oo\n..\n";
  }
  CHECK(run("classify --in " + grid.string() + " --out " + wout.string() +
            " --force") == 4);
  {
    std::ofstream f(grid);
    f << "ox\n..\n";
  }
  CHECK(run("classify --in " + grid.string() + " --out " + wout.string() +
            " --force") == 4);
}

TEST_CASE("simulate is reproducible from the seed") {
  fs::path a = work() / "trace_a.csv";
  fs::path b = work() / "trace_b.csv";
  std::string args = " --region torus:6 --lambda 2 --steps 4000 --seed 99 "
                     "--record-every 250 --force --out ";
  CHECK(run("simulate" + args + a.string()) == 0);
  CHECK(run("simulate" + args + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("step,occupancy,even_minus_odd,class") == 0);

  CHECK(fs::exists(a.string() + ".manifest.json"));
  fs::path zero = work() / "trace_zero.csv";
  CHECK(run("simulate --region torus:4 --steps 0 --force --out " +
            zero.string()) == 0);
  CHECK(slurp(zero) == "step,occupancy,even_minus_odd,class\n");
}

TEST_CASE("conductance respects the state cap") {
  fs::path rep = work() / "cond.json";
  CHECK(run("conductance --region grid:2x3 --lambda 3/2 --out " + rep.string() +
            " --force") == 0);
  CHECK(slurp(rep).find("\"gap\"") != std::string::npos);
  CHECK(run("conductance --region grid:5x5 --lambda 1 --state-cap 100 --out " +
            (work() / "cap.json").string() + " --force") == 3);
}

TEST_CASE("config file supplies defaults") {
  fs::path cfg = work() / "config.json";
  {
    std::ofstream f(cfg);
    f << R"({"count": {"n": 5, "out": ")" << (work() / "cfg_counts.csv").string()
      << R"("}})";
  }
  fs::remove(work() / "cfg_counts.csv");
  CHECK(run("count --config " + cfg.string() + " --force") == 0);
  CHECK(slurp(work() / "cfg_counts.csv").find("5,") != std::string::npos);
  // explicit flags beat config values
  CHECK(run("count --config " + cfg.string() + " --n 2 --out " +
            (work() / "cfg2.csv").string() + " --force") == 0);
  std::string csv = slurp(work() / "cfg2.csv");
  CHECK(csv.find("2,4") != std::string::npos);
  CHECK(csv.find("5,") == std::string::npos);

  {
    std::ofstream f(cfg);
    f << R"({"count": {"bogus": 1}})";
  }
  CHECK(run("count --config " + cfg.string() + " --n 2") == 4);
}

TEST_CASE("alm memory cap env var maps to the resource exit code") {
  std::string cmd = "HC2_ALM_MAX_BYTES=1024 " + bin() +
                    " bounds --alm --m 10 --n 22 --out " +
                    (work() / "capped.json").string() +
                    " --force >/dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 3);
}

TEST_CASE("region specs parse for rectangles and tori") {
  CHECK(run("simulate --region grid:3x5 --steps 10 --force --out " +
            (work() / "r1.csv").string()) == 0);
  CHECK(run("simulate --region torus:4x6 --steps 10 --force --out " +
            (work() / "r2.csv").string()) == 0);
  CHECK(run("simulate --region torus:3 --steps 10 --force --out " +
            (work() / "r3.csv").string()) == 4);  // odd torus side
  CHECK(run("simulate --region blob:4 --steps 10 --force --out " +
            (work() / "r4.csv").string()) == 4);
}

TEST_CASE("peierls reports the cutoff") {
  fs::path rep = work() / "peierls.json";
  CHECK(run("peierls --lambda 11 --mu 1.5884 --out " + rep.string() +
            " --force") == 0);
  CHECK(slurp(rep).find("\"cutoff\"") != std::string::npos);
}
