// Drives the built `cae` binary end to end.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "cae_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run cae(const std::string& args) {
  const fs::path log = workdir() / "stdout.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && '" CAE_BINARY "' " + args + " > '" + log.string() +
                          "' 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(log);
  return r;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("landscape prints minima counts and writes csv, svg and manifest") {
  auto r = cae("landscape --kernel coulomb --h 1 --free 1 --grid-min -6 --grid-max 6 --grid-step 0.01 --out l1.csv");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "local_minima=1\n"));
  CHECK(fs::exists(workdir() / "l1.csv"));
  CHECK(contains(slurp(workdir() / "l1.svg"), "<svg"));
  CHECK(contains(slurp(workdir() / "l1.csv.manifest.json"), "\"command\": \"landscape\""));

  r = cae("landscape --kernel gaussian --sigma 1 --h 1 --free 1 --out lg.csv");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "local_minima=3\n"));

  r = cae("landscape --kernel coulomb --h 1 --epsilon 1e-3 --free 2 --grid-step 0.1 --out l2.csv");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "global_minimum_cells=2\n"));
  CHECK(contains(slurp(workdir() / "l2.svg"), "<rect"));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cae("landscape --free 3 --out x.csv").code == 2);
  CHECK(cae("landscape --kernel laplace --out x.csv").code == 2);
  CHECK(cae("landscape --positives 1,a --out x.csv").code == 2);
  CHECK(cae("").code == 2);
  CHECK(cae("frobnicate").code == 2);
  CHECK(cae("descent --n 2 --h 2 --out d.csv").code == 2);
  CHECK(cae("generate --ckpt missing.ckpt --n 5 --out g.csv").code == 2);
  CHECK(cae("eval --gen missing.csv --test missing.csv --out k.csv").code == 2);
  CHECK(cae("train --data missing.csv --out-dir nowhere").code == 2);
  CHECK(cae("bound --N 1 --K 1 --xi 1 --lambda 1 --s 1 --u 1 --v 1 --t 1").code == 2);
  CHECK(cae("rerun --manifest missing.json").code == 2);
  CHECK(cae("--help").code == 0);
}

TEST_CASE("descent exit code reports the permutation match") {
  auto r = cae("descent --n 8 --h 2 --seed 7 --out d.csv");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "matched=yes"));
  CHECK(contains(slurp(workdir() / "d.csv"), "iter,energy,x0_0,x0_1"));
  r = cae("descent --n 8 --h 2 --seed 7 --kernel gaussian --out dg.csv");
  CHECK(r.code == 1);
  CHECK(contains(r.out, "matched=no"));
}

TEST_CASE("bound prints the hand example") {
  const auto r = cae("bound --N 1000 --K 1 --xi 1 --lambda 1 --s 0.1 --u 0.1 --v 0.1 --t 0.1 --out b.csv");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "probability 1.816e-04"));
  CHECK(contains(slurp(workdir() / "b.csv"), "threshold,probability,raw_sum"));
}

TEST_CASE("gradcheck default passes") {
  const auto r = cae("gradcheck");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "max_rel_error="));
}

TEST_CASE("small pipeline is deterministic and replayable from manifests") {
  std::ofstream(workdir() / "small.cfg") << "enc_widths=2,16,16,2\ndec_widths=2,16,16,2\niters=300\nbatch=32\nseed=5\n";
  REQUIRE(cae("make-data --kind grid --n 200 --seed 0 --out train.csv").code == 0);
  REQUIRE(cae("make-data --kind grid --n 500 --seed 1 --out test.csv").code == 0);
  REQUIRE(cae("train --config small.cfg --data train.csv --out-dir runA --quiet").code == 0);
  REQUIRE(cae("train --config small.cfg --data train.csv --out-dir runB --quiet").code == 0);
  for (const char* f : {"encoder.ckpt", "decoder.ckpt", "history.csv"})
    CHECK(slurp(workdir() / "runA" / f) == slurp(workdir() / "runB" / f));
  CHECK(contains(slurp(workdir() / "runA" / "config.txt"), "iters=300"));

  REQUIRE(cae("generate --ckpt runA/decoder.ckpt --n 500 --seed 3 --out genA.csv").code == 0);
  REQUIRE(cae("eval --gen genA.csv --test test.csv --out kdeA.csv --modes").code == 0);
  const auto kde = slurp(workdir() / "kdeA.csv");
  CHECK(contains(kde, "bandwidth,mean_loglik"));
  CHECK(contains(kde, "# best"));

  // replay every step from its manifest into fresh outputs
  REQUIRE(cae("rerun --manifest runA/manifest.json --set out-dir=runC --set quiet=true").code == 0);
  CHECK(slurp(workdir() / "runC" / "decoder.ckpt") == slurp(workdir() / "runA" / "decoder.ckpt"));
  REQUIRE(cae("rerun --manifest genA.csv.manifest.json --set out=genB.csv").code == 0);
  CHECK(slurp(workdir() / "genB.csv") == slurp(workdir() / "genA.csv"));
  REQUIRE(cae("rerun --manifest kdeA.csv.manifest.json --set out=kdeB.csv").code == 0);
  CHECK(slurp(workdir() / "kdeB.csv") == kde);
}

TEST_CASE("rerun reproduces a landscape and a descent") {
  REQUIRE(cae("landscape --kernel imq --h 1 --c 2 --out li.csv").code == 0);
  REQUIRE(cae("rerun --manifest li.csv.manifest.json --set out=li2.csv").code == 0);
  CHECK(slurp(workdir() / "li.csv") == slurp(workdir() / "li2.csv"));
  REQUIRE(cae("descent --n 6 --h 2 --seed 3 --iters 500 --out ds.csv").code <= 1);
  cae("rerun --manifest ds.csv.manifest.json --set out=ds2.csv");
  CHECK(slurp(workdir() / "ds.csv") == slurp(workdir() / "ds2.csv"));
}

TEST_CASE("nonfinite training loss exits with 3") {
  {
    std::ofstream huge(workdir() / "huge.csv");
    for (int i = 0; i < 20; ++i) huge << "1e300," << i << "\n";
  }
  std::ofstream(workdir() / "tiny.cfg") << "enc_widths=2,4,2\ndec_widths=2,4,2\niters=5\nbatch=8\n";
  const auto r = cae("train --config tiny.cfg --data huge.csv --out-dir hugerun --quiet");
  CHECK(r.code == 3);
  CHECK(contains(r.out, "iteration 1"));
}

TEST_CASE("make-data prior kind") {
  REQUIRE(cae("make-data --kind prior --h 3 --n 10 --seed 2 --out prior.csv").code == 0);
  const auto text = slurp(workdir() / "prior.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 10);
  CHECK(std::count(text.begin(), text.end(), ',') == 20);
}
