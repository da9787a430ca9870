// Drives the built binary end to end; argv[1] = binary path.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAIL: " << what << "\n";
  }
}

int run(const std::string& cmd) {
  int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <binary>\n";
    return 2;
  }
  std::string bin = argv[1];
  fs::path dir = fs::temp_directory_path() / "crn_cli_tests";
  fs::remove_all(dir);
  fs::create_directories(dir);

  spit(dir / "binding.crn", "S1 + S2 <-> S3 @ 1, 1\n");
  spit(dir / "gene.crn",
       "S1 <-> S2 @ 2, 1\nS1 -> S1 + S3 @ 5\nS3 -> 0 @ 1\n");
  spit(dir / "oneway.crn", "S1 -> S2 @ 1\n");
  spit(dir / "autocat.crn", "S1 + S2 -> 2 S1 @ 1\nS1 -> S2 @ 1\n");
  spit(dir / "sym.crn", "S1 + S2 <-> 2 S3 @ 1, 1\n");
  spit(dir / "bad.crn", "S1 @ oops\n");
  std::string d = dir.string();

  // analyze: success and byte-identical reruns
  expect(run(bin + " analyze " + d + "/binding.crn --out " + d + "/a1") == 0,
         "analyze exits 0");
  expect(run(bin + " analyze " + d + "/binding.crn --out " + d + "/a2") == 0,
         "analyze rerun exits 0");
  expect(fs::exists(dir / "a1/analysis.json"), "analysis.json written");
  expect(slurp(dir / "a1/analysis.json") == slurp(dir / "a2/analysis.json"),
         "analyze reruns are byte-identical");
  std::string analysis = slurp(dir / "a1/analysis.json");
  expect(analysis.find("\"deficiency\": 0") != std::string::npos,
         "binding network deficiency 0");
  expect(analysis.find("\"weakly_reversible\": true") != std::string::npos,
         "binding network weakly reversible");

  // exit-code contract
  expect(run(bin + " analyze " + d + "/bad.crn --out " + d + "/b") == 2,
         "parse error exits 2");
  expect(run(bin + " moments " + d + "/autocat.crn --target 1,0 --cap 50 --out " +
             d + "/c") == 3,
         "closure cap exits 3");
  expect(run(bin + " cbn " + d + "/oneway.crn --beta 3 --out " + d + "/n") == 4,
         "no certificate exits 4");
  expect(run(bin + " cbn " + d + "/sym.crn --beta 0,1 --lambda 1,2,2 --out " +
             d + "/e") == 5,
         "empty fiber exits 5");

  // moments: reduced gene system reproduces the known steady means
  expect(run(bin + " moments " + d + "/gene.crn --target 1,0 --target 2,0"
             " --target 1,1 --target 0,1 --target 0,2 --conserve 1,1,0=10"
             " --out " + d + "/m") == 0,
         "gene moments exit 0");
  std::string moments = slurp(dir / "m/moments.json");
  expect(moments.find("\"num\": \"10\"") != std::string::npos &&
             moments.find("\"num\": \"50\"") != std::string::npos,
         "steady state contains 10/3 and 50/3");

  // cbn: binding network golden values
  expect(run(bin + " cbn " + d + "/binding.crn --beta 2,2 --lambda 1,1,1"
             " --out " + d + "/z") == 0,
         "binding cbn exit 0");
  expect(fs::exists(dir / "z/z_table.csv"), "z_table.csv written");
  std::string ztab = slurp(dir / "z/z_table.csv");
  expect(ztab.find("2,2,7/4,1.75") != std::string::npos, "Z(2,2) = 7/4 in csv");
  std::string cbn = slurp(dir / "z/cbn.json");
  expect(cbn.find("\"num\": \"6\"") != std::string::npos &&
             cbn.find("\"den\": \"7\"") != std::string::npos,
         "conditional mean 6/7 in report");

  // simulate: seed determinism
  expect(run(bin + " simulate " + d + "/gene.crn --init 1,9,0 --horizon 5"
             " --trajectories 200 --seed 11 --out " + d + "/s1") == 0,
         "simulate exit 0");
  run(bin + " simulate " + d + "/gene.crn --init 1,9,0 --horizon 5"
      " --trajectories 200 --seed 11 --out " + d + "/s2");
  run(bin + " simulate " + d + "/gene.crn --init 1,9,0 --horizon 5"
      " --trajectories 200 --seed 12 --out " + d + "/s3");
  expect(slurp(dir / "s1/ensemble.csv") == slurp(dir / "s2/ensemble.csv"),
         "same seed, byte-identical ensemble");
  expect(slurp(dir / "s1/ensemble.csv") != slurp(dir / "s3/ensemble.csv"),
         "different seed, different ensemble");

  // CRN_SEED is the default seed
  run("CRN_SEED=11 " + bin + " simulate " + d + "/gene.crn --init 1,9,0"
      " --horizon 5 --trajectories 200 --out " + d + "/s4");
  expect(slurp(dir / "s1/ensemble.csv") == slurp(dir / "s4/ensemble.csv"),
         "CRN_SEED env matches --seed");

  // compare: passes with the correct model, fails with a wrong lambda
  expect(run(bin + " compare " + d + "/gene.crn --target 1,0 --target 0,1"
             " --conserve 1,1,0=10 --trajectories 4000 --horizon 25 --seed 7"
             " --out " + d + "/k1") == 0,
         "gene compare passes");
  expect(run(bin + " compare " + d + "/binding.crn --lambda 1,1,1 --beta 4,4"
             " --trajectories 4000 --horizon 40 --seed 7 --out " + d +
             "/k2") == 0,
         "binding compare passes");
  expect(run(bin + " compare " + d + "/binding.crn --lambda 1,1,9 --beta 4,4"
             " --trajectories 4000 --horizon 40 --seed 7 --out " + d +
             "/k3") == 6,
         "wrong lambda compare exits 6");

  if (failures == 0) std::cout << "cli tests passed\n";
  return failures == 0 ? 0 : 1;
}
