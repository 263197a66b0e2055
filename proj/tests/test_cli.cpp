// Golden-file and exit-code checks for the command line tool.
// Usage: cli_tests <path-to-cli-binary> <path-to-golden-dir>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "nilgeo/ball_enum.hpp"
#include "nilgeo/group.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs the command with stderr discarded and captures stdout.
RunResult run_command(const std::string& command) {
  RunResult result;
  FILE* pipe = ::popen((command + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0)
    result.output.append(buffer, got);
  const int status = ::pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int failures = 0;

void check(bool ok, const std::string& name, const std::string& detail = "") {
  if (ok) {
    std::cout << "ok - " << name << "\n";
  } else {
    ++failures;
    std::cout << "FAIL - " << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
  }
}

std::string quoted(const std::string& path) { return "\"" + path + "\""; }

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: cli_tests <cli-binary> <golden-dir>\n";
    return 1;
  }
  const std::string cli = quoted(argv[1]);
  const std::filesystem::path golden_dir = argv[2];

  // Each pinned invocation must reproduce its golden file byte for byte.
  const std::vector<std::pair<std::string, std::string>> golden_cases = {
      {"growth --group H3 --nmax 2", "growth_h3_n2.csv"},
      {"volume --group H3", "volume_h3.txt"},
      {"cone --omega1 \"0,0;1,0\"", "cone_pair.txt"},
      {"shape --group H3 --nmax 4", "shape_h3.json"},
      {"shape --group H3 --nmax 4 --format svg", "shape_h3.svg"},
      {"converge --group H3 --nmax 5", "converge_h3_n5.csv"},
      {"bm --nmax 4", "bm_n4.json"},
      {"slowspeed", "slowspeed.json"},
      {"dido --group H3 --point \"1/2 1/2\"", "dido_h3.txt"},
      {"ccdist --group H3 --point \"1 0 0\"", "ccdist_h3.txt"},
      {"wordlen --group H3 --element \"0 0 1\"", "wordlen_h3.txt"},
  };
  for (const auto& [args, file] : golden_cases) {
    const RunResult got = run_command(cli + " " + args);
    const std::string want = read_file(golden_dir / file);
    const bool ok = got.exit_code == 0 && !want.empty() && got.output == want;
    check(ok, "golden " + file,
          got.exit_code != 0 ? "exit " + std::to_string(got.exit_code) : "output differs");
  }

  // Diagnostics must land on the documented exit codes.
  const std::vector<std::pair<std::string, int>> error_cases = {
      {"growth --group H4", 2},
      {"volume --group H3xZ", 2},
      {"growth --group H3 --format yaml", 2},
      {"wordlen --group H3 --element \"0 0 1 7\"", 2},
      {"", 2},
      {"wordlen --group H3 --element \"0 0 25\" --nmax 10", 3},
      {"volume --group H5 --tol 1e-12", 4},
  };
  for (const auto& [args, want_code] : error_cases) {
    const RunResult got = run_command(cli + " " + args);
    check(got.exit_code == want_code, "exit code " + std::to_string(want_code) + " for '" + args + "'",
          "got " + std::to_string(got.exit_code));
  }

  // Identical flags must give byte-identical output, independent of worker count.
  {
    const RunResult a = run_command(cli + " growth --group H3 --nmax 6 --workers 1");
    const RunResult b = run_command(cli + " growth --group H3 --nmax 6 --workers 4");
    const RunResult c = run_command(cli + " growth --group H3 --nmax 6 --workers 1");
    check(a.exit_code == 0 && a.output == b.output, "growth deterministic across workers");
    check(a.output == c.output, "growth deterministic across runs");
    const RunResult d = run_command(cli + " converge --group H3 --nmax 4 --workers 1");
    const RunResult e = run_command(cli + " converge --group H3 --nmax 4 --workers 4");
    check(d.exit_code == 0 && d.output == e.output, "converge deterministic across workers");
  }

  const std::filesystem::path tmp_dir = std::filesystem::temp_directory_path();

  // A generators file listing the standard set must reproduce the standard run.
  {
    const nilgeo::GroupSpec h3 = nilgeo::preset_h3();
    const std::vector<nilgeo::Element> standard = nilgeo::standard_generators(h3);
    const std::filesystem::path gens_path = tmp_dir / "cli_gens_h3.txt";
    {
      std::ofstream out(gens_path);
      out << "# standard generators\n";
      for (const auto& e : standard) out << nilgeo::format_element(e) << "\n";
    }
    const RunResult from_file =
        run_command(cli + " growth --group H3 --gens " + quoted(gens_path.string()) + " --nmax 3");
    const RunResult standard_run = run_command(cli + " growth --group H3 --nmax 3");
    check(from_file.exit_code == 0 && from_file.output == standard_run.output,
          "generators file matches standard set");
    std::filesystem::remove(gens_path);
  }

  // A group spec file must behave exactly like the named preset.
  {
    const std::filesystem::path group_path = tmp_dir / "cli_group_h3.txt";
    {
      std::ofstream out(group_path);
      out << nilgeo::format_group_spec(nilgeo::preset_h3());
    }
    const RunResult from_file =
        run_command(cli + " growth --group " + quoted(group_path.string()) + " --nmax 3");
    const RunResult preset_run = run_command(cli + " growth --group H3 --nmax 3");
    check(from_file.exit_code == 0 && from_file.output == preset_run.output,
          "group spec file matches preset");
    std::filesystem::remove(group_path);
  }

  // --out must write the file and keep stdout quiet.
  {
    const std::filesystem::path out_path = tmp_dir / "cli_volume_out.txt";
    const RunResult run =
        run_command(cli + " volume --group H3 --out " + quoted(out_path.string()));
    check(run.exit_code == 0 && run.output.empty() && read_file(out_path) == "31/72\n",
          "--out writes the result file");
    std::filesystem::remove(out_path);
  }

  if (failures > 0) {
    std::cout << failures << " case(s) failed\n";
    return 1;
  }
  std::cout << "all cli cases passed\n";
  return 0;
}
