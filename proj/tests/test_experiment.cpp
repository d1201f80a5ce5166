// Copyright 2026 The cvortho Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sys/wait.h>

#include "cvortho/experiment.hpp"
#include "cvortho/serialization.hpp"

namespace cvortho {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path fresh_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("cvortho_exp_" + name);
  fs::remove_all(dir);
  return dir;
}

bool mentions(const ValidationReport& r, const std::string& needle) {
  for (const auto& v : r.violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

// Every regular file except the manifest itself must be listed, and every
// listed file must exist with the recorded checksum.
void expect_manifest_complete(const fs::path& dir, const json& manifest) {
  std::set<std::string> listed;
  for (const auto& f : manifest["files"]) {
    const std::string rel = f["path"];
    listed.insert(rel);
    ASSERT_TRUE(fs::exists(dir / rel)) << rel;
    EXPECT_EQ(f["sha256"], sha256_hex(dir / rel)) << rel;
  }
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir).generic_string();
    if (rel == "manifest.json") continue;
    EXPECT_TRUE(listed.count(rel)) << "orphan " << rel;
  }
}

int exit_code(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Validate, AcceptsDefaults) {
  const auto r = validate_config({{"experiment", "orthogonalize"}});
  EXPECT_TRUE(r.ok()) << r.str();
  EXPECT_EQ(r.str(), "OK");
}

TEST(Validate, RejectsSmallTruncation) {
  const auto r = validate_config({{"experiment", "orthogonalize"}, {"trunc", 1}});
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "trunc"));
}

TEST(Validate, RejectsBalancedNumberScheme) {
  const auto r = validate_config(
      {{"experiment", "number_scheme"},
       {"scheme", {{"operator", "number"}, {"theta", 0.7853981633974483}}}});
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "singular"));
}

TEST(Validate, ListsEveryViolation) {
  const auto r = validate_config({{"experiment", "nonsense"},
                                  {"trunc", 1},
                                  {"eta", 2.0},
                                  {"unknown_key", true}});
  EXPECT_GE(r.violations.size(), 4u) << r.str();
  EXPECT_TRUE(mentions(r, "eta"));
  EXPECT_TRUE(mentions(r, "unknown_key"));
  EXPECT_THROW(parse_config({{"trunc", 1}}), PreconditionError);
}

TEST(Validate, CoherentTailTooLarge) {
  const auto r = validate_config({{"experiment", "orthogonalize"},
                                  {"trunc", 10},
                                  {"input_state", {{"alpha", 3.0}}}});
  EXPECT_FALSE(r.ok());
}

TEST(Run, OrthogonalizeWritesReportAndManifest) {
  const auto dir = fresh_dir("orth");
  auto cfg = parse_config({{"experiment", "orthogonalize"},
                           {"output_dir", dir.string()}});
  const auto res = run(cfg);
  EXPECT_TRUE(res.passed);
  EXPECT_LT(res.report["overlap_abs"].get<double>(), 1e-10);
  EXPECT_GT(res.report["fidelity_displaced_fock1"].get<double>(), 1 - 1e-8);
  ASSERT_TRUE(fs::exists(dir / "manifest.json"));
  EXPECT_EQ(read_json_file(dir / "manifest.json"), res.manifest);
  EXPECT_EQ(res.manifest["config_echo"]["experiment"], "orthogonalize");
  EXPECT_TRUE(res.manifest["versions"].contains("cvortho"));
  expect_manifest_complete(dir, res.manifest);
}

TEST(Run, PhysicalSchemesPass) {
  const auto d1 = fresh_dir("phys");
  const auto res = run(parse_config(
      {{"experiment", "orthogonalize"},
       {"scheme", {{"physical", true}}},
       {"output_dir", d1.string()}}));
  EXPECT_TRUE(res.passed) << res.report.dump();
  EXPECT_LT(res.report["overlap_abs"].get<double>(), 1e-8);
  const auto d2 = fresh_dir("num");
  const auto num = run(parse_config({{"experiment", "number_scheme"},
                                     {"scheme", {{"operator", "number"}}},
                                     {"output_dir", d2.string()}}));
  EXPECT_TRUE(num.passed) << num.report.dump();
  expect_manifest_complete(d2, num.manifest);
}

TEST(Run, QubitWignerWritesFourGrids) {
  const auto dir = fresh_dir("qubit");
  const auto res = run(parse_config(
      {{"experiment", "qubit_wigner"},
       {"eta", 0.6},
       {"grid", {{"nx", 61}, {"np", 61}}},
       {"output_dir", dir.string()}}));
  EXPECT_TRUE(res.passed);
  int grids = 0;
  for (const auto& f : res.manifest["files"]) {
    if (f["kind"] == "wigner-grid") {
      ++grids;
      const auto w = read_wigner_grid(dir / f["path"].get<std::string>());
      EXPECT_EQ(w.grid.nx, 61);
      EXPECT_NEAR(integrate(w), 1.0, 1e-3);
    }
  }
  EXPECT_EQ(grids, 4);
  expect_manifest_complete(dir, res.manifest);
}

TEST(Run, TomographyIsDeterministic) {
  const json doc = {{"experiment", "tomography"},
                    {"trunc", 20},
                    {"sampling", {{"phases", 4}, {"samples_per_phase", 2000}}}};
  std::vector<json> manifests;
  for (const char* name : {"tomo_a", "tomo_b"}) {
    auto d = doc;
    const auto dir = fresh_dir(name);
    d["output_dir"] = dir.string();
    const auto res = run(parse_config(d));
    expect_manifest_complete(dir, res.manifest);
    manifests.push_back(res.manifest["files"]);
  }
  ASSERT_EQ(manifests[0].size(), manifests[1].size());
  for (std::size_t i = 0; i < manifests[0].size(); ++i) {
    EXPECT_EQ(manifests[0][i]["path"], manifests[1][i]["path"]);
    EXPECT_EQ(manifests[0][i]["sha256"], manifests[1][i]["sha256"])
        << manifests[0][i]["path"];
  }
}

TEST(Sha256, KnownDigest) {
  const auto dir = fresh_dir("sha");
  fs::create_directories(dir);
  std::ofstream(dir / "abc.txt") << "abc";
  EXPECT_EQ(sha256_hex(dir / "abc.txt"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, ExitCodes) {
  const std::string cli = CVORTHO_CLI_PATH;
  const auto dir = fresh_dir("cli");
  fs::create_directories(dir);
  write_json_file(dir / "good.json", {{"experiment", "orthogonalize"}});
  write_json_file(dir / "bad.json",
                  {{"experiment", "orthogonalize"}, {"trunc", 1}});
  EXPECT_EQ(exit_code(cli + " validate " + (dir / "good.json").string()), 0);
  EXPECT_EQ(exit_code(cli + " validate " + (dir / "bad.json").string()), 1);
  EXPECT_EQ(exit_code(cli + " run " + (dir / "bad.json").string()), 1);
  const auto out = dir / "out";
  EXPECT_EQ(exit_code(cli + " run " + (dir / "good.json").string() +
                      " --output-dir " + out.string() + " --seed 7"),
            0);
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
  EXPECT_EQ(exit_code(cli + " verify"), 0);
}

}  // namespace
}  // namespace cvortho
