#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "umt/cli.hpp"

namespace umt {
namespace {

namespace fs = std::filesystem;
using testing::Fixture;
using testing::load_fixture;
using testing::read_file;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> with(std::vector<std::string> args, std::initializer_list<std::string> more) {
  args.insert(args.end(), more);
  return args;
}

Fixture on_input(Fixture f, const fs::path& input) {
  f.input = input;
  return f;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("umt-cli-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path file(const std::string& name, const std::string& content = {}) const {
    const fs::path p = path_ / name;
    if (!content.empty()) std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  fs::path path_;
};

class FixtureCli : public ::testing::TestWithParam<std::string> {};

TEST_P(FixtureCli, RunMatchesExpected) {
  const Fixture f = load_fixture(GetParam());
  const Outcome r = cli(with(f.cli_args("run"), {"-o", "-"}));
  EXPECT_EQ(r.code, f.exit) << r.err;
  if (f.expected) {
    EXPECT_EQ(r.out, read_file(*f.expected));
  }
}

TEST_P(FixtureCli, Deterministic) {
  const Fixture f = load_fixture(GetParam());
  const Outcome a = cli(with(f.cli_args("run"), {"-o", "-", "--force"}));
  const Outcome b = cli(with(f.cli_args("run"), {"-o", "-", "--force"}));
  EXPECT_EQ(a.code, b.code);
  EXPECT_EQ(a.out, b.out);
}

TEST_P(FixtureCli, RunVerifyAgreesWithVerify) {
  const Fixture f = load_fixture(GetParam());
  if (f.exit != 0) GTEST_SKIP() << "rejected fixture";
  TempDir dir;
  const std::string out = dir.file("out.model").string();
  const Outcome run = cli(with(f.cli_args("run"), {"-o", out, "--verify"}));
  EXPECT_EQ(run.code, kExitOk) << run.err;
  const Outcome verify = cli(with(f.cli_args("verify"), {"-o", out}));
  EXPECT_EQ(verify.code, kExitOk) << verify.err;
  EXPECT_NE(verify.out.find("holds"), std::string::npos);
  // run reports to stdout when the model goes to a file
  EXPECT_NE(run.out.find("holds"), std::string::npos);
}

TEST_P(FixtureCli, ExpectedModelVerifies) {
  const Fixture f = load_fixture(GetParam());
  if (!f.expected) GTEST_SKIP() << "no expected model";
  const Outcome r = cli(with(f.cli_args("verify"), {"-o", f.expected->string()}));
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST_P(FixtureCli, CheckAndPlan) {
  const Fixture f = load_fixture(GetParam());
  const Outcome check = cli(f.cli_args("check"));
  EXPECT_EQ(check.code, kExitOk) << check.err;
  EXPECT_EQ(check.out.rfind("transformation ", 0), 0u);
  const Outcome plan = cli(f.cli_args("plan"));
  EXPECT_EQ(plan.code, f.exit) << plan.err;
  EXPECT_EQ(plan.out.rfind("phase 1: ", 0), 0u);
}

INSTANTIATE_TEST_SUITE_P(All, FixtureCli, ::testing::ValuesIn(testing::fixture_names()),
                         [](const auto& info) {
                           std::string n = info.param;
                           for (char& c : n) if (c == '-') c = '_';
                           return n;
                         });

TEST(Cli, CheckListsKinds) {
  const Outcome r = cli(load_fixture("migration").cli_args("check"));
  EXPECT_EQ(r.out,
            "transformation Migrate: 3 constraint(s), 1 assumption(s)\n"
            "constraint C1: Creation\n"
            "constraint C2: Creation\n"
            "constraint C3: Creation\n"
            "assumption Asm1: ok\n");
}

TEST(Cli, RunReportGoesToStderrForStdout) {
  const Fixture f = load_fixture("migration");
  const Outcome r = cli(with(f.cli_args("run"), {"-o", "-", "--verify"}));
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, read_file(*f.expected));
  EXPECT_NE(r.err.find("assumption Asm1: ok"), std::string::npos);
  EXPECT_NE(r.err.find("constraint C3: holds"), std::string::npos);
}

TEST(Cli, RejectedPhase) {
  const Fixture f = load_fixture("transitive-closure");
  const Outcome r = cli(with(f.cli_args("run"), {"-o", "-"}));
  EXPECT_EQ(r.code, kExitRejected);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("(Graph, edges"), std::string::npos);
  const Outcome forced = cli(with(f.cli_args("run"), {"-o", "-", "--force"}));
  EXPECT_EQ(forced.code, kExitOk);
  EXPECT_NE(forced.err.find("warning: "), std::string::npos);
}

TEST(Cli, InvalidInputs) {
  TempDir dir;
  const Fixture f = load_fixture("reverse-edges");
  const std::string mm = f.metamodels[0].string();
  const std::string bad_spec = dir.file("bad.spec", "constraint on Edge: src = \n").string();
  EXPECT_EQ(cli({"run", "-m", mm, "-s", bad_spec, "-o", "-"}).code, kExitInvalid);
  const std::string unknown = dir.file("u.spec", "constraint on Edge: colour = 1\n").string();
  EXPECT_EQ(cli({"check", "-m", mm, "-s", unknown}).code, kExitInvalid);
  EXPECT_EQ(cli({"check", "-m", mm, "-s", (dir.file("missing.spec")).string()}).code,
            kExitInvalid);
  const std::string bad_model = dir.file("bad.model", "x : Nope\n").string();
  EXPECT_EQ(cli(with(on_input(f, bad_model).cli_args("run"), {"-o", "-"})).code, kExitInvalid);
  const std::string bad_mm = dir.file("bad.mm", "entity A extends B {}\n").string();
  EXPECT_EQ(cli({"check", "-m", bad_mm, "-s", f.spec.string()}).code, kExitInvalid);
  EXPECT_EQ(cli({"frobnicate", "-m", mm, "-s", f.spec.string()}).code, kExitInvalid);
  EXPECT_EQ(cli({"check", "-m", mm}).code, kExitInvalid);
  EXPECT_EQ(cli(f.cli_args("run")).code, kExitInvalid);
  const Fixture d = load_fixture("delete-nodes");
  EXPECT_EQ(cli({"check", "-m", d.metamodels[0].string(), "-s", d.spec.string()}).code,
            kExitInvalid);
  EXPECT_EQ(cli(with(d.cli_args("check"), {"--param", "other=1"})).code, kExitInvalid);
}

TEST(Cli, CyclicEntityOrder) {
  TempDir dir;
  const std::string mm = dir.file("ab.mm",
                                  "entity A { x : String; }\nentity B { y : String; }\n").string();
  const std::string spec = dir.file("ab.spec",
                                    "constraint on A: B->exists(b | b.y = x)\n"
                                    "constraint on B: A->exists(a | a.x = y)\n").string();
  const Outcome r = cli({"plan", "-m", mm, "-s", spec});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("cyclic entity order"), std::string::npos);
}

TEST(Cli, AssumptionFailure) {
  TempDir dir;
  const Fixture f = load_fixture("migration");
  const Fixture g = on_input(f, dir.file("in.model", read_file(*f.input) + "x : Node2\nx.id2 = \"z\"\n"));
  const Outcome r = cli(with(g.cli_args("run"), {"-o", "-"}));
  EXPECT_EQ(r.code, kExitAssumption);
  EXPECT_NE(r.err.find("assumption Asm1 fails"), std::string::npos);
  EXPECT_EQ(cli(g.cli_args("check")).code, kExitAssumption);
}

TEST(Cli, AssumptionWitness) {
  TempDir dir;
  const Fixture f = load_fixture("transitive-edges");
  const Fixture g = on_input(f, dir.file("in.model", read_file(*f.input) +
                                                       "x : Edge\nx : g.edges\na : x.src\nb : x.trg\n"));
  const Outcome r = cli(g.cli_args("check"));
  EXPECT_EQ(r.code, kExitAssumption);
  EXPECT_NE(r.err.find("assumption Asm2 fails for e1 = "), std::string::npos) << r.err;
}

TEST(Cli, VerifyFailure) {
  TempDir dir;
  const Fixture f = load_fixture("reverse-edges");
  const Outcome r = cli(with(f.cli_args("verify"), {"-o", f.input->string()}));
  EXPECT_EQ(r.code, kExitVerify);
  EXPECT_NE(r.err.find("fails for self = e"), std::string::npos) << r.err;
}

TEST(Cli, RuntimeError) {
  TempDir dir;
  const Fixture f = load_fixture("reverse-edges");
  const std::string spec = dir.file(
      "rt.spec", "constraint on Graph: Node->exists(n | n.name = nodes.name)\n").string();
  const Outcome r = cli({"run", "-m", f.metamodels[0].string(), "-s", spec, "-i",
                         f.input->string(), "-o", "-"});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, WritesOutputFile) {
  TempDir dir;
  const Fixture f = load_fixture("hello-world");
  const fs::path out = dir.file("hello.model");
  EXPECT_EQ(cli(with(f.cli_args("run"), {"-o", out.string()})).code, kExitOk);
  EXPECT_EQ(read_file(out), read_file(*f.expected));
}

}  // namespace
}  // namespace umt
