#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cli.hpp"
#include "qdesign/design.hpp"

namespace fs = std::filesystem;
using qdesign::cli::run;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qdesign_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, Gbinom) {
  const auto r = run({"gbinom", "--v", "6", "--k", "3", "--q", "2"});
  EXPECT_EQ(r.exit_status, 0);
  EXPECT_EQ(r.text, "1395\n");
  ASSERT_TRUE(r.json);
  EXPECT_EQ((*r.json)["value"], 1395);
  const auto j = run({"--json", "gbinom", "--v", "6", "--k", "3", "--q", "2"});
  EXPECT_EQ(qdesign::cli::render(j), j.json->dump(1) + "\n");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).exit_status, 2);
  EXPECT_EQ(run({"gbinom", "--v", "6", "--q", "2"}).exit_status, 2);
  EXPECT_EQ(run({"no-such-command"}).exit_status, 2);
  EXPECT_EQ(run({"--threads", "0", "gbinom", "--v", "6", "--k", "3", "--q", "2"}).exit_status, 2);
  EXPECT_EQ(run({"gbinom", "--v", "6", "--k", "3", "--q", "6"}).exit_status, 2);
  EXPECT_EQ(run({"verify", "--in", "/nonexistent/design.json"}).exit_status, 2);
  EXPECT_EQ(run({"build-gdd", "--m", "2", "--l", "3", "--k", "3", "--q", "2", "--select", "1,1=1", "--out", "x"})
                .exit_status,
            2);
}

TEST(Cli, BuildAndVerify) {
  TempDir t;
  const auto b = run({"build-gdd", "--m", "2", "--l", "3", "--k", "3", "--q", "2", "--select", "2,3=1", "--out",
                      t / "g.json"});
  ASSERT_EQ(b.exit_status, 0) << b.log;
  EXPECT_EQ((*b.json)["blocks"], 504);
  const auto v = run({"verify", "--in", t / "g.json"});
  EXPECT_EQ(v.exit_status, 0) << v.log;
  EXPECT_TRUE((*v.json)["pass"].get<bool>());
  EXPECT_NE(v.text.find("PASS"), std::string::npos);
}

TEST(Cli, VerifyFailureExitsOne) {
  TempDir t;
  qdesign::DesignInstance d;
  d.q = 2;
  d.v = 4;
  d.K = {3};
  d.claimed_lambda = 3;
  const qdesign::VectorSpace V(2, 4);
  std::vector<qdesign::ExplicitBlock> blocks;
  qdesign::Grassmannian(V, 3).for_each([&](std::uint64_t i, const qdesign::Subspace& s) {
    if (i) blocks.push_back({s, 1});
  });
  d.blocks = blocks;
  qdesign::write_design_file(t / "d.json", d);
  const auto v = run({"verify", "--in", t / "d.json", "--witnesses", "2"});
  EXPECT_EQ(v.exit_status, 1);
  EXPECT_FALSE((*v.json)["pass"].get<bool>());
  EXPECT_EQ((*v.json)["witnesses"].size(), 2u);
}

TEST(Cli, JsonIsByteStableAcrossThreads) {
  TempDir t;
  ASSERT_EQ(run({"build-gdd", "--m", "2", "--l", "4", "--k", "3", "--q", "2", "--select", "2,1=1", "--out",
                 t / "g.json"})
                .exit_status,
            0);
  const auto a = run({"--json", "--threads", "1", "verify", "--in", t / "g.json"});
  const auto b = run({"--json", "--threads", "8", "verify", "--in", t / "g.json"});
  const auto c = run({"--json", "--threads", "1", "verify", "--in", t / "g.json"});
  EXPECT_EQ(qdesign::cli::render(a), qdesign::cli::render(b));
  EXPECT_EQ(qdesign::cli::render(a), qdesign::cli::render(c));
  const auto s1 = run({"--json", "verify", "--in", t / "g.json", "--sample", "200", "--seed", "5"});
  const auto s2 = run({"--json", "--threads", "3", "verify", "--in", t / "g.json", "--sample", "200", "--seed", "5"});
  EXPECT_EQ(qdesign::cli::render(s1), qdesign::cli::render(s2));
}

TEST(Cli, PbdBreakSupplementPipeline) {
  TempDir t;
  qdesign::DesignInstance seed;
  seed.q = 2;
  seed.v = 3;
  seed.K = {3};
  seed.claimed_lambda = 1;
  seed.blocks = std::vector<qdesign::ExplicitBlock>{{qdesign::VectorSpace(2, 3).whole(), 1}};
  qdesign::write_design_file(t / "seed.json", seed);
  const auto p = run({"build-pbd", "--seed", t / "seed.json", "--m", "2", "--k", "3", "--select", "2,3=1", "--out",
                      t / "p.json"});
  ASSERT_EQ(p.exit_status, 0) << p.log;
  EXPECT_EQ((*p.json)["kind"], "mixed");
  EXPECT_EQ(run({"verify", "--in", t / "p.json"}).exit_status, 0);

  const auto s = run({"supplement", "--in", t / "p.json", "--out", t / "s.json"});
  EXPECT_EQ(s.exit_status, 0) << s.log;
  EXPECT_EQ((*s.json)["blocks"], 1395 - 504 - 9);

  const auto f = run({"fill-holes", "--gdd", t / "p.json", "--master", t / "seed.json", "--hole-dim", "0", "--out",
                      t / "f.json"});
  EXPECT_EQ(f.exit_status, 2);  // not a gdd
}

TEST(Cli, SingerAndAtlas) {
  const auto s = run({"--json", "singer-orbits", "--l", "7", "--d", "3", "--q", "2"});
  ASSERT_EQ(s.exit_status, 0);
  const auto a = run({"--json", "orbit-atlas", "--m", "2", "--l", "3", "--k", "3", "--q", "2"});
  ASSERT_EQ(a.exit_status, 0) << a.log;
  EXPECT_TRUE((*a.json)["agree"].get<bool>());
  EXPECT_EQ((*a.json)["unclassified"], 0);
  const auto st = run({"stabilizer", "--m", "2", "--l", "3", "--k", "3", "--q", "2", "--r", "2", "--u", "3",
                       "--brute-force"});
  EXPECT_EQ(st.exit_status, 0) << st.log;
  EXPECT_TRUE((*st.json)["agree"].get<bool>());
  const auto inc = run({"incidence", "--m", "2", "--l", "4", "--k", "3", "--q", "2", "--mode", "both"});
  EXPECT_EQ(inc.exit_status, 0) << inc.log;
  EXPECT_TRUE((*inc.json)["agree"].get<bool>());
}

TEST(Cli, KmSolve) {
  const auto r = run({"--json", "km-solve", "--l", "3", "--k", "3", "--q", "2", "--lambda", "1"});
  EXPECT_EQ(r.exit_status, 0);
  EXPECT_EQ((*r.json)["solutions"].size(), 1u);
  const auto b = run({"--json", "km-solve", "--l", "7", "--k", "3", "--q", "2", "--lambda", "7", "--budget", "1000"});
  EXPECT_EQ((*b.json)["status"], "budget_exceeded");
}

TEST(Cli, WrittenFilesAreStable) {
  TempDir t;
  for (const char* f : {"a.json", "b.json"})
    ASSERT_EQ(run({"build-gdd", "--m", "2", "--l", "4", "--k", "3", "--q", "2", "--select", "2,1=1", "--out", t / f})
                  .exit_status,
              0);
  EXPECT_EQ(slurp(t / "a.json"), slurp(t / "b.json"));
}
