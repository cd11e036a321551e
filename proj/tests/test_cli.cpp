#include "cli.hpp"

#include "boundwalk/cat0_model.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace boundwalk;
namespace fs = std::filesystem;

namespace {

const fs::path data = BOUNDWALK_TEST_DATA;

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "boundwalk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("boundwalk_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string file(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

std::string target(const char* name) { return (data / name).string(); }

}  // namespace

TEST_F(Cli, VertexTargetPasses) {
  const auto r = run({"-n", "2", "-t", target("vertex2.json"), "--phases", "3", "--verify", "--word-out",
                      file("w.txt"), "--report-out", file("r.txt")});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  const auto word = parse_word(slurp(file("w.txt")));
  ASSERT_FALSE(word.empty());
  const auto ones = std::count(word.begin(), word.end(), 1);
  EXPECT_GT(ones * 10, static_cast<long>(word.size()) * 9);
  EXPECT_NE(slurp(file("r.txt")).find("pass=true"), std::string::npos);
}

TEST_F(Cli, RejectsMalformedInput) {
  for (const char* name : {"negative_vertex.json", "two_points.json", "bad_basepoint.json", "not_unit.json",
                           "truncated.json", "no_such_file.json"}) {
    const auto r = run({"-t", target(name), "--phases", "1"});
    EXPECT_EQ(r.code, cli::kBadInput) << name;
    EXPECT_FALSE(r.err.empty()) << name;
  }
  EXPECT_EQ(run({"-t", target("vertex2.json")}).code, cli::kBadInput);
  EXPECT_EQ(run({"-t", target("vertex2.json"), "--phases", "1", "--prefix-length", "5"}).code, cli::kBadInput);
  EXPECT_EQ(run({"-n", "3", "-t", target("vertex2.json"), "--phases", "1"}).code, cli::kBadInput);
  EXPECT_EQ(run({"-t", target("vertex2.json"), "--phases", "1", "--scheme", "zigzag"}).code, cli::kBadInput);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST_F(Cli, ReadTargetInfersDimension) {
  std::istringstream in(R"({"vertices": [[0.6, 0.8, 0]], "basepoint": 0})");
  const auto t = cli::read_target(in);
  EXPECT_EQ(t.dim(), 3u);
  std::istringstream bad(R"({"vertices": [[1, 0]], "edges": [[0, -1]]})");
  EXPECT_THROW(cli::read_target(bad), cli::BadInput);
}

TEST_F(Cli, IncompletePrefixFailsVerification) {
  const auto r = run({"-t", target("edge3.json"), "--prefix-length", "3000", "--verify"});
  EXPECT_EQ(r.code, cli::kVerifyFailed);
  EXPECT_NE(r.out.find("incomplete"), std::string::npos);
  EXPECT_EQ(run({"-t", target("edge3.json"), "--prefix-length", "3000"}).code, cli::kOk);
}

TEST_F(Cli, RepeatedRunsAreByteIdentical) {
  auto once = [&](const std::string& tag) {
    const auto r = run({"-t", target("triangle4.json"), "--prefix-length", "20000", "--word-out",
                        file("w" + tag), "--trace-out", file("t" + tag), "--report-out", file("r" + tag)});
    EXPECT_EQ(r.code, cli::kOk) << r.err;
    return r.out;
  };
  EXPECT_EQ(once("a"), once("b"));
  for (const char* f : {"w", "t", "r"}) {
    const auto a = slurp(file(std::string(f) + "a"));
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(file(std::string(f) + "b"))) << f;
  }
}

TEST_F(Cli, WordReplaysTracePositions) {
  const auto r = run({"-t", target("edge3.json"), "--prefix-length", "5000", "--word-out", file("w.txt"),
                      "--trace-out", file("t.csv")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto word = parse_word(slurp(file("w.txt")));
  ASSERT_EQ(word.size(), 5000u);
  const auto half = walk_from_word(word_from_indices(word, 3).letters(), 3);

  std::istringstream trace(slurp(file("t.csv")));
  std::string line;
  std::getline(trace, line);
  EXPECT_EQ(line, "step,phase,x1,x2,x3,s1,s2,s3,distance");
  std::size_t rows = 0;
  while (std::getline(trace, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::vector<std::string> v;
    while (std::getline(cells, cell, ',')) v.push_back(cell);
    ASSERT_EQ(v.size(), 9u);
    const std::size_t step = std::stoul(v[0]);
    ASSERT_EQ(step, ++rows);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(std::stoll(v[2 + i]), half[step][i + 1]);
    EXPECT_EQ(half[step][0], static_cast<std::int64_t>(step));
  }
  EXPECT_EQ(rows, 5000u);
}

TEST_F(Cli, WordLinesNeverSpanPhases) {
  const auto r = run({"-t", target("vertex2.json"), "--phases", "2", "--word-out", file("w.txt"), "--trace-out",
                      file("t.csv")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::vector<std::size_t> phase_of{0};
  std::istringstream trace(slurp(file("t.csv")));
  std::string line;
  std::getline(trace, line);
  while (std::getline(trace, line)) phase_of.push_back(std::stoul(line.substr(line.find(',') + 1)));
  std::istringstream words(slurp(file("w.txt")));
  std::size_t step = 0;
  while (std::getline(words, line)) {
    const auto letters = parse_word(line);
    ASSERT_FALSE(letters.empty());
    const std::size_t first = phase_of.at(step + 1);
    step += letters.size();
    EXPECT_EQ(phase_of.at(step), first);
  }
  EXPECT_EQ(step + 1, phase_of.size());
}
