#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "kpztt/io.hpp"

using namespace kpztt;
namespace fs = std::filesystem;

namespace {

ResultTable sample_table() {
  ResultTable t;
  t.columns = {{"x", false}, {"label", true}, {"y", false}};
  t.add({0.1, std::string("plain"), 1.0 / 3});
  t.add({-2.5e-300, std::string("comma, \"quote\"\r\nnewline"), std::numeric_limits<double>::quiet_NaN()});
  t.add({std::numeric_limits<double>::infinity(), std::string(""), -std::numeric_limits<double>::infinity()});
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 50; ++i) t.add({u(g), std::string("r"), std::ldexp(u(g), -40)});
  t.meta = {{"command", "test"}};
  return t;
}

fs::path scratch(const char* name) {
  fs::path d = fs::temp_directory_path() / ("kpztt_io_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d / name;
}

}  // namespace

TEST(Csv, RoundTripIsExact) {
  const ResultTable t = sample_table();
  const ResultTable back = from_csv(to_csv(t));
  EXPECT_TRUE(back == t);
}

TEST(Csv, HeaderAndLineEndings) {
  ResultTable t;
  t.columns = {{"xi", false}, {"F2", false}};
  t.add({0.0, 0.5});
  EXPECT_EQ(to_csv(t), "\"xi\",\"F2\"\r\n0,0.5\r\n");
}

TEST(Csv, SeventeenDigits) {
  ResultTable t;
  t.columns = {{"v", false}};
  t.add({0.1});
  EXPECT_NE(to_csv(t).find("0.10000000000000001"), std::string::npos);
}

TEST(Csv, Malformed) {
  EXPECT_THROW(from_csv("\"a\",\"b\"\r\n1\r\n"), std::runtime_error);
  EXPECT_THROW(from_csv("\"a\r\n"), std::runtime_error);
  EXPECT_THROW(from_csv("\"a\"\r\n1x\r\n"), std::runtime_error);
  EXPECT_THROW(from_csv(""), std::runtime_error);
}

TEST(Json, RoundTripIsExact) {
  const ResultTable t = sample_table();
  const auto j = to_json(t);
  EXPECT_EQ(j["schema"], "1");
  const ResultTable back = from_json(nlohmann::json::parse(j.dump()));
  EXPECT_TRUE(back == t);
  EXPECT_EQ(back.meta, t.meta);
}

TEST(Json, RejectsOtherSchema) {
  auto j = to_json(sample_table());
  j["schema"] = "2";
  EXPECT_THROW(from_json(j), std::runtime_error);
}

TEST(AtomicWrite, WritesAndLeavesNoTemp) {
  const fs::path p = scratch("sub/dir/out.csv");
  write_atomic(p, "first");
  write_atomic(p, "second");
  EXPECT_EQ(read_file(p), "second");
  for (const auto& e : fs::directory_iterator(p.parent_path())) EXPECT_EQ(e.path().filename(), "out.csv");
}

TEST(AtomicWrite, ErrorCarriesPath) {
  const fs::path f = scratch("blocker");
  write_atomic(f, "x");
  try {
    write_atomic(f / "child.csv", "y");
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(f.string()), std::string::npos) << e.what();
  }
}

TEST(Hash, Fnv1aVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(hex64(0xabcull), "0000000000000abc");
}
