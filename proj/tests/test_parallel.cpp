#include <gtest/gtest.h>

#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "loglap/crosscheck.hpp"
#include "loglap/parallel.hpp"

using namespace loglap;

namespace {

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (value) setenv("LOGLAP_THREADS", value, 1);
    else unsetenv("LOGLAP_THREADS");
  }
  ~EnvGuard() { unsetenv("LOGLAP_THREADS"); }
};

}  // namespace

TEST(ThreadLimit, ParsesEnvironment) {
  {
    EnvGuard g("3");
    EXPECT_EQ(thread_limit(), 3u);
  }
  {
    EnvGuard g("auto");
    EXPECT_GE(thread_limit(), 1u);
  }
  {
    EnvGuard g(nullptr);
    EXPECT_GE(thread_limit(), 1u);
  }
  for (const char* bad : {"0", "-2", "x", "4k"}) {
    EnvGuard g(bad);
    EXPECT_THROW(thread_limit(), std::invalid_argument) << bad;
  }
}

TEST(ParallelMap, IndexOrderedResults) {
  for (unsigned w : {1u, 2u, 5u, 64u}) {
    const auto v = parallel_map<std::size_t>(37, [](std::size_t i) { return i * i; }, w);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], i * i);
  }
  EXPECT_TRUE(parallel_map<int>(0, [](std::size_t) { return 1; }).empty());
}

TEST(ParallelMap, FirstErrorByIndexIsRethrown) {
  auto f = [](std::size_t i) -> int {
    if (i == 3) throw std::runtime_error("three");
    if (i == 7) throw std::logic_error("seven");
    return 0;
  };
  for (unsigned w : {1u, 4u}) {
    try {
      parallel_map<int>(10, f, w);
      FAIL();
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "three");
    }
  }
}

TEST(Determinism, CrossCheckIndependentOfWorkerCount) {
  const std::vector<double> params = {1.0};
  const auto pts = default_crosscheck_points(1);
  CrossCheckReport a, b;
  {
    EnvGuard g("1");
    a = crosscheck("smooth_bump", 1, params, pts);
  }
  {
    EnvGuard g("4");
    b = crosscheck("smooth_bump", 1, params, pts);
  }
  EXPECT_EQ(a.direct, b.direct);
  EXPECT_EQ(a.extension, b.extension);
  EXPECT_EQ(a.spectral, b.spectral);
}
