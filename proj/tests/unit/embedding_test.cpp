#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "topcap/error.hpp"
#include "topcap/embedding.hpp"
#include "topcap/rng.hpp"
#include "topcap/signal.hpp"

using namespace topcap;

namespace {

TimeSeries ramp(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
  return TimeSeries("ramp", x);
}

TimeSeries cosine(std::size_t n, double period) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = std::cos(2.0 * std::numbers::pi * t / period);
  return TimeSeries("cos", x);
}

}  // namespace

TEST_SUITE("embedding") {
  TEST_CASE("two-harmonic example gives 181 points in 3-space") {
    std::vector<double> x(201);
    for (std::size_t n = 0; n <= 200; ++n) {
      const double t = std::numbers::pi * n / 50.0;
      x[n] = std::sin(2 * t) - 3 * std::sin(t);
    }
    const auto cloud = embed(TimeSeries("f", x), {3, 10, 1, 6});
    CHECK(cloud.size() == 181);
    CHECK(cloud.dimension() == 3);
    CHECK(cloud.point(5)[2] == x[25]);
    CHECK(cloud.source_id() == "f");
  }

  TEST_CASE("boundary window fits with a single point") {
    const auto cloud = embed(ramp(500), {100, 5, 5, 6});
    CHECK(cloud.size() == 1);
    CHECK(embedded_point_count(500, 100, 5, 5) == 1);
    CHECK(cloud.point(0)[99] == 495.0);
  }

  TEST_CASE("window larger than the series is an error") {
    CHECK_THROWS_AS(embed(ramp(100), {100, 2, 1, 6}), WindowExceedsSeries);
    CHECK(embedded_point_count(100, 100, 2, 1) == 0);
    // (d-1) tau + 1 == n is the last feasible case.
    CHECK(embed(ramp(199), {100, 2, 1, 6}).size() == 1);
  }

  TEST_CASE("point coordinates follow p_k[j] = x[k + j tau]") {
    const auto cloud = embed(ramp(300), {7, 11, 4, 6});
    for (std::size_t i = 0; i < cloud.size(); ++i)
      for (std::size_t j = 0; j < 7; ++j) CHECK(cloud.point(i)[j] == static_cast<double>(4 * i + 11 * j));
  }

  TEST_CASE("count formula matches a naive loop") {
    Rng rng(9);
    for (int trial = 0; trial < 2000; ++trial) {
      const std::size_t n = 1 + rng.index(400);
      const std::size_t d = 2 + rng.index(30);
      const std::size_t tau = 1 + rng.index(20);
      const std::size_t skip = 1 + rng.index(12);
      const std::size_t expect = oracle::count_embedded_points(n, d, tau, skip);
      CHECK(embedded_point_count(n, d, tau, skip) == expect);
      if (expect > 0) CHECK(embed(ramp(n), {d, tau, skip, 6}).size() == expect);
    }
  }

  TEST_CASE("embedding is linear and translation-equivariant") {
    Rng rng(4);
    std::vector<double> x(400);
    for (auto& v : x) v = rng.normal();
    const EmbeddingParams p{12, 7, 3, 6};
    const auto base = embed(TimeSeries("x", x), p);
    // Powers of two keep the products exact.
    const double alpha = 0.25, beta = 2.0;
    std::vector<double> scaled(x), shifted(x);
    for (auto& v : scaled) v *= alpha;
    for (auto& v : shifted) v += beta;
    const auto s = embed(TimeSeries("s", scaled), p);
    const auto t = embed(TimeSeries("t", shifted), p);
    for (std::size_t i = 0; i < base.coords().size(); ++i) {
      CHECK(s.coords()[i] == alpha * base.coords()[i]);
      CHECK(t.coords()[i] == base.coords()[i] + beta);
    }
  }

  TEST_CASE("skip clouds are subsequences of the skip-1 cloud") {
    const auto series = cosine(700, 37.3);
    const auto full = embed(series, {10, 9, 1, 6});
    for (std::size_t s : {2u, 3u, 5u, 10u}) {
      const auto sub = embed(series, {10, 9, s, 6});
      for (std::size_t i = 0; i < sub.size(); ++i)
        for (std::size_t j = 0; j < 10; ++j) CHECK(sub.point(i)[j] == full.point(i * s)[j]);
    }
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((EmbeddingParams{1, 1, 1, 6}.validate()), InvalidArgument);
    CHECK_THROWS_AS((EmbeddingParams{3, 0, 1, 6}.validate()), InvalidArgument);
    CHECK_THROWS_AS((EmbeddingParams{3, 1, 0, 6}.validate()), InvalidArgument);
    CHECK_THROWS_AS((EmbeddingParams{3, 1, 1, 0}.validate()), InvalidArgument);
    CHECK_NOTHROW(EmbeddingParams{}.validate());
  }

  TEST_CASE("delay from period") {
    auto sel = delay_from_period(120, 2000, 100, 6);
    CHECK(sel.delay == 7);
    CHECK(sel.rule == DelayRule::period);

    sel = delay_from_period(8, 2000, 100, 6);
    CHECK(sel.delay == 1);
    CHECK(sel.rule == DelayRule::clamped_to_one);

    sel = delay_from_period(140, 500, 100, 6);  // tau 8, window 793
    CHECK(sel.delay == 5);
    CHECK(sel.rule == DelayRule::series_fit);
    CHECK(sel.period == 140);

    // Half rounds away from zero: 6 * 25 / 100 = 1.5.
    CHECK(delay_from_period(25, 2000, 100, 6).delay == 2);
    CHECK(delay_from_period(75, 2000, 100, 6).delay == 5);  // 4.5

    CHECK_THROWS_AS(delay_from_period(120, 99, 100, 6), SeriesTooShort);
  }

  TEST_CASE("select_delay on cosines") {
    auto sel = select_delay(cosine(3000, 120.0), 100, 6);
    CHECK(sel.period == 120);
    CHECK(sel.delay == 7);
    CHECK(sel.rule == DelayRule::period);

    sel = select_delay(cosine(2000, 8.0), 100, 6);
    CHECK(sel.period == 8);
    CHECK(sel.delay == 1);
    CHECK(sel.rule == DelayRule::clamped_to_one);

    // Short series: the tapered ACF peaks a little before 140.
    sel = select_delay(cosine(500, 140.0), 100, 6);
    CHECK(sel.period == *first_acf_peak(autocorrelation(cosine(500, 140.0))));
    CHECK(sel.period >= 135);
    CHECK(sel.period <= 140);
    CHECK(sel.delay == 5);
    CHECK(sel.rule == DelayRule::series_fit);

    // Deterministic.
    const auto again = select_delay(cosine(3000, 120.0), 100, 6);
    CHECK(again.delay == 7);
  }

  TEST_CASE("select_delay errors") {
    std::vector<double> mono(600);
    for (std::size_t i = 0; i < mono.size(); ++i) mono[i] = std::exp(-0.01 * i);
    CHECK_THROWS_AS(select_delay(TimeSeries("m", mono), 100, 6), NoPeriod);
    CHECK_THROWS_AS(select_delay(cosine(50, 10.0), 100, 6), SeriesTooShort);
  }

  TEST_CASE("cloud size screening") {
    auto cloud_of = [](std::size_t n) { return PointCloud(2, std::vector<double>(2 * n, 0.5)); };
    auto r = check_cloud_size(cloud_of(39));
    REQUIRE_FALSE(accepted(r));
    CHECK(std::get<Rejection>(r).reason == RejectReason::too_few_points);
    CHECK(accepted(check_cloud_size(cloud_of(40))));
    CHECK(accepted(check_cloud_size(cloud_of(142))));
  }

  TEST_CASE("point cloud validation and csv") {
    CHECK_THROWS_AS(PointCloud(0, {}), InvalidArgument);
    CHECK_THROWS_AS(PointCloud(2, {}), InvalidArgument);
    CHECK_THROWS_AS(PointCloud(2, {1.0, 2.0, 3.0}), InvalidArgument);
    CHECK_THROWS_AS(PointCloud(1, {NAN}), InvalidArgument);

    const auto cloud = embed(cosine(300, 17.1), {5, 3, 2, 6});
    const auto back = parse_cloud_csv(format_cloud_csv(cloud));
    CHECK(back.dimension() == 5);
    CHECK(std::equal(back.coords().begin(), back.coords().end(), cloud.coords().begin(), cloud.coords().end()));
    const auto plain = parse_cloud_csv(format_cloud_csv(cloud, false));
    CHECK(plain.size() == cloud.size());
    CHECK_THROWS_AS(parse_cloud_csv("1,2\n3\n"), InvalidArgument);
  }
}
