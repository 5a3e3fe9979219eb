// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <stdexcept>
#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "cloudplan/demand.hpp"
#include "cloudplan/errors.hpp"

using namespace cloudplan;

namespace {

DemandTrace trace_of(std::vector<std::int64_t> s, double secs = 300.0) { return DemandTrace{secs, std::move(s)}; }

DemandTrace parse(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

}  // namespace

TEST_CASE("load_trace") {
  CHECK(parse("0,5\n1,7\n2,5").samples == std::vector<std::int64_t>{5, 7, 5});
  CHECK(parse("interval_index,demand\n0,5\n1,7\n").samples == std::vector<std::int64_t>{5, 7});
  CHECK(parse("1,7\n0,5\n").samples == std::vector<std::int64_t>{5, 7});
  CHECK_THROWS_AS(parse(""), ValidationError);
  CHECK_THROWS_AS(parse("3,-1"), ValidationError);
  CHECK_THROWS_AS(parse("0,5\n1,x\n"), ParseError);
  CHECK_THROWS_AS(load_trace("/nonexistent/trace.csv"), IoError);
}

TEST_CASE("to_vm_units") {
  CHECK(to_vm_units(trace_of({5, 7, 5}), 3).samples == std::vector<std::int64_t>{2, 3, 2});
  CHECK(to_vm_units(trace_of({4, 0, 9}), 1).samples == std::vector<std::int64_t>{4, 0, 9});
  CHECK(to_vm_units(trace_of({0}), 8).samples == std::vector<std::int64_t>{0});
}

TEST_CASE("to_vm_units is monotone") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 1000; ++k) {
    const auto a = static_cast<std::int64_t>(rng() % 1000);
    const auto b = a + static_cast<std::int64_t>(rng() % 50);
    const auto cap = 1 + static_cast<std::int64_t>(rng() % 40);
    const auto u = to_vm_units(trace_of({a, b}), cap).samples;
    CHECK(u[0] <= u[1]);
  }
}

TEST_CASE("build_distribution") {
  const auto d = build_distribution(trace_of({3, 3, 5, 5}));
  CHECK(std::vector<std::int64_t>(d.support().begin(), d.support().end()) == std::vector<std::int64_t>{3, 5});
  CHECK(d.probability(0) == doctest::Approx(0.5));
  CHECK(d.probability(1) == doctest::Approx(0.5));

  const auto single = build_distribution(trace_of({4}));
  CHECK(single.size() == 1);
  CHECK(single.probability(0) == 1.0);

  CHECK_THROWS_AS(build_distribution(trace_of({})), std::invalid_argument);
}

TEST_CASE("empirical frequencies of 10k draws match the generator") {
  const std::vector<double> probs{0.9, 0.1};
  const auto gen = DemandDistribution::from_probabilities({2, 7}, probs);
  const auto d = build_distribution(trace_of(sample_demand(gen, 10'000, 42)));
  REQUIRE(d.size() == 2);
  CHECK(std::abs(d.probability(0) - 0.9) <= 0.02);
  CHECK(std::abs(d.probability(1) - 0.1) <= 0.02);
}

TEST_CASE("build_distribution is invariant under permutation") {
  std::mt19937_64 rng(9);
  std::vector<std::int64_t> s(500);
  for (auto& v : s) v = static_cast<std::int64_t>(rng() % 30);
  const auto a = build_distribution(trace_of(s));
  std::shuffle(s.begin(), s.end(), rng);
  const auto b = build_distribution(trace_of(s));
  CHECK(std::equal(a.support().begin(), a.support().end(), b.support().begin(), b.support().end()));
  CHECK(std::equal(a.weights().begin(), a.weights().end(), b.weights().begin(), b.weights().end()));
}

TEST_CASE("probabilities sum to one") {
  std::mt19937_64 rng(17);
  std::vector<std::int64_t> s(777);
  for (auto& v : s) v = static_cast<std::int64_t>(rng() % 101);
  const auto d = build_distribution(trace_of(s));
  double sum = 0;
  for (std::size_t i = 0; i < d.size(); ++i) sum += d.probability(i);
  CHECK(std::abs(sum - 1.0) < 1e-9);
  CHECK(std::is_sorted(d.support().begin(), d.support().end()));
}

TEST_CASE("aggregate") {
  std::vector<std::int64_t> hourly(24);
  std::iota(hourly.begin(), hourly.end(), 1);
  CHECK(aggregate(trace_of(hourly, 3600), Window::daily, Reducer::max).samples == std::vector<std::int64_t>{24});

  for (auto r : {Reducer::max, Reducer::mean, Reducer::p95}) {
    CHECK(aggregate(trace_of(std::vector<std::int64_t>(10, 6)), 4, r).samples == std::vector<std::int64_t>{6, 6, 6});
  }
  CHECK(aggregate(trace_of({2, 4}), 2, Reducer::mean).samples == std::vector<std::int64_t>{3});
  CHECK(aggregate(trace_of({2, 3}), 2, Reducer::mean).samples == std::vector<std::int64_t>{3});  // rounds up

  std::vector<std::int64_t> hundred(100);
  std::iota(hundred.begin(), hundred.end(), 1);
  CHECK(aggregate(trace_of(hundred), 100, Reducer::p95).samples == std::vector<std::int64_t>{95});

  CHECK_THROWS_AS(aggregate(trace_of({1}, 10 * 86400.0), Window::weekly, Reducer::max), std::invalid_argument);
  CHECK_THROWS_AS(aggregate(trace_of({1}), 0, Reducer::max), std::invalid_argument);
}

TEST_CASE("ccdf") {
  const auto d = DemandDistribution::from_weights({2, 10}, {1, 1});
  CHECK(ccdf(d, 1) == 1.0);
  CHECK(ccdf(d, 2) == 0.5);
  CHECK(ccdf(d, 10) == 0.0);
  CHECK(ccdf(d, -1) == 1.0);
}

TEST_CASE("ccdf is nonincreasing") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 100; ++k) {
    std::vector<std::int64_t> s(50);
    for (auto& v : s) v = static_cast<std::int64_t>(rng() % 40);
    const auto d = build_distribution(trace_of(s));
    for (std::int64_t r = -1; r <= d.max_value(); ++r) CHECK(ccdf(d, r + 1) <= ccdf(d, r));
    CHECK(ccdf(d, d.max_value()) == 0.0);
  }
}

TEST_CASE("distribution constructors reject bad input") {
  CHECK_THROWS_AS(DemandDistribution::from_weights({3, 2}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(DemandDistribution::from_weights({-1}, {1}), std::invalid_argument);
  const std::vector<double> bad{0.5, 0.4};
  CHECK_THROWS_AS(DemandDistribution::from_probabilities({1, 2}, bad), std::invalid_argument);
}

TEST_CASE("sampling is reproducible") {
  const auto d = DemandDistribution::from_weights({1, 2, 3}, {1, 2, 3});
  CHECK(sample_demand(d, 100, 7) == sample_demand(d, 100, 7));
  CHECK(sample_demand(d, 100, 7) != sample_demand(d, 100, 8));
}
