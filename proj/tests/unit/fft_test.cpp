#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cafda/fft.hpp"
#include "cafda/rng.hpp"
#include "naive_dft.hpp"

using namespace cafda;

namespace {

std::vector<Complex> random_signal(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> x(n);
  for (auto& v : x) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return x;
}

std::vector<Complex> naive_1d(const std::vector<Complex>& x, double sign) {
  const std::size_t n = x.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const long double a = sign * 2.0L * std::numbers::pi_v<long double> * static_cast<long double>((k * j) % n) / n;
      acc += std::complex<long double>(x[j].real(), x[j].imag()) * std::complex<long double>(std::cos(a), std::sin(a));
    }
    out[k] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }
  return out;
}

}  // namespace

class PlanLengths : public ::testing::TestWithParam<std::size_t> {};

TEST_P(PlanLengths, MatchesNaiveBothDirections) {
  const std::size_t n = GetParam();
  const auto x = random_signal(n, 1000 + n);
  const auto plan = fft::Plan::get(n);
  std::vector<Complex> out(n);
  for (auto [dir, sign] : {std::pair{fft::Direction::kForward, -1.0}, std::pair{fft::Direction::kInverse, 1.0}}) {
    plan->execute(x.data(), 1, out.data(), dir);
    const auto ref = naive_1d(x, sign);
    for (std::size_t k = 0; k < n; ++k) EXPECT_LT(std::abs(out[k] - ref[k]), 1e-9 * std::sqrt(double(n))) << "k=" << k;
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, PlanLengths,
                         ::testing::Values(1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 15, 16, 17, 25, 27, 31, 32, 49,
                                           59, 61, 64, 67, 97, 100, 121, 127, 224, 243, 384, 1009));

TEST(Plan, StridedInput) {
  const auto x = random_signal(24, 5);
  std::vector<Complex> every_other(12), out(12), ref(12);
  for (std::size_t i = 0; i < 12; ++i) every_other[i] = x[2 * i];
  fft::Plan::get(12)->execute(x.data(), 2, out.data(), fft::Direction::kForward);
  fft::Plan::get(12)->execute(every_other.data(), 1, ref.data(), fft::Direction::kForward);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(out[i], ref[i]);
}

TEST(Plan, CacheReturnsSharedInstance) {
  EXPECT_EQ(fft::Plan::get(48).get(), fft::Plan::get(48).get());
}

class Transform2d : public ::testing::TestWithParam<std::pair<std::size_t, std::size_t>> {};

TEST_P(Transform2d, MatchesNaiveDft) {
  const auto [h, w] = GetParam();
  Rng rng(h * 100 + w);
  Spectrum grid(h, w);
  for (auto& v : grid.values()) v = {rng.uniform(), rng.uniform(-1, 1)};
  Spectrum fast = grid;
  fft::transform_2d(fast, fft::Direction::kForward);
  EXPECT_LT(check::max_abs_error(fast, check::naive_dft_2d(grid, false)), 1e-9);
  fft::transform_2d(fast, fft::Direction::kInverse);
  for (auto& v : fast.values()) v /= static_cast<double>(h * w);
  EXPECT_LT(check::max_abs_error(fast, grid), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Shapes, Transform2d,
                         ::testing::Values(std::pair<std::size_t, std::size_t>{1, 1}, std::pair<std::size_t, std::size_t>{1, 7},
                                           std::pair<std::size_t, std::size_t>{3, 3}, std::pair<std::size_t, std::size_t>{4, 4},
                                           std::pair<std::size_t, std::size_t>{5, 12}, std::pair<std::size_t, std::size_t>{7, 7},
                                           std::pair<std::size_t, std::size_t>{8, 8}, std::pair<std::size_t, std::size_t>{15, 15},
                                           std::pair<std::size_t, std::size_t>{16, 16}, std::pair<std::size_t, std::size_t>{13, 9}));
