// Copyright 2026 The aggroute Authors
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


#include <stdexcept>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "aggroute/kernels.hpp"
#include "doctest.h"

using namespace aggroute::kernels;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

struct Variant {
  Backend backend;
  void (*sq)(std::span<const double>, std::span<const double>, double, double, std::span<double>);
  void (*tx)(std::span<const double>, double, double, double, std::span<double>);
  void (*acc)(std::span<double>, std::span<const double>, double);
  std::size_t (*amin)(std::span<const double>);
};

std::vector<Variant> simd_variants() {
  std::vector<Variant> out;
#if defined(__x86_64__) || defined(__i386__)
  if (backend_available(Backend::Avx2))
    out.push_back({Backend::Avx2, avx2::squared_distances_to_point, avx2::transmit_cost_per_bit,
                   avx2::scaled_accumulate, avx2::argmin});
#endif
#if defined(__aarch64__)
  if (backend_available(Backend::Neon))
    out.push_back({Backend::Neon, neon::squared_distances_to_point, neon::transmit_cost_per_bit,
                   neon::scaled_accumulate, neon::argmin});
#endif
  return out;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar reference values") {
    std::vector<double> ax{0.0, 3.0}, ay{0.0, 4.0}, out(2);
    scalar::squared_distances_to_point(ax, ay, 0.0, 0.0, out);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 25.0);

    std::vector<double> d2{10000.0, 20000.0}, cost(2);
    scalar::transmit_cost_per_bit(d2, 45e-9, 0.1e-9, 2.0, cost);
    CHECK(cost[0] == doctest::Approx(1.045e-6).epsilon(1e-12));
    CHECK(cost[1] == doctest::Approx(2.045e-6).epsilon(1e-12));
    scalar::transmit_cost_per_bit(d2, 0.0, 1.0, 4.0, cost);
    CHECK(cost[0] == 1e8);

    std::vector<double> dst{1.0, 2.0}, src{3.0, 4.0};
    scalar::scaled_accumulate(dst, src, 0.5);
    CHECK(dst[0] == 2.5);
    CHECK(dst[1] == 4.0);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK(scalar::argmin(std::vector<double>{3.0, 1.0, 1.0}) == 1);
    CHECK(scalar::argmin(std::vector<double>{nan, 2.0, nan}) == 1);
    CHECK(scalar::argmin(std::vector<double>{nan, nan}) == 2);
    CHECK(scalar::argmin(std::vector<double>{}) == 0);
  }

  TEST_CASE("SIMD variants match the scalar reference bit for bit") {
    std::mt19937_64 rng(7);
    const auto variants = simd_variants();
    if (variants.empty()) MESSAGE("no SIMD backend on this machine; scalar only");
    for (const Variant& v : variants) {
      CAPTURE(backend_name(v.backend));
      for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 31u, 48u, 257u}) {
        CAPTURE(n);
        const auto ax = random_vector(rng, n, -2000, 2000);
        const auto ay = random_vector(rng, n, -2000, 2000);
        std::vector<double> a(n), b(n);
        scalar::squared_distances_to_point(ax, ay, 12.5, -7.25, a);
        v.sq(ax, ay, 12.5, -7.25, b);
        CHECK(bitwise_equal(a, b));

        for (double beta : {2.0, 3.0, 4.0}) {
          std::vector<double> ca(n), cb(n);
          scalar::transmit_cost_per_bit(a, 45e-9, 0.1e-9, beta, ca);
          v.tx(a, 45e-9, 0.1e-9, beta, cb);
          CHECK(bitwise_equal(ca, cb));
        }

        auto da = random_vector(rng, n, -1, 1);
        auto db = da;
        const auto src = random_vector(rng, n, 0, 1e-5);
        scalar::scaled_accumulate(da, src, 5120.0);
        v.acc(db, src, 5120.0);
        CHECK(bitwise_equal(da, db));

        // Ties, NaN holes and infinities.
        auto vals = random_vector(rng, n, 0, 4);
        for (double& x : vals) x = std::floor(x);
        for (std::size_t k = 0; k < n; k += 3) vals[k] = std::numeric_limits<double>::quiet_NaN();
        if (n > 2) vals[n - 1] = -std::numeric_limits<double>::infinity();
        CHECK(scalar::argmin(vals) == v.amin(vals));
        std::vector<double> all_nan(n, std::numeric_limits<double>::quiet_NaN());
        CHECK(v.amin(all_nan) == n);
      }
    }
  }

  TEST_CASE("dispatch can be forced and reset") {
    force_backend(Backend::Scalar);
    CHECK(active_backend() == Backend::Scalar);
    std::vector<double> ax{1.0}, ay{1.0}, out(1);
    squared_distances_to_point(ax, ay, 0.0, 0.0, out);
    CHECK(out[0] == 2.0);
    reset_backend();
    CHECK(backend_available(active_backend()));
#if !defined(__aarch64__)
    CHECK_THROWS_AS(force_backend(Backend::Neon), std::invalid_argument);
#endif
  }
}
