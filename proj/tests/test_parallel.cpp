#include <doctest.h>

#include <algorithm>

#include "capgen/linear_extensions.hpp"
#include "capgen/parallel.hpp"
#include "capgen/random.hpp"

using namespace capgen;

TEST_CASE("random source") {
    Rng a(1), b(1);
    for (int i = 0; i < 1000; ++i) CHECK(a.uniform01() == b.uniform01());
    Rng r(2);
    for (int i = 0; i < 100000; ++i) {
        double u = r.uniform01();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(r.below(7) < 7);
    }
    CHECK(r.uniform(0.4, 0.4) == 0.4);
    CHECK_THROWS(r.below(0));
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(5, 3) == derive_seed(5, 3));

    // below() is unbiased on a small range.
    std::vector<int> counts(3);
    for (int i = 0; i < 30000; ++i) ++counts[r.below(3)];
    for (int c : counts) CHECK(std::abs(c - 10000) < 400);

    std::vector<int> items{1, 2, 3, 4, 5};
    r.shuffle(std::span<int>(items));
    std::sort(items.begin(), items.end());
    CHECK(items == std::vector<int>{1, 2, 3, 4, 5});
}

TEST_CASE("batch generation is reproducible") {
    auto exts = enumerate_linear_extensions(3);
    BatchJob job = [&](std::size_t k, Rng& rng) { return ecg_sample(3, exts, k, rng); };
    auto a = generate_batch(1001, 4, 42, job);
    auto b = generate_batch(1001, 4, 42, job);
    CHECK(a.size() == 1001);
    CHECK(a == b);
    auto single = generate_batch(1001, 1, 42, job);
    Rng rng(derive_seed(42, 0));
    CHECK(single == ecg_sample(3, exts, 1001, rng));
    CHECK(generate_batch(1001, 2, 42, job) != a);
    CHECK(generate_batch(0, 3, 1, job).empty());

    BatchJob failing = [](std::size_t, Rng&) -> std::vector<Capacity> { throw std::runtime_error("boom"); };
    CHECK_THROWS_AS(generate_batch(10, 2, 1, failing), std::runtime_error);
}
