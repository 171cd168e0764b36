#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "capgen/eval.hpp"
#include "capgen/markov.hpp"
#include "fixtures.hpp"

using namespace capgen;
using fixtures::set;

TEST_CASE("chain step swaps only incomparable neighbours") {
    Rng rng(1);
    LinearExtension two{set({1}), set({2})};
    CHECK(chain_step(two, rng));
    CHECK(two == LinearExtension{set({2}), set({1})});

    CardLexOrder o(4);
    LinearExtension e(o.free_subsets().begin(), o.free_subsets().end());
    int swaps = 0;
    for (int step = 0; step < 20000; ++step) {
        auto before = e;
        bool moved = chain_step(e, rng);
        REQUIRE(is_linear_extension(4, e));
        std::vector<std::size_t> diff;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != before[i]) diff.push_back(i);
        if (!moved) {
            CHECK(diff.empty());
            continue;
        }
        ++swaps;
        REQUIRE(diff.size() == 2);
        CHECK(diff[1] == diff[0] + 1);
        CHECK(!is_subset(before[diff[0]], before[diff[1]]));
    }
    CHECK(swaps > 0);
}

TEST_CASE("chain at n = 3 visits every extension") {
    Rng rng(2);
    CardLexOrder o(3);
    LinearExtension e(o.free_subsets().begin(), o.free_subsets().end());
    std::set<LinearExtension> seen;
    for (int step = 0; step < 1000000; ++step) {
        chain_step(e, rng);
        seen.insert(e);
    }
    auto all = enumerate_linear_extensions(3);
    CHECK(seen == std::set<LinearExtension>(all.begin(), all.end()));
}

TEST_CASE("chain defaults") {
    Rng rng(3);
    ExtensionChain c(4, {}, rng);
    CHECK(c.burn_in() == 50 * 14 * 14);
    CHECK(c.thinning() == 14 * 14);
    CardLexOrder o(4);
    CHECK(c.state() == LinearExtension(o.free_subsets().begin(), o.free_subsets().end()));
    ExtensionChain d(3, {10, 5}, rng);
    CHECK(d.burn_in() == 10);
    CHECK(d.thinning() == 5);
}

TEST_CASE("estimated table at n = 3") {
    Rng rng(4);
    auto est = estimate_rank_table(3, {}, 40000, rng);
    auto exact = exact_rank_table(3);
    CHECK(est.samples() == 40000);
    CHECK(std::abs(est.prob(set({1}), 1) - 1.0 / 3) <= 0.01);
    for (Mask s = 1; s < 7; ++s) {
        double tv = 0.0;
        for (int i = 1; i <= 6; ++i) tv += std::abs(est.prob(s, i) - exact.prob(s, i)) / 2;
        CHECK(tv <= 0.02);
    }
}

TEST_CASE("estimated table support and duality at n = 4") {
    Rng rng(5);
    auto est = estimate_rank_table(4, {}, 20000, rng);
    for (Mask s = 1; s < 15; ++s) {
        auto r = unconditional_rank_bounds(SubsetId(4, s));
        double sum = 0.0;
        for (int i = 1; i <= 14; ++i) {
            CHECK((est.prob(s, i) > 0) == (i >= r.lo && i <= r.hi));
            sum += est.prob(s, i);
            // Row of the complement is the reversed row.
            CHECK(std::abs(est.prob(s, i) - est.prob(15 & ~s, 15 - i)) < 0.02);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(est.prob(1, 0) == 0.0);
    CHECK(est.prob(1, 15) == 0.0);
}

TEST_CASE("exact table is dual-symmetric") {
    auto t = exact_rank_table(4);
    CHECK(t.samples() == 1680384);
    for (Mask s = 1; s < 15; ++s)
        for (int i = 1; i <= 14; ++i) CHECK(t.prob(s, i) == doctest::Approx(t.prob(15 & ~s, 15 - i)));
}

TEST_CASE("table validation and JSON round trip") {
    auto t = exact_rank_table(3);
    std::stringstream ss;
    write_rank_table_json(ss, t);
    auto back = read_rank_table_json(ss);
    CHECK(back.n() == 3);
    CHECK(back.samples() == t.samples());
    for (Mask s = 1; s < 7; ++s)
        for (int i = 1; i <= 6; ++i) CHECK(back.prob(s, i) == t.prob(s, i));

    std::istringstream bad("{\"n\":3,\"samples\":1}");
    CHECK_THROWS_AS(read_rank_table_json(bad), std::runtime_error);
    std::istringstream junk("not json");
    CHECK_THROWS_AS(read_rank_table_json(junk), std::runtime_error);
    std::vector<std::vector<double>> rows(8, std::vector<double>(7, 0.0));
    for (Mask s = 1; s < 7; ++s) rows[s][1] = 0.5;
    CHECK_THROWS_AS(RankProbabilityTable(3, 1, 0, 0, rows), std::invalid_argument);
}

TEST_CASE("markov generator") {
    Rng rng(6);
    CHECK(markov_generate(3, 0, {}, rng).empty());
    auto caps = markov_generate(3, 10000, {}, rng);
    for (const auto& c : caps) REQUIRE(is_monotone(c.values()));
    auto exts = enumerate_linear_extensions(3);
    auto ref = ecg_sample(3, exts, 10000, rng);
    auto rep = kl_report(caps, ref, 20);
    for (auto [s, d] : rep.per_subset) CHECK(d <= 0.05);
}
