#include <doctest.h>

#include <sstream>

#include "capgen/capacity.hpp"
#include "capgen/linear_extensions.hpp"
#include "capgen/node_generators.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace capgen;
using fixtures::set;

TEST_CASE("ground size is checked") {
    CHECK_THROWS_AS(check_ground_size(1), std::invalid_argument);
    CHECK_THROWS_AS(check_ground_size(9), std::invalid_argument);
    CHECK_NOTHROW(check_ground_size(2));
    CHECK_NOTHROW(check_ground_size(8));
    CHECK_THROWS(SubsetId(3, 8));
}

TEST_CASE("subset labels") {
    CHECK(subset_label(3, set({1, 3})) == "{1,3}");
    CHECK(subset_label(3, 0) == "{}");
    CHECK(subset_label(3, 7) == "N");
    for (Mask m = 0; m < 16; ++m) CHECK(parse_subset_label(4, subset_label(4, m)) == m);
    CHECK_THROWS(parse_subset_label(3, "{1,4}"));
    CHECK_THROWS(parse_subset_label(3, "1,2"));
    CHECK(SubsetId(4, set({1, 2})).complement().mask() == set({3, 4}));
}

TEST_CASE("cardinal-lexicographic order") {
    for (int n = 2; n <= 8; ++n) {
        CardLexOrder o(n);
        CHECK(o.ord(set({1})) == 1);
        CHECK(o.ord(full_mask(n) & ~Mask{1}) == static_cast<int>(free_count(n)));
        for (int i = 1; i < static_cast<int>(free_count(n)); ++i) {
            CHECK(popcount(o.at(i)) <= popcount(o.at(i + 1)));
            CHECK(o.ord(o.at(i)) == i);
        }
    }
    CardLexOrder o3(3);
    std::vector<Mask> expect{set({1}), set({2}), set({3}), set({1, 2}), set({1, 3}), set({2, 3})};
    CHECK(std::vector<Mask>(o3.free_subsets().begin(), o3.free_subsets().end()) == expect);
    CardLexOrder o4(4);
    CHECK(o4.ord(set({1, 4})) < o4.ord(set({2, 3})));
    auto all = o3.all_subsets();
    CHECK(all.front() == 0);
    CHECK(all.back() == 7);
}

TEST_CASE("capacity validation") {
    CHECK_NOTHROW(Capacity::uniform_additive(5));
    CHECK_THROWS_AS(Capacity(2, {0.0, 0.6, 0.3, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Capacity(2, {0.0, 0.2, 0.3, 0.9}), std::invalid_argument);
    CHECK_THROWS_AS(Capacity(2, {0.0, 0.2, 0.3}), std::invalid_argument);
    CHECK(!is_monotone(std::vector<double>{0.0, 0.6, 0.3, 0.5}));
    std::vector<double> boundary(16, 0.0);
    boundary[15] = 1.0;
    CHECK(is_monotone(boundary));
    CHECK(is_monotone(Capacity::uniform_additive(4).values()));
}

TEST_CASE("choquet integral") {
    auto mu = Capacity::uniform_additive(3);
    Alternative x({0.9, 0.1, 0.5});
    CHECK(oracle::choquet_by_permutations(mu, x) == doctest::Approx(0.5));
    CHECK(choquet(mu, x) == doctest::Approx(0.5).epsilon(1e-15));

    Rng rng(11);
    auto ext = enumerate_linear_extensions(4);
    auto caps = ecg_sample(4, ext, 200, rng);
    for (const auto& c : caps) {
        std::vector<double> s(4);
        for (double& v : s) v = rng.uniform01();
        Alternative a(s);
        CHECK(choquet(c, a) == doctest::Approx(oracle::choquet_by_permutations(c, a)).epsilon(1e-12));
        // Constant vectors and binary alternatives.
        double t = rng.uniform01();
        CHECK(choquet(c, Alternative({t, t, t, t})) == doctest::Approx(t).epsilon(1e-14));
        for (Mask b = 0; b < 16; ++b) CHECK(choquet(c, Alternative::binary(4, b)) == c[b]);
        // Monotone in each coordinate.
        int i = static_cast<int>(rng.below(4));
        auto bumped = s;
        bumped[i] = std::min(1.0, bumped[i] + 0.1);
        CHECK(choquet(c, Alternative(bumped)) >= choquet(c, a) - 1e-15);
        double lo = *std::min_element(s.begin(), s.end()), hi = *std::max_element(s.begin(), s.end());
        CHECK(choquet(c, a) >= lo - 1e-15);
        CHECK(choquet(c, a) <= hi + 1e-15);
        // Linear form reproduces the integral.
        auto form = choquet_form(a);
        double lin = form.constant;
        for (Mask m = 1; m < 15; ++m) lin += form.coef[m] * c[m];
        CHECK(lin == doctest::Approx(choquet(c, a)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(choquet(mu, Alternative({0.1, 0.2})), std::invalid_argument);
    CHECK_THROWS(Alternative({0.1, 1.2}));
}

TEST_CASE("dual capacity") {
    Rng rng(5);
    for (const auto& c : rng_generate(5, 50, rng)) {
        auto d = c.dual();
        CHECK(is_monotone(d.values()));
        CHECK(d.dual().values()[3] == doctest::Approx(c[3]));
    }
}

TEST_CASE("unconditional rank bounds") {
    CHECK(unconditional_rank_bounds(SubsetId(4, set({2}))) == RankRange{1, 8});
    CHECK(unconditional_rank_bounds(SubsetId(4, set({1, 2, 4}))) == RankRange{7, 14});
    for (int n = 2; n <= 8; ++n) {
        CHECK(unconditional_rank_bounds(SubsetId(n, full_mask(n) & ~Mask{2})).hi == static_cast<int>(free_count(n)));
    }
    CHECK_THROWS(unconditional_rank_bounds(SubsetId(3, 0)));
    CHECK_THROWS(unconditional_rank_bounds(SubsetId(3, 7)));

    for (int n = 3; n <= 4; ++n) {
        auto exts = enumerate_linear_extensions(n);
        std::vector<int> lo(lattice_size(n), 1 << 20), hi(lattice_size(n), 0);
        for (const auto& e : exts) {
            for (std::size_t i = 0; i < e.size(); ++i) {
                lo[e[i]] = std::min(lo[e[i]], static_cast<int>(i + 1));
                hi[e[i]] = std::max(hi[e[i]], static_cast<int>(i + 1));
            }
        }
        for (Mask s = 1; s < full_mask(n); ++s) {
            auto r = unconditional_rank_bounds(SubsetId(n, s));
            CHECK(r.lo == lo[s]);
            CHECK(r.hi == hi[s]);
        }
    }
}

TEST_CASE("capacity CSV round trip") {
    Rng rng(3);
    auto caps = rng_generate(3, 20, rng);
    std::stringstream ss;
    write_capacity_csv(ss, 3, caps);
    std::string header;
    std::getline(std::istringstream(ss.str()), header);
    CHECK(header == "\"{}\",\"{1}\",\"{2}\",\"{3}\",\"{1,2}\",\"{1,3}\",\"{2,3}\",\"N\"");
    auto back = read_capacity_csv(ss);
    REQUIRE(back.size() == caps.size());
    for (std::size_t i = 0; i < caps.size(); ++i) CHECK(back[i] == caps[i]);

    std::istringstream bad("\"{}\",\"{1}\",\"{2}\",\"N\"\n0,0.5,0.7\n");
    CHECK_THROWS_AS(read_capacity_csv(bad), std::runtime_error);
    std::istringstream nonmono("\"{}\",\"{1}\",\"{2}\",\"N\"\n0,0.5,1.5,1\n");
    CHECK_THROWS_AS(read_capacity_csv(nonmono), std::runtime_error);
}
