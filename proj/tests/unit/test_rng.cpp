#include "eirnri/rng.hpp"

#include <doctest.h>

#include <cmath>

using eirnri::Rng;

TEST_CASE("rng streams are reproducible") {
    Rng a(123), b(123), c(124);
    bool same = true, differ = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.normal();
        same = same && (x == b.normal());
        differ = differ || (x != c.normal());
    }
    CHECK(same);
    CHECK(differ);
}

TEST_CASE("normal moments are sane") {
    Rng rng(7);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("below stays in range and covers values") {
    Rng rng(99);
    bool saw[7] = {};
    for (int i = 0; i < 1000; ++i) {
        const auto v = rng.below(7);
        REQUIRE(v < 7);
        saw[v] = true;
    }
    for (bool s : saw) CHECK(s);
}

TEST_CASE("uniform lies in [0,1)") {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}
