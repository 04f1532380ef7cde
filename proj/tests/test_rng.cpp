#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bayesnr/rng.hpp"

using namespace bayesnr;

TEST_CASE("same seed replays the same stream") {
    UniformStream a(12345), b(12345);
    for (int i = 0; i < 1000000; ++i) REQUIRE(a.next() == b.next());
}

TEST_CASE("different seeds diverge immediately") {
    UniformStream a(1), b(2);
    int differing = 0;
    for (int i = 0; i < 100; ++i)
        if (a.next() != b.next()) ++differing;
    CHECK(differing == 100);
}

TEST_CASE("mean of a million draws is near one half") {
    UniformStream s(777);
    double acc = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) acc += s.next();
    CHECK(std::abs(acc / n - 0.5) <= 0.002);
}

TEST_CASE("draws live in [0,1)") {
    UniformStream s(9);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.next();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("forked substreams are deterministic and distinct") {
    UniformStream root(2024);
    UniformStream a1 = root.fork(0);
    UniformStream a2 = root.fork(0);
    UniformStream b = root.fork(1);
    bool same = true, differ = false;
    for (int i = 0; i < 1000; ++i) {
        const double v = a1.next();
        same &= (v == a2.next());
        differ |= (v != b.next());
    }
    CHECK(same);
    CHECK(differ);
}
