#include <catch_amalgamated.hpp>

#include <rlf/parallel.hpp>
#include <rlf/rng.hpp>

#include <atomic>
#include <stdexcept>
#include <vector>

using namespace rlf;

TEST_CASE("parallel_for visits every index once for any thread count", "[parallel]") {
    for (unsigned threads : {1U, 2U, 3U, 8U}) {
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), Parallelism{threads}, [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) {
            REQUIRE(h == 1);
        }
    }
    parallel_for(0, Parallelism{4}, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("parallel_for rethrows the lowest failing index", "[parallel]") {
    for (unsigned threads : {1U, 4U}) {
        try {
            parallel_for(100, Parallelism{threads}, [](std::size_t i) {
                if (i == 17 || i == 80) {
                    throw std::runtime_error(std::to_string(i));
                }
            });
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "17");
        }
    }
}

TEST_CASE("trial streams depend only on seed and index", "[parallel]") {
    TrialRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    const double x = a.unit();
    CHECK(x == b.unit());
    CHECK(x != c.unit());
    CHECK(x != d.unit());
    TrialRng r(1, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.unit();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const double s = r.symmetric(0.1);
        REQUIRE(std::abs(s) <= 0.1);
    }
    CHECK(Parallelism{0}.resolved() >= 1);
}
