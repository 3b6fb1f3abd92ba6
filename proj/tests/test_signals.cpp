#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "klmat/signals.hpp"

using namespace klmat;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

} // namespace

TEST_CASE("mg zero history is the zero fixed point") {
    MgParams p;
    p.history_value = 0.0;
    const Series s = mackey_glass(p, 500);
    REQUIRE(s.values.size() == 500);
    for (double x : s.values) {
        CHECK(std::abs(x) <= 1e-9);
    }
}

TEST_CASE("mg unit history is a fixed point of q=0.1, m=0.2") {
    // -q x + m x / (1 + x^10) = 0 at x = 1 since m/q - 1 = 1
    MgParams p;
    p.history_value = 1.0;
    const Series s = mackey_glass(p, 500);
    for (double x : s.values) {
        CHECK(std::abs(x - 1.0) <= 1e-9);
    }
}

TEST_CASE("mg chaotic run stays on the known attractor range") {
    const Series s = mackey_glass({}, 500);
    REQUIRE(s.values.size() == 500);
    CHECK(s.origin == SeriesOrigin::MackeyGlass);
    double lo = 1e9, hi = -1e9;
    for (double x : s.values) {
        CHECK(std::isfinite(x));
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    CHECK(lo > 0.1);
    CHECK(hi < 1.6);
    CHECK(hi - lo > 0.5); // actually oscillating, not settled
}

TEST_CASE("mg dt-halving agrees on a short horizon") {
    // Chaos amplifies discretization differences exponentially, so a tight
    // per-sample bound is only meaningful before the Lyapunov growth reaches
    // the tolerance; the acceptance suite documents the long-horizon behavior.
    MgParams coarse;
    MgParams fine;
    fine.dt = 0.05;
    const Series a = mackey_glass(coarse, 30);
    const Series b = mackey_glass(fine, 30);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        CHECK(std::abs(a.values[i] - b.values[i]) < 1e-4);
    }
}

TEST_CASE("mg x0 override seeds the grid") {
    MgParams p;
    p.warmup = 0;
    const Series a = mackey_glass(p, 3, 0.9);
    const Series b = mackey_glass(p, 3);
    CHECK(a.values[0] == 0.9);
    CHECK(b.values[0] == 1.2);
}

TEST_CASE("mg parameter validation") {
    MgParams bad_dt;
    bad_dt.dt = 0.0;
    CHECK_THROWS_AS(mackey_glass(bad_dt, 10), ContractViolation);

    MgParams bad_tau;
    bad_tau.tau = 0.25; // not a multiple of dt = 0.1
    CHECK_THROWS_AS(mackey_glass(bad_tau, 10), ContractViolation);

    MgParams bad_period;
    bad_period.sample_period = 0.35;
    CHECK_THROWS_AS(mackey_glass(bad_period, 10), ContractViolation);

    CHECK_THROWS_AS(mackey_glass({}, 0), ContractViolation);
}

TEST_CASE("embed by definition") {
    const Series s{{1.0, 2.0, 3.0, 4.0}, SeriesOrigin::External};
    const auto samples = embed(s, 2);
    REQUIRE(samples.size() == 2);
    CHECK(samples[0].input == std::vector{1.0, 2.0});
    CHECK(samples[0].desired == 3.0);
    CHECK(samples[1].input == std::vector{2.0, 3.0});
    CHECK(samples[1].desired == 4.0);
}

TEST_CASE("embed length and constant series") {
    Series s;
    s.values.assign(37, 2.5);
    const auto samples = embed(s, 5);
    CHECK(samples.size() == 32);
    for (const auto& sm : samples) {
        CHECK(sm.desired == 2.5);
        for (double x : sm.input) {
            CHECK(x == 2.5);
        }
    }
    CHECK_THROWS_AS(embed(Series{{1.0, 2.0}, SeriesOrigin::External}, 2), ContractViolation);
    CHECK_THROWS_AS(embed(s, 0), ContractViolation);
}

TEST_CASE("split is an order-preserving partition") {
    Series s;
    for (int i = 0; i < 20; ++i) {
        s.values.push_back(i);
    }
    const auto samples = embed(s, 1);
    const auto [train, test] = split(samples, 10, 5);
    CHECK(train.size() == 10);
    CHECK(test.size() == 5);
    for (std::size_t i = 0; i < train.size(); ++i) {
        CHECK(train[i].desired == samples[i].desired);
    }
    for (std::size_t i = 0; i < test.size(); ++i) {
        CHECK(test[i].desired == samples[10 + i].desired);
    }

    const auto [all, none] = split(samples, 12, 0);
    CHECK(none.empty());
    CHECK(all.size() == 12);

    CHECK_THROWS_AS(split(samples, 15, 10), ContractViolation);
}

TEST_CASE("load_sunspot accepts the shipped fixture") {
    const Series s = load_sunspot("data/sunspot_1700_1997.csv");
    CHECK(s.values.size() == 298);
    CHECK(s.origin == SeriesOrigin::Sunspot);
    CHECK(s.values[0] == 5.0); // year 1700
    for (double v : s.values) {
        CHECK(v >= 0.0);
        CHECK(v < 200.0);
    }
}

TEST_CASE("load_sunspot rejects malformed files") {
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_sunspot("/nonexistent/sunspots.csv"), IngestionError);
    }
    SUBCASE("empty file") {
        const auto path = write_temp("klmat_empty.csv", "");
        CHECK_THROWS_AS(load_sunspot(path), IngestionError);
    }
    SUBCASE("duplicated year names the line") {
        std::string content = "year,sunspots\n";
        for (int y = 1700; y <= 1750; ++y) {
            content += std::to_string(y) + ",1\n";
        }
        content += "1750,2\n"; // line 53
        const auto path = write_temp("klmat_dup.csv", content);
        try {
            load_sunspot(path);
            FAIL("expected IngestionError");
        } catch (const IngestionError& ex) {
            CHECK(ex.line() == 53);
        }
    }
    SUBCASE("non-numeric value") {
        const auto path = write_temp("klmat_nan.csv", "1700,five\n");
        CHECK_THROWS_AS(load_sunspot(path), IngestionError);
    }
    SUBCASE("wrong coverage") {
        std::string content;
        for (int y = 1700; y <= 1800; ++y) {
            content += std::to_string(y) + ",1\n";
        }
        const auto path = write_temp("klmat_short.csv", content);
        CHECK_THROWS_AS(load_sunspot(path), IngestionError);
    }
    SUBCASE("wrong start year") {
        const auto path = write_temp("klmat_start.csv", "1701,3\n");
        CHECK_THROWS_AS(load_sunspot(path), IngestionError);
    }
}
