#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "plume/kernels.hpp"
#include "plume/scenario.hpp"

using namespace plume;

TEST_CASE("zero noise reproduces the pure kernel evaluation") {
    const auto cfg = builtin_configuration("B");
    const std::vector<SourceSpec> one{cfg.sources[2]}; // S3
    const auto obs = simulate_observations(one, cfg.medium, BoundaryMode::Infinite,
                                           cfg.detectors, builtin_schedule(), {0.0, 1});
    for (std::size_t n = 0; n < obs.detector_count(); ++n)
        for (int k = 0; k < obs.sample_count(); ++k) {
            const SpaceTimePoint p{cfg.detectors.positions[n].x, cfg.detectors.positions[n].y,
                                   obs.schedule.time_at(k)};
            REQUIRE(obs.at(n, k) ==
                    conc_instant_point(p, one[0], cfg.medium, BoundaryMode::Infinite));
        }
}

TEST_CASE("configuration A columns peak after t = 0 and stay positive in total") {
    const auto cfg = builtin_configuration("A");
    REQUIRE(cfg.detectors.size() == 9);
    REQUIRE(cfg.sources.size() == 4);
    const auto obs = simulate_observations(cfg.sources, cfg.medium, BoundaryMode::Infinite,
                                           cfg.detectors, builtin_schedule(), {0.0, 1});
    for (int k = 0; k < obs.sample_count(); ++k) {
        double total = 0.0;
        for (std::size_t n = 0; n < obs.detector_count(); ++n) total += obs.at(n, k);
        REQUIRE(total > 0.0);
    }
    for (std::size_t n = 0; n < obs.detector_count(); ++n) {
        int argmax = 0;
        for (int k = 1; k < obs.sample_count(); ++k)
            if (obs.at(n, k) > obs.at(n, argmax)) argmax = k;
        REQUIRE(obs.schedule.time_at(argmax) > 0.0);
    }
}

TEST_CASE("superposition: co-located sources add strengths") {
    const auto cfg = builtin_configuration("B");
    SourceSpec a = cfg.sources[0];
    SourceSpec b = a;
    a.q = 0.2;
    b.q = 0.3;
    SourceSpec sum = a;
    sum.q = 0.5;
    const std::vector<SourceSpec> two{a, b}, one{sum};
    const auto obs2 = simulate_observations(two, cfg.medium, BoundaryMode::Infinite,
                                            cfg.detectors, builtin_schedule(), {0.0, 1});
    const auto obs1 = simulate_observations(one, cfg.medium, BoundaryMode::Infinite,
                                            cfg.detectors, builtin_schedule(), {0.0, 1});
    for (std::size_t i = 0; i < obs1.values.size(); ++i)
        REQUIRE(obs2.values[i] == Catch::Approx(obs1.values[i]).epsilon(1e-15));
}

TEST_CASE("noiseless linearity over source subsets is exact") {
    const auto cfg = builtin_configuration("B");
    const auto sched = builtin_schedule();
    const std::vector<SourceSpec> s01{cfg.sources[0], cfg.sources[1]};
    const std::vector<SourceSpec> s0{cfg.sources[0]}, s1{cfg.sources[1]};
    const auto all = simulate_observations(s01, cfg.medium, BoundaryMode::Infinite,
                                           cfg.detectors, sched, {0.0, 1});
    const auto a = simulate_observations(s0, cfg.medium, BoundaryMode::Infinite, cfg.detectors,
                                         sched, {0.0, 1});
    const auto b = simulate_observations(s1, cfg.medium, BoundaryMode::Infinite, cfg.detectors,
                                         sched, {0.0, 1});
    for (std::size_t i = 0; i < all.values.size(); ++i)
        REQUIRE(all.values[i] == a.values[i] + b.values[i]);
}

TEST_CASE("identical seeds give bit-identical matrices") {
    const auto cfg = builtin_configuration("B");
    const NoiseSpec noise{1e-3, 777};
    const auto x = simulate_observations(cfg.sources, cfg.medium, BoundaryMode::Infinite,
                                         cfg.detectors, builtin_schedule(), noise);
    const auto y = simulate_observations(cfg.sources, cfg.medium, BoundaryMode::Infinite,
                                         cfg.detectors, builtin_schedule(), noise);
    REQUIRE(x.values == y.values);
}

TEST_CASE("noise statistics match the spec over 1e5 cells") {
    // 50 detectors x 2000 samples of pure noise (no sources)
    DetectorArray det;
    for (int i = 0; i < 50; ++i) det.positions.push_back({0.1 * i, 0.0});
    SamplingSchedule sched{0.0, 500.0, 4};
    const double sigma = 1e-3;
    const auto obs = simulate_observations({}, {0.05, 0.005, 0.00125}, BoundaryMode::Infinite,
                                           det, sched, {sigma, 4242});
    const std::size_t n = obs.values.size();
    REQUIRE(n == 100000);
    double sum = 0.0, sum2 = 0.0;
    for (double v : obs.values) {
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    REQUIRE(std::fabs(mean) <= 3.0 * sigma / std::sqrt(static_cast<double>(n)));
    REQUIRE(var == Catch::Approx(sigma * sigma).epsilon(0.05));
}

TEST_CASE("built-in configuration values") {
    const auto b = builtin_configuration("B");
    REQUIRE(b.sources[0].x == -0.9);
    REQUIRE(b.sources[0].y == -0.8);
    REQUIRE(b.sources[0].q == 0.5);
    REQUIRE(b.sources[1].x == -0.1);
    REQUIRE(b.sources[1].y == -0.2);
    REQUIRE(b.sources[1].q == 0.7);
    REQUIRE(b.sources[2].x == -0.2);
    REQUIRE(b.sources[2].y == 0.6);
    REQUIRE(b.sources[2].q == 0.3);
    for (const auto& s : b.sources) REQUIRE(s.t0 == -10.0);

    const auto a = builtin_configuration("A");
    for (const auto& s : a.sources) REQUIRE(s.q == 0.5);
    REQUIRE(a.medium.u_x == 0.05);
    REQUIRE(a.medium.D_y / a.medium.D_x == 0.25);

    REQUIRE_THROWS_AS(builtin_configuration("C"), std::invalid_argument);
}

TEST_CASE("save/load round trip is bit-exact") {
    const auto cfg = builtin_configuration("B");
    const auto obs = simulate_observations(cfg.sources, cfg.medium, BoundaryMode::Infinite,
                                           cfg.detectors, builtin_schedule(), {1e-3, 99});
    const std::string path = "roundtrip_obs.csv";
    save_observations(obs, path);
    const auto back = load_observations(path);
    REQUIRE(back.values == obs.values);
    REQUIRE(back.detectors.size() == obs.detectors.size());
    for (std::size_t n = 0; n < obs.detectors.size(); ++n) {
        REQUIRE(back.detectors.positions[n].x == obs.detectors.positions[n].x);
        REQUIRE(back.detectors.positions[n].y == obs.detectors.positions[n].y);
    }
    REQUIRE(back.schedule.t_start == obs.schedule.t_start);
    REQUIRE(back.schedule.duration == obs.schedule.duration);
    REQUIRE(back.schedule.samples_per_year == obs.schedule.samples_per_year);
    REQUIRE(back.boundary == obs.boundary);
    REQUIRE(back.noise_std == obs.noise_std);
    REQUIRE(back.seed == obs.seed);
}

TEST_CASE("non-numeric cell reports line and column") {
    std::istringstream in(
        "# detector_x = 0,1\n"
        "# detector_y = 0,0\n"
        "# t_start = 0\n"
        "# duration = 0.5\n"
        "# samples_per_year = 4\n"
        "# boundary = infinite\n"
        "# noise_std = 0\n"
        "# seed = 1\n"
        "time,D1,D2\n"
        "0,1.5,2.5\n"
        "0.25,oops,2.5\n");
    try {
        load_observations(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(e.line() == 11);
        REQUIRE(e.col() == 6);
    }
}

TEST_CASE("header/body detector mismatch is a structural error") {
    // metadata says 5 detectors, body rows carry 4 values
    std::string head =
        "# detector_x = 0,1,2,3,4\n"
        "# detector_y = 0,0,0,0,0\n"
        "# t_start = 0\n"
        "# duration = 0.25\n"
        "# samples_per_year = 4\n"
        "# boundary = infinite\n"
        "# noise_std = 0\n"
        "# seed = 1\n";
    {
        std::istringstream in(head + "time,D1,D2,D3,D4,D5\n0,1,2,3,4\n");
        REQUIRE_THROWS_AS(load_observations(in), StructuralError);
    }
    {
        std::istringstream in(head + "time,D1,D2,D3,D4\n0,1,2,3,4\n");
        REQUIRE_THROWS_AS(load_observations(in), StructuralError);
    }
    {
        // row count shorter than the schedule
        std::istringstream in(head + "time,D1,D2,D3,D4,D5\n");
        REQUIRE_THROWS_AS(load_observations(in), StructuralError);
    }
}
