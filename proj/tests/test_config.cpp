#include "saddlenode/config.hpp"
#include "saddlenode/pspace.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace saddlenode;
using config::json;

TEST_CASE("signal expressions parse from nested JSON") {
    const json j = json::parse(R"({
      "type": "sum",
      "terms": [
        {"type": "constant", "value": 400},
        {"type": "product", "factors": [
          {"type": "cos", "amplitude": 26, "omega": 40},
          {"type": "cos", "amplitude": 1, "omega": 40}
        ]}
      ]
    })");
    const TimeSignal s = config::signal_from_json(j);
    CHECK(s(0.0) == Catch::Approx(426.0));
    CHECK(s(0.1) == Catch::Approx(400.0 + 26.0 * std::cos(4.0) * std::cos(4.0)));
}

TEST_CASE("every constructor round-trips through JSON") {
    std::vector<TimeSignal> cases = {
        constant(2.5),
        harmonic(1.5, 0.7, 0.2, Waveform::sine),
        harmonic(-16.0, 6.28, 0.0, Waveform::cosine),
        scale_add(spline_bump(), 2.0, -1.0),
        bump_train(2),
        plateau_hat(3.0),
        arctan_blend(harmonic(1, 0.05, 0, Waveform::sine), -0.5, 0.5),
        shift(plateau_hat(1.0), -2.5),
        gaussian_factor(2.0, 10.0),
        product(constant(3.0), gaussian_factor(1.0, 1.0)),
        dense_orbit({plateau_hat(0.0), plateau_hat(1.0)}, PSpaceParams{1, 1}),
    };
    for (const auto& s : cases) {
        const json j = config::signal_to_json(s);
        const TimeSignal back = config::signal_from_json(j);
        for (double t = -9.0; t <= 9.0; t += 0.37)
            CHECK(back(t) == Catch::Approx(s(t)).margin(1e-14));
    }
}

TEST_CASE("unknown keys and types are rejected") {
    CHECK_THROWS_AS(config::signal_from_json(json::parse(R"({"type":"constant","valum":1})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(config::signal_from_json(json::parse(R"({"type":"sawtooth"})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(config::signal_from_json(json::parse(R"({"value": 1})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(config::signal_from_json(json::parse(R"({"type":"sum","terms":[]})")),
                    std::invalid_argument);
}
