#include <catch2/catch_amalgamated.hpp>

#include "qrng/config.hpp"
#include "qrng/params.hpp"

using Catch::Matchers::ContainsSubstring;
using namespace qrng;

TEST_CASE("validate accepts well-ordered defaults unchanged") {
    Config c;
    const Config v = validate(c);
    CHECK(v.laser.power == c.laser.power);
    CHECK(v.laser.coherence_time == c.laser.coherence_time);
    CHECK(v.chain.delay == c.chain.delay);
    CHECK(v.adc.bits == c.adc.bits);
    CHECK(v.sim.seed == c.sim.seed);
}

TEST_CASE("validate is idempotent") {
    Config c;
    c.laser.power = 2.5;
    c.chain.delay = 2e-9;
    c.chain.sampling_interval = 4e-9;
    c.sim.step_dt = 2e-10;
    const Config once = validate(c);
    const Config twice = validate(once);
    CHECK(serialize_config(once) == serialize_config(twice));
}

TEST_CASE("sampling interval must exceed response time") {
    Config c;
    c.chain.sampling_interval = 1e-9;
    c.chain.response_time = 2e-9;
    c.chain.delay = 1e-8;  // keep the step rule satisfiable
    c.sim.step_dt = 1e-11;
    REQUIRE_THROWS_MATCHES(validate(c), ValidationError,
                           Catch::Matchers::MessageMatches(
                               ContainsSubstring("sampling_interval must exceed response_time")));
}

TEST_CASE("coherence time must exceed response time") {
    Config c;
    c.laser.coherence_time = 1e-9;
    c.chain.response_time = 5e-9;
    c.chain.delay = 1e-7;
    c.chain.sampling_interval = 1e-7;
    c.sim.step_dt = 1e-9;
    REQUIRE_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("bin width follows from bit depth and range") {
    AdcParams adc;
    adc.bits = 8;
    adc.v_min = -1.0;
    adc.v_max = 1.0;
    check(adc);
    CHECK(adc.bin_count() == 256);
    CHECK(adc.bin_width() == 0.0078125);
}

TEST_CASE("field constraints are enforced with the field named") {
    SECTION("laser power") {
        Config c;
        c.laser.power = 0.0;
        REQUIRE_THROWS_MATCHES(
            validate(c), ValidationError,
            Catch::Matchers::MessageMatches(ContainsSubstring("laser.power")));
    }
    SECTION("coherence time") {
        Config c;
        c.laser.coherence_time = -1.0;
        REQUIRE_THROWS_MATCHES(
            validate(c), ValidationError,
            Catch::Matchers::MessageMatches(ContainsSubstring("laser.coherence_time")));
    }
    SECTION("classical variance may be zero but not negative") {
        Config c;
        c.laser.classical_phase_variance = 0.0;
        CHECK_NOTHROW(validate(c));
        c.laser.classical_phase_variance = -1e-9;
        REQUIRE_THROWS_AS(validate(c), ValidationError);
    }
    SECTION("gain") {
        Config c;
        c.chain.gain = 0.0;
        REQUIRE_THROWS_MATCHES(
            validate(c), ValidationError,
            Catch::Matchers::MessageMatches(ContainsSubstring("chain.gain")));
    }
    SECTION("delay") {
        Config c;
        c.chain.delay = -1e-9;
        REQUIRE_THROWS_AS(validate(c), ValidationError);
    }
    SECTION("adc range ordering") {
        Config c;
        c.adc.v_min = 1.0;
        c.adc.v_max = 1.0;
        REQUIRE_THROWS_MATCHES(
            validate(c), ValidationError,
            Catch::Matchers::MessageMatches(ContainsSubstring("v_min")));
    }
    SECTION("bit depth bounds") {
        Config c;
        c.adc.bits = 0;
        REQUIRE_THROWS_AS(validate(c), ValidationError);
        c.adc.bits = 25;
        REQUIRE_THROWS_AS(validate(c), ValidationError);
        c.adc.bits = 24;
        CHECK_NOTHROW(validate(c));
    }
    SECTION("trajectories") {
        Config c;
        c.sim.trajectories = 0;
        REQUIRE_THROWS_AS(validate(c), ValidationError);
    }
}

TEST_CASE("step size must resolve both delay and sampling interval") {
    Config c;
    c.chain.delay = 1e-9;
    c.chain.sampling_interval = 1e-9;
    c.sim.step_dt = 2e-10;  // only 5 steps per delay
    REQUIRE_THROWS_MATCHES(validate(c), ValidationError,
                           Catch::Matchers::MessageMatches(ContainsSubstring("step_dt")));
    c.sim.step_dt = 1e-10;  // exactly 10 steps: allowed
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("duration must cover one delayed sample") {
    Config c;
    c.sim.duration = 1e-9;  // shorter than delay + sampling interval
    c.chain.delay = 5e-10;
    c.chain.sampling_interval = 1e-9;
    c.sim.step_dt = 5e-11;
    REQUIRE_THROWS_MATCHES(
        validate(c), ValidationError,
        Catch::Matchers::MessageMatches(ContainsSubstring("shorter than delay")));
}
