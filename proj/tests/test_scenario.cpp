#include "qmlab/scenario.hpp"

#include "qmlab/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

using namespace qmlab;

TEST_CASE("builtin cnot fixture") {
    const auto sc = scenario::builtin("cnot");
    CHECK(sc.scheme.dim_object() == 2);
    CHECK(sc.scheme.dim_apparatus() == 2);
    CHECK(sc.scale.size() == 2);
    CHECK(sc.name == "builtin:cnot");
    // Balanced superposition input.
    CHECK(sc.input.matrix()(0, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(scenario::builtin("cnot?x=1"), ValidationError);
}

TEST_CASE("builtin crot fixture and parameters") {
    const auto sc = scenario::builtin("crot");
    const auto povm = sc.scheme.measured_povm(sc.scale);
    // Right-angle default: the sharp-outcome effect is half a projection.
    CHECK(povm.at(1).matrix(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(povm.at(1).matrix(0, 0)) < 1e-12);

    char theta[40];
    std::snprintf(theta, sizeof theta, "crot?theta=%.17g", std::numbers::pi / 4);
    const auto half = scenario::builtin(theta);
    const double q = half.scheme.measured_povm(half.scale).at(1).matrix(1, 1).real();
    CHECK(q == doctest::Approx(std::pow(std::sin(std::numbers::pi / 8), 2.0))
                   .epsilon(1e-10));

    CHECK_THROWS_AS(scenario::builtin("crot?theta=3.5"), ValidationError);
    CHECK_THROWS_AS(scenario::builtin("crot?theta=abc"), ValidationError);
    CHECK_THROWS_AS(scenario::builtin("crot?foo=1"), ValidationError);
}

TEST_CASE("builtin shift3 fixture") {
    const auto sc = scenario::builtin("shift3");
    CHECK(sc.scheme.dim_object() == 3);
    CHECK(sc.scheme.dim_apparatus() == 3);
    CHECK(sc.scale.size() == 3);
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
            CHECK(sc.input.matrix()(m, n).real() ==
                  doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("builtin quad fixture and validation") {
    const auto sc = scenario::builtin("quad?N=16&lambda=1");
    CHECK(sc.scheme.dim_object() == 16);
    CHECK(sc.scheme.dim_apparatus() == 16);
    CHECK(sc.scale.size() == 2);

    const auto sq = scenario::builtin("quad?N=16&lambda=1&probe=squeezed:0.5&bins=4");
    CHECK(sq.scale.size() == 4);

    CHECK_THROWS_AS(scenario::builtin("quad?lambda=1"), ValidationError);
    CHECK_THROWS_AS(scenario::builtin("quad?N=16"), ValidationError);
    CHECK_THROWS_AS(scenario::builtin("quad?N=16&lambda=1&probe=foo"), ValidationError);
    CHECK_THROWS_AS(scenario::builtin("quad?N=16&lambda=1&nope=2"), ValidationError);
}

TEST_CASE("builtin dispatch and unknown fixtures") {
    const auto sc = scenario::load("builtin:cnot");
    CHECK(sc.name == "builtin:cnot");
    CHECK_THROWS_AS(scenario::builtin("nope"), ValidationError);
    CHECK_THROWS_AS(scenario::load("/nonexistent/path.json"), ValidationError);
}

namespace {

const char* kUnitaryText = R"({
  "name": "phase-probe",
  "coupling": {
    "kind": "unitary",
    "dim_object": 2,
    "dim_apparatus": 2,
    "matrix": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,[0,1]]]
  },
  "apparatus_state": {"vector": [1, 0]},
  "pointer": {"basis": 2},
  "input": {"vector": [0.6, 0.8]}
})";

} // namespace

TEST_CASE("json scenario with a complex entry round-trips") {
    const auto sc = scenario::from_json_text(kUnitaryText, "inline");
    CHECK(sc.name == "phase-probe");
    CHECK(sc.scheme.dim_object() == 2);
    CHECK(sc.scheme.coupling().kind() == scheme::Coupling::Kind::Unitary);
    CHECK(sc.input.matrix()(0, 0).real() == doctest::Approx(0.36).epsilon(1e-12));
    const CMatrix u = sc.scheme.coupling().dense_unitary();
    CHECK(u(3, 3).imag() == doctest::Approx(1.0).epsilon(1e-12));
    // Default scale: one cell per pointer outcome.
    CHECK(sc.scale.size() == 2);
}

TEST_CASE("json scenario supports files, scales, pointer maps, and effects") {
    const std::string text = R"({
      "coupling": {
        "kind": "product",
        "object_gen": [[1,0],[0,-1]],
        "apparatus_gen": [[0,[0,-1]],[[0,1],0]],
        "lambda": 0.9
      },
      "apparatus_state": {"vector": [1, 0]},
      "pointer": {
        "effects": [[[1,0],[0,0]], [[0,0],[0,1]]],
        "labels": [-1, 1]
      },
      "scale": [{"indices": [0, 1], "value": 7}],
      "input": {"matrix": [[0.5,0],[0,0.5]]}
    })";
    const std::string path = "/tmp/qmlab_scenario_test.json";
    {
        std::ofstream out(path);
        out << text;
    }
    const auto sc = scenario::load(path);
    CHECK(sc.name == path);
    CHECK(sc.scheme.coupling().kind() == scheme::Coupling::Kind::ProductUnitary);
    CHECK(sc.scheme.coupling().lambda() == doctest::Approx(0.9));
    CHECK(sc.scale.size() == 1);
    CHECK(sc.scale.cell(0).value == doctest::Approx(7.0));
    CHECK(sc.scheme.pointer().at(0).label == doctest::Approx(-1.0));
    std::remove(path.c_str());
}

TEST_CASE("json scenario accepts channel couplings") {
    const std::string text = R"({
      "coupling": {
        "kind": "channel",
        "dim_object": 2,
        "dim_apparatus": 2,
        "kraus": [[[1,0,0,0],[0,1,0,0],[0,0,0,1],[0,0,1,0]]]
      },
      "apparatus_state": {"vector": [1, 0]},
      "pointer": {"basis": 2},
      "input": {"vector": [0.6, 0.8]}
    })";
    const auto sc = scenario::from_json_text(text, "inline");
    CHECK_FALSE(sc.scheme.coupling().is_unitary());
    const auto povm = sc.scheme.measured_povm(sc.scale);
    CHECK(povm.at(1).matrix(1, 1).real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("json scenario rejects malformed input with positions") {
    CHECK_THROWS_WITH_AS(scenario::from_json_text("{\n  \"x\": }", "bad"),
                         doctest::Contains("bad:2:"), ValidationError);
    CHECK_THROWS_WITH_AS(scenario::from_json_text("{}", "bad"),
                         doctest::Contains("missing required field 'coupling'"),
                         ValidationError);

    // Ragged matrix rows.
    const std::string ragged = R"({
      "coupling": {"kind": "unitary", "dim_object": 2, "dim_apparatus": 1,
                   "matrix": [[1,0],[0]]},
      "apparatus_state": {"vector": [1]},
      "pointer": {"basis": 1},
      "input": {"vector": [1, 0]}
    })";
    CHECK_THROWS_AS(scenario::from_json_text(ragged, "inline"), ValidationError);

    // Zero input vector cannot be normalized.
    const std::string zero = R"({
      "coupling": {"kind": "unitary", "dim_object": 2, "dim_apparatus": 2,
                   "matrix": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]},
      "apparatus_state": {"vector": [1, 0]},
      "pointer": {"basis": 2},
      "input": {"vector": [0, 0]}
    })";
    CHECK_THROWS_AS(scenario::from_json_text(zero, "inline"), ValidationError);

    // Scale referencing a pointer index that does not exist.
    const std::string badscale = R"({
      "coupling": {"kind": "unitary", "dim_object": 2, "dim_apparatus": 2,
                   "matrix": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]},
      "apparatus_state": {"vector": [1, 0]},
      "pointer": {"basis": 2},
      "scale": [{"indices": [0, 5], "value": 0}],
      "input": {"vector": [1, 0]}
    })";
    CHECK_THROWS_AS(scenario::from_json_text(badscale, "inline"), ValidationError);
}
