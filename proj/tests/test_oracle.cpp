#include "qmlab/oracle.hpp"

#include "qmlab/errors.hpp"
#include "qmlab/scenario.hpp"

#include <doctest.h>

#include <algorithm>
#include <string>

using namespace qmlab;

namespace {

bool has_entry(const oracle::OracleReport& rep, const std::string& what) {
    return std::any_of(rep.entries.begin(), rep.entries.end(),
                       [&](const oracle::Entry& e) { return e.what == what; });
}

} // namespace

TEST_CASE("oracle agrees with the library on the basis-copy fixture") {
    const auto rep = oracle::cross_check(scenario::builtin("cnot"));
    CHECK(rep.ok);
    CHECK(rep.max_discrepancy < 1e-12);
    CHECK(has_entry(rep, "coupling_exponential"));
    CHECK(has_entry(rep, "effect[0]"));
    CHECK(has_entry(rep, "observable_table"));
    // Evenly-split entangled output: the reduced-state quantity degenerates,
    // and both routes must agree that it does.
    CHECK(has_entry(rep, "reduced_state_undefined"));
    CHECK_FALSE(has_entry(rep, "reduced_state_rho"));
}

TEST_CASE("oracle agrees with the library on the partial-rotation fixture") {
    const auto rep = oracle::cross_check(scenario::builtin("crot"));
    CHECK(rep.ok);
    CHECK(rep.max_discrepancy < 1e-10);
    // Non-flat spectrum: the reduced-state correlation is defined here.
    CHECK(has_entry(rep, "reduced_state_rho"));
    CHECK(has_entry(rep, "reduced_state_spectra"));
    CHECK(has_entry(rep, "value_rho[0]"));
    CHECK(has_entry(rep, "state_rho[0]"));
}

TEST_CASE("oracle agrees with the library on the register-shift fixture") {
    const auto rep = oracle::cross_check(scenario::builtin("shift3"));
    CHECK(rep.ok);
    CHECK(rep.max_discrepancy < 1e-10);
}

TEST_CASE("oracle handles channel couplings and skips out-of-scope checks") {
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
    const auto rep = oracle::cross_check(scenario::from_json_text(text, "inline"));
    CHECK(rep.ok);
    CHECK(rep.max_discrepancy < 1e-10);
    CHECK_FALSE(has_entry(rep, "coupling_exponential"));
    CHECK_FALSE(has_entry(rep, "reduced_state_rho"));
    CHECK_FALSE(has_entry(rep, "reduced_state_undefined"));
}

TEST_CASE("oracle cross-checks a generic factored coupling with mixed input") {
    const std::string text = R"({
      "coupling": {
        "kind": "product",
        "object_gen": [[0.9,0.2],[0.2,0.1]],
        "apparatus_gen": [[0,[0,-1]],[[0,1],0]],
        "lambda": 0.9
      },
      "apparatus_state": {"vector": [1, 0]},
      "pointer": {"basis": 2},
      "input": {"matrix": [[0.7,0.1],[0.1,0.3]]}
    })";
    const auto rep = oracle::cross_check(scenario::from_json_text(text, "inline"));
    CHECK(rep.ok);
    CHECK(rep.max_discrepancy < 1e-10);
    CHECK(has_entry(rep, "coupling_exponential"));
    // Mixed input: the reduced-state quantity is out of scope entirely.
    CHECK_FALSE(has_entry(rep, "reduced_state_rho"));
    CHECK_FALSE(has_entry(rep, "reduced_state_undefined"));
}

TEST_CASE("oracle refuses joint dimensions beyond the brute-force bound") {
    CHECK_THROWS_AS(oracle::cross_check(scenario::builtin("quad?N=16&lambda=1")),
                    DimensionError);
}

TEST_CASE("oracle report rendering") {
    const auto rep = oracle::cross_check(scenario::builtin("cnot"));
    const std::string text = oracle::render_report(rep);
    CHECK(text.find("check effect[0] discrepancy=") != std::string::npos);
    CHECK(text.find("max_discrepancy=") != std::string::npos);
    CHECK(text.find("result=PASS") != std::string::npos);

    oracle::OracleReport fail_rep = rep;
    fail_rep.ok = false;
    CHECK(oracle::render_report(fail_rep).find("result=FAIL") != std::string::npos);
}
