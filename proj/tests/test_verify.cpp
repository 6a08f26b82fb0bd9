#include <doctest.h>

#include "qmlab/errors.hpp"
#include "qmlab/verify.hpp"

using namespace qmlab;

TEST_CASE("theorem suites pass on seeded instance classes") {
    const auto rep = verify::verify_theorems(1, 21);
    CHECK(rep.suites.size() == 7);
    CHECK(rep.failed == 0);
    CHECK(rep.all_ok);
    // the generators are built to be decisive: almost everything classifies
    CHECK(rep.passed >= 7 * 21 - rep.inconclusive - rep.skipped);
    CHECK(rep.inconclusive <= 7);
    for (const auto& s : rep.suites) {
        CHECK(s.requested == 21);
        CHECK(s.failed == 0);
        CHECK(s.worst_conclusion < 1e-6);
    }
}

TEST_CASE("theorem verification is deterministic in the seed") {
    const auto a = verify::render_report(verify::verify_theorems(7, 9));
    const auto b = verify::render_report(verify::verify_theorems(7, 9));
    CHECK(a == b);
    const auto c = verify::render_report(verify::verify_theorems(8, 9));
    CHECK(a != c);
}

TEST_CASE("an injected sign flip is caught and named") {
    const auto rep = verify::verify_theorems(1, 6, true);
    CHECK(rep.failed > 0);
    CHECK_FALSE(rep.all_ok);
    bool named = false;
    for (const auto& s : rep.suites)
        if (s.name == "observable_eigenstate" && s.failed > 0) named = true;
    CHECK(named);
    const auto text = verify::render_report(rep);
    CHECK(text.find("result FAIL") != std::string::npos);
    CHECK(text.find("sign-flip-hook") != std::string::npos);
}

TEST_CASE("verification rejects a nonpositive instance count") {
    CHECK_THROWS_AS(verify::verify_theorems(1, 0), ValidationError);
}
