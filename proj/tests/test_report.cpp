#include <doctest.h>

#include "qmlab/report.hpp"

using namespace qmlab;

TEST_CASE("numbers render with 12 significant digits and a dot separator") {
    CHECK(report::fmt(0.5) == "0.5");
    CHECK(report::fmt(1.0 / 3.0) == "0.333333333333");
    CHECK(report::fmt(1234567890123.0) == "1.23456789012e+12");
    CHECK(report::fmt(-0.0001220703125) == "-0.0001220703125");
    CHECK(report::kv("rho", 0.25) == "rho=0.25");
}

TEST_CASE("sweep rows serialize to the pinned CSV layout") {
    const models::SweepRow row{2.0, 0.5, 0.125, 0.625, 0.8, 1.0, 1e-9};
    const auto text = report::sweep_csv(std::span(&row, 1));
    CHECK(text ==
          "lambda,var_aq,var_bp_scaled,var_E,rho_obs,rho_value_cell0,"
          "truncation_defect\n"
          "2,0.5,0.125,0.625,0.8,1,1e-09\n");
}
