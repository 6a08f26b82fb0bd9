#pragma once

#include <string>
#include <vector>

#include "qmlab/scenario.hpp"

namespace qmlab::oracle {

/// One cross-checked quantity: its name and |main - brute force|.
struct Entry {
    std::string what;
    double discrepancy = 0.0;
};

struct OracleReport {
    std::vector<Entry> entries;
    double max_discrepancy = 0.0;
    double tol = 1e-8;
    bool ok = false;
};

/// Recompute every quantity the simulation reports — measured effects, cell
/// weights, component states, final reduced states, mixture/additivity and
/// pointer-definiteness residuals, and all three correlation readings —
/// through explicit product-basis sums with no shared code beyond the matrix
/// kernel, and compare. Product couplings additionally have their dense
/// exponential recomputed by an independent algorithm.
///
/// Guarded to small problems: throws DimensionError when the joint dimension
/// exceeds 16.
OracleReport cross_check(const scenario::Scenario& sc, double tol = 1e-8);

/// Line-oriented rendering: one line per quantity, then the maximum.
std::string render_report(const OracleReport& rep);

} // namespace qmlab::oracle
