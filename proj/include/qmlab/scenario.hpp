#pragma once

#include <string>

#include "qmlab/quantum.hpp"
#include "qmlab/scheme.hpp"

namespace qmlab::scenario {

/// A fully specified simulation case: the scheme, the object input state,
/// and the reading scale to report on.
struct Scenario {
    scheme::MeasurementScheme scheme;
    quantum::State input;
    scheme::ReadingScale scale;
    std::string name;
};

/// Parse a scenario from JSON text. `origin` names the source in error
/// messages; parse errors carry origin:line:column.
///
/// Document shape (complex entries are numbers or [re, im] pairs; matrices
/// are row-major nested arrays):
///   {
///     "name": "optional",
///     "coupling": {"kind": "unitary", "dim_object": 2, "dim_apparatus": 2,
///                  "matrix": [[...], ...]}
///               | {"kind": "product", "object_gen": [[...]],
///                  "apparatus_gen": [[...]], "lambda": 1.0}
///               | {"kind": "channel", "dim_object": 2, "dim_apparatus": 2,
///                  "kraus": [[[...]], ...]},
///     "apparatus_state": {"vector": [...]} | {"matrix": [[...]]},
///     "pointer": {"basis": 2} | {"effects": [[[...]], ...], "labels": [...]},
///     "pointer_map": [0, 1],            // optional
///     "input": {"vector": [...]} | {"matrix": [[...]]},
///     "scale": [{"indices": [0], "value": 0.0}, ...]   // optional
///   }
Scenario from_json_text(const std::string& text, const std::string& origin);

/// Read and parse a scenario file.
Scenario load_file(const std::string& path);

/// Built-in fixtures, addressed without the "builtin:" prefix:
///   cnot                          controlled flip, plus-state input
///   crot[?theta=R]                controlled rotation (default pi/2), plus input
///   shift3                        three-point shift register, uniform input
///   quad?N=..&lambda=..[&alpha=..][&bins=..][&probe=vacuum|squeezed:R]
///                                 quadrature meter, coherent input
Scenario builtin(const std::string& spec);

/// Dispatch "builtin:NAME" to builtin(), anything else to load_file().
Scenario load(const std::string& ref);

} // namespace qmlab::scenario
