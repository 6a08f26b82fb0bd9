#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmlab::verify {

/// Seeded structural checks of the measurement-theory implications the
/// library is built on. Each suite draws scheme/state instances from a
/// hypothesis class, evaluates the premise and conclusion residuals, and
/// classifies the instance:
///
///   orthogonality_mixture     orthogonal object components force the final
///                             apparatus state to be the weighted mixture of
///                             its conditioned states, with the pointer value
///                             definite on each (any scheme, forward only).
///   orthogonality_equivalence the same, as a biconditional for unitary
///                             schemes with vector inputs: contrapositive
///                             witnesses must break the mixture.
///   observable_eigenstate     conditioned object states being 1-eigenstates
///                             of their measured effects is equivalent (on a
///                             finite scale) to perfect object-pointer
///                             correlation in the final state.
///   value_eigenstate          the eigenstate condition forces perfect
///                             correlation of each effect with its pointer
///                             cell, and pointer value definiteness (forward
///                             only; the converse is false for unsharp
///                             observables).
///   sharp_equivalence         for a sharp measured observable the previous
///                             implication is a biconditional.
///   vector_components         for vector component states, component
///                             orthogonality is equivalent to perfect
///                             state correlation plus value definiteness.
///   reduced_state             the two reduced final states of a unitary
///                             vector scheme are perfectly correlated with
///                             equal spectra, whenever defined.
enum class Outcome { Pass, Fail, Inconclusive, Skipped };

const char* to_string(Outcome o);

struct TheoremInstance {
    std::string suite;
    int index = 0;
    std::string cls;  // generator class within the suite
    bool premise_holds = false;
    Outcome outcome = Outcome::Skipped;
    double premise_residual = 0.0;
    double conclusion_residual = 0.0;
    std::string note;
};

struct SuiteReport {
    std::string name;
    int requested = 0;
    std::vector<TheoremInstance> instances;
    int passed = 0;
    int failed = 0;
    int inconclusive = 0;
    int skipped = 0;
    double worst_premise = 0.0;     // over premise-holding instances
    double worst_conclusion = 0.0;  // over premise-holding passes
};

struct TheoremReport {
    std::uint64_t seed = 0;
    int count = 0;
    bool bug_injected = false;
    std::vector<SuiteReport> suites;
    int passed = 0;
    int failed = 0;
    int inconclusive = 0;
    int skipped = 0;
    bool all_ok = false;  // no failures anywhere
};

/// Run every suite with `count` instances each; deterministic in `seed`.
/// `inject_bug` flips the sign of one verified correlation so the harness
/// can prove it detects a regression.
TheoremReport verify_theorems(std::uint64_t seed, int count, bool inject_bug = false);

/// Line-oriented text rendering: one summary line per suite, one line per
/// non-passing instance, fixed 12-significant-digit numbers. Byte-stable
/// for equal inputs.
std::string render_report(const TheoremReport& rep);

} // namespace qmlab::verify
