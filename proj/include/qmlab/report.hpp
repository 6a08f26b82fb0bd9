#pragma once

#include <span>
#include <string>

#include "qmlab/models.hpp"

namespace qmlab::report {

/// One number, 12 significant digits, '.' decimal separator, no locale.
std::string fmt(double v);

/// "key=value" with the value through fmt.
std::string kv(const char* key, double v);

/// Sweep table as CSV: pinned header, one row per entry, '\n' line ends.
std::string sweep_csv(std::span<const models::SweepRow> rows);

} // namespace qmlab::report
