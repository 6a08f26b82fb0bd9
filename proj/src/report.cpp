#include "qmlab/report.hpp"

#include <cstdio>

namespace qmlab::report {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string kv(const char* key, double v) {
    std::string out(key);
    out += '=';
    out += fmt(v);
    return out;
}

std::string sweep_csv(std::span<const models::SweepRow> rows) {
    std::string out =
        "lambda,var_aq,var_bp_scaled,var_E,rho_obs,rho_value_cell0,truncation_defect\n";
    for (const auto& r : rows) {
        out += fmt(r.lambda);
        out += ',';
        out += fmt(r.var_aq);
        out += ',';
        out += fmt(r.var_bp_scaled);
        out += ',';
        out += fmt(r.var_e);
        out += ',';
        out += fmt(r.rho_obs);
        out += ',';
        out += fmt(r.rho_value_cell0);
        out += ',';
        out += fmt(r.truncation_defect);
        out += '\n';
    }
    return out;
}

} // namespace qmlab::report
