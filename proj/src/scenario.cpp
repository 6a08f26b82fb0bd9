#include "qmlab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qmlab/errors.hpp"
#include "qmlab/linop.hpp"
#include "qmlab/models.hpp"

namespace qmlab::scenario {
namespace {

using nlohmann::json;
using quantum::State;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError(where + ": " + what);
}

/// Translate a byte offset from the JSON parser into line:column.
std::pair<int, int> line_col(const std::string& text, size_t byte) {
    int line = 1, col = 1;
    for (size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

Complex parse_complex(const json& j, const std::string& where) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    fail(where, "expected a number or an [re, im] pair");
}

CVector parse_cvector(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array");
    CVector v(static_cast<Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i)
        v(static_cast<Index>(i)) =
            parse_complex(j[i], where + "[" + std::to_string(i) + "]");
    return v;
}

CMatrix parse_cmatrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
    const size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        fail(where, "expected nested arrays (row-major matrix)");
    const size_t cols = j[0].size();
    CMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (size_t r = 0; r < rows; ++r) {
        const std::string rw = where + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != cols) fail(rw, "ragged matrix row");
        for (size_t c = 0; c < cols; ++c)
            m(static_cast<Index>(r), static_cast<Index>(c)) =
                parse_complex(j[r][c], rw + "[" + std::to_string(c) + "]");
    }
    return m;
}

double require_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number())
        fail(where, std::string("missing numeric field '") + key + "'");
    return j[key].get<double>();
}

Index require_dim(const json& j, const char* key, const std::string& where) {
    const double v = require_number(j, key, where);
    if (v < 1 || v != std::floor(v)) fail(where, std::string(key) + " must be a positive integer");
    return static_cast<Index>(v);
}

State parse_state(const json& j, const std::string& where) {
    if (j.is_object() && j.contains("vector")) {
        CVector v = parse_cvector(j["vector"], where + ".vector");
        const double n = v.norm();
        if (n <= 0.0) fail(where, "zero state vector");
        return State::vector_state(v / n);
    }
    if (j.is_object() && j.contains("matrix"))
        return State(parse_cmatrix(j["matrix"], where + ".matrix"));
    fail(where, "expected {\"vector\": ...} or {\"matrix\": ...}");
}

quantum::Povm parse_pointer(const json& j, const std::string& where) {
    if (j.is_object() && j.contains("basis")) {
        return quantum::basis_povm(require_dim(j, "basis", where));
    }
    if (j.is_object() && j.contains("effects")) {
        const json& eff = j["effects"];
        if (!eff.is_array() || eff.empty()) fail(where, "effects must be a nonempty array");
        std::vector<double> labels;
        if (j.contains("labels")) {
            if (!j["labels"].is_array() || j["labels"].size() != eff.size())
                fail(where, "labels must match the effects in length");
            for (const auto& l : j["labels"]) {
                if (!l.is_number()) fail(where, "labels must be numbers");
                labels.push_back(l.get<double>());
            }
        }
        std::vector<quantum::Effect> effects;
        for (size_t i = 0; i < eff.size(); ++i) {
            const std::string ew = where + ".effects[" + std::to_string(i) + "]";
            effects.emplace_back(parse_cmatrix(eff[i], ew),
                                 labels.empty() ? static_cast<double>(i) : labels[i]);
        }
        return quantum::Povm(std::move(effects));
    }
    fail(where, "expected {\"basis\": d} or {\"effects\": [...]}");
}

scheme::Coupling parse_coupling(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        fail(where, "missing string field 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "unitary") {
        const Index ds = require_dim(j, "dim_object", where);
        const Index da = require_dim(j, "dim_apparatus", where);
        if (!j.contains("matrix")) fail(where, "unitary coupling needs 'matrix'");
        return scheme::Coupling::unitary(parse_cmatrix(j["matrix"], where + ".matrix"),
                                         ds, da);
    }
    if (kind == "product") {
        if (!j.contains("object_gen") || !j.contains("apparatus_gen"))
            fail(where, "product coupling needs 'object_gen' and 'apparatus_gen'");
        const double lambda = require_number(j, "lambda", where);
        return scheme::Coupling::product(
            parse_cmatrix(j["object_gen"], where + ".object_gen"),
            parse_cmatrix(j["apparatus_gen"], where + ".apparatus_gen"), lambda);
    }
    if (kind == "channel") {
        const Index ds = require_dim(j, "dim_object", where);
        const Index da = require_dim(j, "dim_apparatus", where);
        if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty())
            fail(where, "channel coupling needs a nonempty 'kraus' array");
        std::vector<CMatrix> kraus;
        for (size_t i = 0; i < j["kraus"].size(); ++i)
            kraus.push_back(parse_cmatrix(j["kraus"][i],
                                          where + ".kraus[" + std::to_string(i) + "]"));
        return scheme::Coupling::channel(std::move(kraus), ds, da);
    }
    fail(where, "kind must be \"unitary\", \"product\", or \"channel\"");
}

scheme::ReadingScale parse_scale(const json& j, int n_pointer,
                                 const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of cells");
    std::vector<scheme::ReadingCell> cells;
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string cw = where + "[" + std::to_string(i) + "]";
        const json& c = j[i];
        if (!c.is_object() || !c.contains("indices") || !c["indices"].is_array())
            fail(cw, "expected {\"indices\": [...], \"value\": v}");
        scheme::ReadingCell cell;
        for (const auto& ix : c["indices"]) {
            if (!ix.is_number_integer()) fail(cw, "indices must be integers");
            cell.pointer_indices.push_back(ix.get<int>());
        }
        cell.value = require_number(c, "value", cw);
        cells.push_back(std::move(cell));
    }
    return scheme::ReadingScale(std::move(cells), n_pointer);
}

// --- builtin fixtures -------------------------------------------------------

std::map<std::string, std::string> parse_query(const std::string& q,
                                               const std::string& where) {
    std::map<std::string, std::string> out;
    size_t pos = 0;
    while (pos < q.size()) {
        const size_t amp = q.find('&', pos);
        const std::string item =
            q.substr(pos, amp == std::string::npos ? std::string::npos : amp - pos);
        const size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            fail(where, "query items must look like key=value");
        out[item.substr(0, eq)] = item.substr(eq + 1);
        pos = amp == std::string::npos ? q.size() : amp + 1;
    }
    return out;
}

double to_double(const std::string& s, const std::string& where) {
    size_t idx = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &idx);
    } catch (const std::invalid_argument&) {
        fail(where, "not a number: '" + s + "'");
    } catch (const std::out_of_range&) {
        fail(where, "number out of range: '" + s + "'");
    }
    if (idx != s.size()) fail(where, "trailing characters in number '" + s + "'");
    return v;
}

Index to_index(const std::string& s, const std::string& where) {
    const double v = to_double(s, where);
    if (v < 1 || v != std::floor(v)) fail(where, "expected a positive integer");
    return static_cast<Index>(v);
}

State plus_state() {
    CVector v(2);
    v << 1.0, 1.0;
    return State::vector_state(v / v.norm());
}

Scenario builtin_cnot() {
    auto s = models::build_cnot();
    auto r = s.default_scale();
    return {std::move(s), plus_state(), std::move(r), "builtin:cnot"};
}

Scenario builtin_crot(const std::map<std::string, std::string>& q) {
    double theta = std::numbers::pi / 2;
    for (const auto& [k, v] : q) {
        if (k == "theta")
            theta = to_double(v, "builtin:crot theta");
        else
            fail("builtin:crot", "unknown parameter '" + k + "'");
    }
    auto s = models::build_controlled_rotation(theta);
    auto r = s.default_scale();
    return {std::move(s), plus_state(), std::move(r), "builtin:crot"};
}

Scenario builtin_shift3() {
    auto s = models::build_shift_model(3, {0, 1, 2});
    auto r = s.default_scale();
    CVector u(3);
    u << 1.0, 1.0, 1.0;
    return {std::move(s), State::vector_state(u / u.norm()), std::move(r),
            "builtin:shift3"};
}

Scenario builtin_quad(const std::map<std::string, std::string>& q) {
    Index n = 0, bins = 2;
    double lambda = 0.0, alpha = 1.0;
    std::string probe_spec = "vacuum";
    for (const auto& [k, v] : q) {
        if (k == "N")
            n = to_index(v, "builtin:quad N");
        else if (k == "lambda")
            lambda = to_double(v, "builtin:quad lambda");
        else if (k == "alpha")
            alpha = to_double(v, "builtin:quad alpha");
        else if (k == "bins")
            bins = to_index(v, "builtin:quad bins");
        else if (k == "probe")
            probe_spec = v;
        else
            fail("builtin:quad", "unknown parameter '" + k + "'");
    }
    if (n == 0) fail("builtin:quad", "missing required parameter N");
    if (lambda == 0.0) fail("builtin:quad", "missing required parameter lambda");

    CVector probe;
    if (probe_spec == "vacuum")
        probe = models::vacuum_state(n);
    else if (probe_spec.rfind("squeezed:", 0) == 0)
        probe = models::squeezed_probe(
            n, to_double(probe_spec.substr(9), "builtin:quad probe"));
    else
        fail("builtin:quad", "probe must be 'vacuum' or 'squeezed:R'");

    const State signal =
        alpha == 0.0 ? State::vector_state(models::vacuum_state(n))
                     : State::vector_state(models::coherent_state(n, alpha));
    auto m = models::build_quadrature_model(n, lambda, probe, signal, bins);
    return {std::move(m.scheme), signal, std::move(m.scale), "builtin:quad"};
}

} // namespace

Scenario from_json_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte);
        std::ostringstream msg;
        msg << origin << ":" << line << ":" << col << ": " << e.what();
        throw ValidationError(msg.str());
    }
    if (!doc.is_object()) fail(origin, "top level must be an object");
    for (const char* key : {"coupling", "apparatus_state", "pointer", "input"})
        if (!doc.contains(key))
            fail(origin, std::string("missing required field '") + key + "'");

    auto coupling = parse_coupling(doc["coupling"], origin + ": coupling");
    auto apparatus = parse_state(doc["apparatus_state"], origin + ": apparatus_state");
    auto pointer = parse_pointer(doc["pointer"], origin + ": pointer");

    std::vector<int> pointer_map;
    if (doc.contains("pointer_map")) {
        if (!doc["pointer_map"].is_array())
            fail(origin, "pointer_map must be an array of integers");
        for (const auto& v : doc["pointer_map"]) {
            if (!v.is_number_integer()) fail(origin, "pointer_map entries must be integers");
            pointer_map.push_back(v.get<int>());
        }
    }

    const int n_pointer = pointer.size();
    scheme::MeasurementScheme s(std::move(coupling), std::move(apparatus),
                                std::move(pointer), std::move(pointer_map));
    scheme::ReadingScale r = doc.contains("scale")
                                 ? parse_scale(doc["scale"], n_pointer, origin + ": scale")
                                 : s.default_scale();
    State input = parse_state(doc["input"], origin + ": input");
    std::string name = origin;
    if (doc.contains("name") && doc["name"].is_string())
        name = doc["name"].get<std::string>();
    return {std::move(s), std::move(input), std::move(r), std::move(name)};
}

Scenario load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str(), path);
}

Scenario builtin(const std::string& spec) {
    const size_t qmark = spec.find('?');
    const std::string name = spec.substr(0, qmark);
    const auto query =
        qmark == std::string::npos
            ? std::map<std::string, std::string>{}
            : parse_query(spec.substr(qmark + 1), "builtin:" + name);
    if (name == "cnot") {
        if (!query.empty()) fail("builtin:cnot", "takes no parameters");
        return builtin_cnot();
    }
    if (name == "crot") return builtin_crot(query);
    if (name == "shift3") {
        if (!query.empty()) fail("builtin:shift3", "takes no parameters");
        return builtin_shift3();
    }
    if (name == "quad") return builtin_quad(query);
    fail("builtin", "unknown fixture '" + name + "'");
}

Scenario load(const std::string& ref) {
    constexpr const char* kPrefix = "builtin:";
    if (ref.rfind(kPrefix, 0) == 0) return builtin(ref.substr(8));
    return load_file(ref);
}

} // namespace qmlab::scenario
