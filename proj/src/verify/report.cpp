#include "fksym/verify.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fksym {

namespace {

std::string fmt15(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

const char* criterion_name(Criterion c) {
    switch (c) {
    case Criterion::relative: return "relative";
    case Criterion::absolute: return "absolute";
    case Criterion::standard_errors: return "standard_errors";
    }
    return "relative";
}

// JSON has no NaN/inf; non-finite numbers become null.
nlohmann::ordered_json num(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json to_json_value(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["identity"] = r.identity;
    j["oracle"] = r.oracle;
    j["criterion"] = criterion_name(r.criterion);
    j["tolerance"] = r.tolerance;
    j["max_abs_err"] = num(r.max_abs_err);
    j["max_rel_err"] = num(r.max_rel_err);
    j["pass"] = r.pass;
    j["inconclusive"] = r.inconclusive;
    j["numerical_error"] = r.numerical_error;
    if (!r.note.empty()) j["note"] = r.note;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json jr;
        jr["grid_point"] = row.grid_point;
        jr["reference"] = num(row.reference);
        jr["computed"] = num(row.computed);
        jr["abs_err"] = num(row.abs_err);
        jr["rel_err"] = num(row.rel_err);
        if (!std::isnan(row.standard_error)) jr["standard_error"] = num(row.standard_error);
        jr["pass"] = row.pass;
        rows.push_back(jr);
    }
    j["rows"] = rows;
    return j;
}

} // namespace

VerificationReport::VerificationReport(std::string identity_, std::string oracle_,
                                       Criterion criterion_, double tolerance_)
    : identity(std::move(identity_)), oracle(std::move(oracle_)), criterion(criterion_),
      tolerance(tolerance_) {}

void VerificationReport::add(const std::string& grid_point, double reference, double computed,
                             double standard_error) {
    ReportRow row;
    row.grid_point = grid_point;
    row.reference = reference;
    row.computed = computed;
    row.abs_err = std::fabs(computed - reference);
    row.rel_err = reference != 0.0 ? row.abs_err / std::fabs(reference)
                                   : (row.abs_err == 0.0 ? 0.0 : INFINITY);
    row.standard_error = standard_error;
    switch (criterion) {
    case Criterion::relative:
        row.pass = row.rel_err < tolerance || row.abs_err < abs_floor;
        break;
    case Criterion::absolute:
        row.pass = row.abs_err < tolerance;
        break;
    case Criterion::standard_errors:
        row.pass = row.abs_err <= tolerance * standard_error;
        break;
    }
    if (!std::isfinite(computed)) row.pass = false;
    max_abs_err = std::max(max_abs_err, row.abs_err);
    max_rel_err = std::max(max_rel_err, row.rel_err);
    pass = pass && row.pass;
    rows.push_back(row);
}

void VerificationReport::add_judged(const std::string& grid_point, double reference,
                                    double computed, bool row_pass) {
    ReportRow row;
    row.grid_point = grid_point;
    row.reference = reference;
    row.computed = computed;
    row.abs_err = std::fabs(computed - reference);
    row.rel_err = reference != 0.0 ? row.abs_err / std::fabs(reference) : row.abs_err;
    row.pass = row_pass;
    max_abs_err = std::max(max_abs_err, row.abs_err);
    max_rel_err = std::max(max_rel_err, row.rel_err);
    pass = pass && row_pass;
    rows.push_back(row);
}

void VerificationReport::add_error(const std::string& grid_point, const std::string& message) {
    ReportRow row;
    row.grid_point = grid_point;
    row.reference = row.computed = row.abs_err = row.rel_err = NAN;
    row.pass = false;
    pass = false;
    note += (note.empty() ? "" : "; ") + grid_point + ": " + message;
    rows.push_back(row);
}

std::string VerificationReport::to_json() const { return to_json_value(*this).dump(2); }

std::string VerificationReport::to_csv(bool header) const {
    std::ostringstream out;
    if (header) out << "identity,grid_point,reference,computed,abs_err,rel_err,pass\r\n";
    for (const auto& row : rows) {
        out << csv_field(identity) << ',' << csv_field(row.grid_point) << ','
            << fmt15(row.reference) << ',' << fmt15(row.computed) << ',' << fmt15(row.abs_err)
            << ',' << fmt15(row.rel_err) << ',' << (row.pass ? "true" : "false") << "\r\n";
    }
    return out.str();
}

std::string reports_to_json(const std::vector<VerificationReport>& reports) {
    nlohmann::ordered_json doc;
    std::size_t passed = 0, inconclusive = 0;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        arr.push_back(to_json_value(r));
        passed += r.pass ? 1 : 0;
        inconclusive += r.inconclusive ? 1 : 0;
    }
    doc["reports"] = arr;
    doc["summary"] = {{"total", reports.size()},
                      {"passed", passed},
                      {"failed", reports.size() - passed},
                      {"inconclusive", inconclusive}};
    return doc.dump(2);
}

std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
    std::string out = "identity,grid_point,reference,computed,abs_err,rel_err,pass\r\n";
    for (const auto& r : reports) out += r.to_csv(false);
    return out;
}

std::string grid_label(const std::vector<std::pair<std::string, double>>& coords) {
    std::string out;
    for (const auto& [name, value] : coords) {
        if (!out.empty()) out += ',';
        out += name + '=' + fmt15(value);
    }
    return out;
}

} // namespace fksym
