#include <cmath>
#include <limits>

#include "fbms/checks.hpp"

namespace fbms {

namespace {

using nlohmann::json;

// JSON has no NaN/inf; they round-trip through null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

const char* const kCheckKeys[] = {"name", "value", "margin", "scale", "status", "reason"};
const char* const kNumberKeys[] = {"area", "length", "convexity_constant", "sigma1", "total_curvature",
                                   "excluded_area_fraction", "boundary_area_fraction", "kg_intrinsic",
                                   "kg_extrinsic", "H_sup", "orth_defect", "isoperimetric_ratio"};

}  // namespace

void to_json(json& j, const CheckResult& c) {
    j = json{{"name", c.name},     {"value", number(c.value)},      {"margin", number(c.margin)},
             {"scale", number(c.scale)}, {"status", to_string(c.status)}, {"reason", c.reason}};
}

void from_json(const json& j, CheckResult& c) {
    c.name = j.at("name").get<std::string>();
    c.value = number_from(j.at("value"));
    c.margin = number_from(j.at("margin"));
    c.scale = number_from(j.at("scale"));
    c.status = check_status_from_string(j.at("status").get<std::string>());
    c.reason = j.at("reason").get<std::string>();
}

void to_json(json& j, const GeometryReport& r) {
    j = json::object();
    j["schema"] = r.schema;
    j["area"] = number(r.area);
    j["length"] = number(r.length);
    j["topology"] = {{"genus", r.topo.genus},
                     {"boundary_components", r.topo.boundary_components},
                     {"euler_characteristic", r.topo.euler_characteristic}};
    j["ambient"] = json::parse(r.ambient.empty() ? "null" : r.ambient);
    j["convexity_constant"] = number(r.convexity_constant);
    j["sigma1"] = number(r.sigma1);
    json eig = json::array();
    for (double x : r.spectrum.eigenvalues) eig.push_back(number(x));
    j["spectrum"] = {{"eigenvalues", eig},
                     {"multiplicity", r.spectrum.multiplicity},
                     {"multiplicity_gap", r.spectrum.multiplicity_gap},
                     {"sigma1_times_length", number(r.spectrum.sigma1_times_length)}};
    j["total_curvature"] = number(r.total_curvature);
    j["excluded_area_fraction"] = number(r.excluded_area_fraction);
    j["boundary_area_fraction"] = number(r.boundary_area_fraction);
    j["kg_intrinsic"] = number(r.kg_intrinsic);
    j["kg_extrinsic"] = number(r.kg_extrinsic);
    j["H_sup"] = number(r.H_sup);
    j["orth_defect"] = number(r.orth_defect);
    j["minimal"] = r.minimal;
    j["isoperimetric_ratio"] = number(r.isoperimetric_ratio);
    j["checks"] = r.checks;
    j["all_passed"] = r.all_passed();
}

void from_json(const json& j, GeometryReport& r) {
    r.schema = j.at("schema").get<int>();
    r.area = number_from(j.at("area"));
    r.length = number_from(j.at("length"));
    const json& t = j.at("topology");
    r.topo = {t.at("genus").get<int>(), t.at("boundary_components").get<int>(), t.at("euler_characteristic").get<int>()};
    r.ambient = j.at("ambient").is_null() ? std::string() : j.at("ambient").dump();
    r.convexity_constant = number_from(j.at("convexity_constant"));
    r.sigma1 = number_from(j.at("sigma1"));
    const json& s = j.at("spectrum");
    r.spectrum.eigenvalues.clear();
    for (const json& x : s.at("eigenvalues")) r.spectrum.eigenvalues.push_back(number_from(x));
    r.spectrum.multiplicity = s.at("multiplicity").get<std::vector<int>>();
    r.spectrum.multiplicity_gap = s.at("multiplicity_gap").get<double>();
    r.spectrum.sigma1_times_length = number_from(s.at("sigma1_times_length"));
    r.total_curvature = number_from(j.at("total_curvature"));
    r.excluded_area_fraction = number_from(j.at("excluded_area_fraction"));
    r.boundary_area_fraction = number_from(j.at("boundary_area_fraction"));
    r.kg_intrinsic = number_from(j.at("kg_intrinsic"));
    r.kg_extrinsic = number_from(j.at("kg_extrinsic"));
    r.H_sup = number_from(j.at("H_sup"));
    r.orth_defect = number_from(j.at("orth_defect"));
    r.minimal = j.at("minimal").get<bool>();
    r.isoperimetric_ratio = number_from(j.at("isoperimetric_ratio"));
    r.checks = j.at("checks").get<std::vector<CheckResult>>();
}

std::vector<std::string> validate_report_schema(const json& j) {
    std::vector<std::string> problems;
    if (!j.is_object()) return {"report is not a JSON object"};
    if (!j.contains("schema") || j["schema"] != 1) problems.emplace_back("missing or unsupported \"schema\" (expected 1)");
    for (const char* key : kNumberKeys) {
        if (!j.contains(key) || !(j[key].is_number() || j[key].is_null())) {
            problems.push_back(std::string("field \"") + key + "\" missing or not a number");
        }
    }
    for (const char* key : {"topology", "spectrum"}) {
        if (!j.contains(key) || !j[key].is_object()) problems.push_back(std::string("field \"") + key + "\" missing");
    }
    if (!j.contains("minimal") || !j["minimal"].is_boolean()) problems.emplace_back("field \"minimal\" missing");
    if (!j.contains("checks") || !j["checks"].is_array()) {
        problems.emplace_back("field \"checks\" missing or not an array");
        return problems;
    }
    for (std::size_t i = 0; i < j["checks"].size(); ++i) {
        const json& c = j["checks"][i];
        for (const char* key : kCheckKeys) {
            if (!c.is_object() || !c.contains(key)) {
                problems.push_back("check " + std::to_string(i) + " lacks \"" + key + "\"");
            }
        }
        if (c.is_object() && c.contains("status") && c["status"].is_string()) {
            const std::string st = c["status"].get<std::string>();
            if (st != "pass" && st != "fail" && st != "skipped") {
                problems.push_back("check " + std::to_string(i) + " has status \"" + st + "\"");
            }
        }
    }
    return problems;
}

}  // namespace fbms
