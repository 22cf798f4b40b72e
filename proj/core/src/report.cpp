#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "lpkit/verify.hpp"

namespace lpkit {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string report_json(const VerificationReport& report, bool include_timing) {
    ordered_json j;
    j["schema_version"] = VerificationReport::schema_version;
    j["suite"] = report.suite;
    j["status"] = report.passed() ? "pass" : "fail";
    ordered_json checks = ordered_json::array();
    for (const auto& c : report.checks) {
        ordered_json e;
        e["name"] = c.name;
        e["measured"] = number(c.measured);
        e["threshold"] = number(c.threshold);
        e["passed"] = c.passed();
        if (include_timing) e["runtime_s"] = c.runtime_s;
        checks.push_back(e);
    }
    j["checks"] = checks;
    ordered_json exps = ordered_json::array();
    for (const auto& ex : report.experiments) {
        ordered_json e;
        e["tag"] = std::string(to_string(ex.tag));
        e["grid"] = {{"dim", ex.spec.dim()}, {"points_per_axis", ex.spec.points_per_axis()}, {"period", ex.spec.period()}};
        e["params"] = {{"p", number(ex.params.p)},           {"q", number(ex.params.q)},
                       {"s", number(ex.params.s)},           {"lambda", number(ex.params.lambda)},
                       {"gamma", number(ex.params.gamma)},   {"nodes_per_octave", ex.params.nodes_per_octave}};
        e["corpus"] = {{"seed", ex.corpus_seed}, {"family", ex.corpus_family}};
        e["refined"] = ex.refined;
        e["entries"] = ex.records.size();
        e["excluded"] = ex.excluded;
        e["max_ratio"] = number(ex.max_ratio);
        e["median_ratio"] = number(ex.median_ratio);
        exps.push_back(e);
    }
    j["experiments"] = exps;
    ordered_json env = ordered_json::object();
    for (const auto& [k, v] : report.environment) env[k] = v;
    j["environment"] = env;
    return j.dump(2) + "\n";
}

std::string ratio_table_csv(const RatioExperiment& ex) {
    std::string out = "label,lhs,rhs,ratio\n";
    for (const auto& r : ex.records)
        out += r.label + "," + format_g17(r.lhs) + "," + format_g17(r.rhs) + "," + format_g17(r.ratio) + "\n";
    return out;
}

}  // namespace lpkit
