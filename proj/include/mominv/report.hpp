#pragma once

#include <json.hpp>
#include <sstream>
#include <string>

#include "invariants.hpp"

namespace mominv {

inline std::string moment_label(const MomentEntry& e) {
    switch (e.kind) {
    case MomentKind::Raw: {
        std::string s = "E[" + e.variable;
        if (e.order > 1) s += "^" + std::to_string(e.order);
        return s + "(n)]";
    }
    case MomentKind::Central:
        return "CM" + std::to_string(e.order) + "(" + e.variable + "(n))";
    case MomentKind::Variance:
        return "Var(" + e.variable + "(n))";
    case MomentKind::Covariance:
        return "Cov(" + e.variable + ", " + e.with + ")(n)";
    }
    return "?";
}

inline std::string moment_line(const MomentEntry& e) {
    std::ostringstream out;
    out << moment_label(e) << " = " << e.form.str();
    if (e.form.validity_start() > 0) {
        out << " [n >= " << e.form.validity_start() << "; earlier: ";
        const auto& pre = e.form.prefix();
        for (size_t i = 0; i < pre.size(); ++i) {
            if (i) out << ", ";
            out << pre[i].str();
        }
        out << "]";
    }
    if (!e.side_conditions.empty()) {
        out << " {";
        for (size_t i = 0; i < e.side_conditions.size(); ++i) {
            if (i) out << "; ";
            out << e.side_conditions[i] << " != 0";
        }
        out << "}";
    }
    return out.str();
}

inline std::string render_text(const InvariantReport& rep) {
    std::ostringstream out;
    for (const auto& e : rep.moments) out << moment_line(e) << "\n";
    return out.str();
}

inline const char* kind_name(MomentKind k) {
    switch (k) {
    case MomentKind::Raw: return "raw";
    case MomentKind::Central: return "central";
    case MomentKind::Variance: return "variance";
    case MomentKind::Covariance: return "covariance";
    }
    return "?";
}

inline nlohmann::json form_to_json(const CFinite& f) {
    nlohmann::json j;
    j["validity_start"] = f.validity_start();
    j["prefix"] = nlohmann::json::array();
    for (const auto& p : f.prefix()) j["prefix"].push_back(p.str());
    j["terms"] = nlohmann::json::array();
    for (const auto& t : f.terms()) {
        nlohmann::json jt;
        jt["base"] = t.base.str();
        jt["poly"] = nlohmann::json::array();
        for (const auto& c : t.poly.coeffs()) jt["poly"].push_back(c.str());
        j["terms"].push_back(std::move(jt));
    }
    return j;
}

inline nlohmann::json render_json(const InvariantReport& rep) {
    nlohmann::json j;
    j["program"] = rep.program;
    j["params"] = rep.params;
    j["moments"] = nlohmann::json::array();
    for (const auto& e : rep.moments) {
        nlohmann::json je;
        je["variable"] = e.variable;
        if (e.kind == MomentKind::Covariance) je["with"] = e.with;
        je["order"] = e.order;
        je["kind"] = kind_name(e.kind);
        je["closed_form"] = e.form.str();
        je.update(form_to_json(e.form));
        je["side_conditions"] = e.side_conditions;
        j["moments"].push_back(std::move(je));
    }
    return j;
}

} // namespace mominv
