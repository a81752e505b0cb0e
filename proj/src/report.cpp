#include "leibniz/report.hpp"

#include <json.hpp>

#include <sstream>

namespace leibniz {

const char* status_name(CheckRecord::Status s) {
    switch (s) {
    case CheckRecord::Status::pass: return "pass";
    case CheckRecord::Status::fail: return "fail";
    case CheckRecord::Status::skip: return "skip";
    case CheckRecord::Status::probabilistic: return "probabilistic";
    }
    return "?";
}

std::string Report::text() const {
    std::ostringstream out;
    out << tool << " " << version << "  seed=" << seed << "  grid=" << grid
        << "  tol_linear=" << tol_linear << "  tol_residual=" << tol_residual << "\n";
    int pass = 0, fail = 0, skip = 0, prob = 0;
    for (const auto& c : checks) {
        out << "[" << status_name(c.status) << "] " << c.name;
        if (c.residual) {
            std::ostringstream r;
            r.precision(3);
            r << std::scientific << *c.residual;
            out << " (residual " << r.str() << ")";
        }
        if (!c.details.empty()) out << ": " << c.details;
        out << "\n";
        switch (c.status) {
        case CheckRecord::Status::pass: ++pass; break;
        case CheckRecord::Status::fail: ++fail; break;
        case CheckRecord::Status::skip: ++skip; break;
        case CheckRecord::Status::probabilistic: ++prob; break;
        }
    }
    out << "summary: " << pass << " pass, " << fail << " fail, " << skip << " skip, " << prob
        << " probabilistic\n";
    return out.str();
}

std::string Report::json() const {
    nlohmann::json j;
    j["tool"] = tool;
    j["version"] = version;
    j["seed"] = seed;
    j["grid"] = grid;
    j["tolerances"] = {{"linear", tol_linear}, {"residual", tol_residual}};
    auto arr = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json rec;
        rec["name"] = c.name;
        rec["status"] = status_name(c.status);
        if (!c.details.empty()) rec["details"] = c.details;
        if (c.residual) rec["residual"] = *c.residual;
        arr.push_back(rec);
    }
    j["checks"] = arr;
    j["summary"] = {{"failures", failures()}, {"total", checks.size()}};
    return j.dump(2) + "\n";
}

} // namespace leibniz
