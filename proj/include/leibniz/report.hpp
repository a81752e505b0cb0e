#ifndef LEIBNIZ_REPORT_HPP
#define LEIBNIZ_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace leibniz {

inline constexpr const char* kToolVersion = "0.1.0";

struct CheckRecord {
    enum class Status { pass, fail, skip, probabilistic };
    std::string name;
    Status status = Status::pass;
    std::string details;
    std::optional<double> residual;
};

// Deterministic run report: no timestamps, all inputs that influence results
// (seed, grid, tolerances) embedded so equal configurations yield identical
// bytes.
struct Report {
    std::string tool = "leibniz";
    std::string version = kToolVersion;
    std::uint64_t seed = 0;
    std::string grid = "default";
    double tol_linear = 1e-10;
    double tol_residual = 1e-8;
    std::vector<CheckRecord> checks;

    void add(std::string name, CheckRecord::Status status, std::string details = "",
             std::optional<double> residual = std::nullopt) {
        checks.push_back({std::move(name), status, std::move(details), residual});
    }
    void pass(std::string name, std::string details = "",
              std::optional<double> residual = std::nullopt) {
        add(std::move(name), CheckRecord::Status::pass, std::move(details), residual);
    }
    void fail(std::string name, std::string details = "",
              std::optional<double> residual = std::nullopt) {
        add(std::move(name), CheckRecord::Status::fail, std::move(details), residual);
    }

    int failures() const {
        int n = 0;
        for (const auto& c : checks)
            if (c.status == CheckRecord::Status::fail) ++n;
        return n;
    }
    bool all_passed() const { return failures() == 0; }
    // 0 = all pass (probabilistic records allowed), 1 = any fail
    int exit_code() const { return all_passed() ? 0 : 1; }

    std::string text() const;
    std::string json() const;
};

const char* status_name(CheckRecord::Status s);

} // namespace leibniz

#endif
