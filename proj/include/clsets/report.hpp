#pragma once

#include <string>
#include <utility>
#include <vector>

namespace clsets {

/// One named comparison. Values are kept as decimal strings so reports never
/// carry floating point.
struct Check {
    std::string name;
    std::string expected;
    std::string actual;
    bool pass = false;
};

struct Report {
    std::vector<Check> checks;

    void add(std::string name, std::string expected, std::string actual) {
        bool ok = expected == actual;
        checks.push_back({std::move(name), std::move(expected), std::move(actual), ok});
    }
    void add_bool(std::string name, bool ok) {
        checks.push_back({std::move(name), "true", ok ? "true" : "false", ok});
    }
    void merge(const std::string& prefix, const Report& other) {
        for (const auto& c : other.checks) checks.push_back({prefix + c.name, c.expected, c.actual, c.pass});
    }
    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    std::vector<Check> failures() const {
        std::vector<Check> out;
        for (const auto& c : checks)
            if (!c.pass) out.push_back(c);
        return out;
    }
};

}  // namespace clsets
