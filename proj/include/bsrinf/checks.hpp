#pragma once

#include <string>
#include <vector>

namespace bsrinf {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CheckList {
    std::vector<CheckResult> checks;

    void add(std::string name, bool passed, std::string detail = {}) {
        checks.push_back({std::move(name), passed, std::move(detail)});
    }

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

} // namespace bsrinf
