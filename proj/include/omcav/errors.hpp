// errors.hpp — Error types shared across the library and the CLI exit-code map.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace omcav {

// Invalid or inconsistent run configuration. Collects every offending field.
class config_error : public std::runtime_error {
public:
    explicit config_error(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
    explicit config_error(const std::string& issue)
        : config_error(std::vector<std::string>{issue}) {}

    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid configuration";
        for (const auto& i : v) { s += "\n  - "; s += i; }
        return s;
    }
    std::vector<std::string> issues_;
};

// A numerical consistency check failed (non-convergence, invalid density matrix, ...).
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem failure while persisting results.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace omcav
