#include "willmore/errors.hpp"

namespace willmore {

namespace {

std::string join(const std::vector<std::string>& problems) {
    if (problems.empty()) return "invalid configuration";
    std::string out = problems.front();
    for (std::size_t k = 1; k < problems.size(); ++k) out += "; " + problems[k];
    return out;
}

}  // namespace

ConfigurationError::ConfigurationError(std::vector<std::string> problems)
    : Error(join(problems)), problems_(std::move(problems)) {}

}  // namespace willmore
