#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace willmore {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid domain, grid, or run configuration. Carries every problem found,
/// not only the first.
class ConfigurationError : public Error {
public:
    explicit ConfigurationError(const std::string& message)
        : Error(message), problems_{message} {}
    explicit ConfigurationError(std::vector<std::string> problems);

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

/// Stencil assembly failed; `nodes` lists the offending grid node indices.
class AssemblyError : public Error {
public:
    AssemblyError(const std::string& message, std::vector<int> nodes)
        : Error(message), nodes_(std::move(nodes)) {}

    const std::vector<int>& nodes() const noexcept { return nodes_; }

private:
    std::vector<int> nodes_;
};

class SolverError : public Error {
public:
    using Error::Error;
};

/// Linear solve finished but missed the residual tolerance.
class ConvergenceError : public SolverError {
public:
    ConvergenceError(const std::string& message, double achieved)
        : SolverError(message), achieved_(achieved) {}

    double achieved_residual() const noexcept { return achieved_; }

private:
    double achieved_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace willmore
