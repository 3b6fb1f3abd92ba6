#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace klmat {

// Precondition / invariant breach in caller-supplied data.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Iterative routine failed to converge; carries the last iterate.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, double last_iterate)
        : std::runtime_error(what), last_iterate_(last_iterate) {}
    double last_iterate() const noexcept { return last_iterate_; }

private:
    double last_iterate_;
};

// A filter produced a non-finite prediction, error, or coefficient.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::uint64_t step, double abs_error)
        : std::runtime_error("filter diverged at step " + std::to_string(step)),
          step_(step), abs_error_(abs_error) {}
    std::uint64_t step() const noexcept { return step_; }
    double abs_error() const noexcept { return abs_error_; }

private:
    std::uint64_t step_;
    double abs_error_;
};

// Input-file problem; carries the offending path and 1-based line number
// (line 0 when no specific line applies).
class IngestionError : public std::runtime_error {
public:
    IngestionError(const std::string& path, std::size_t line, const std::string& what)
        : std::runtime_error(path + (line ? ":" + std::to_string(line) : "") + ": " + what),
          path_(path), line_(line) {}
    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

} // namespace klmat
