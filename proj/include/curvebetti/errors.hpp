#pragma once

/**
 * @file errors.hpp
 * @brief Exception hierarchy shared by every curvebetti module.
 *
 * Arithmetic failures (non-exact division, negative Betti numbers, dimension
 * bookkeeping) derive from arithmetic_error; bad user input derives from
 * usage_error. The CLI maps the two families onto distinct exit codes.
 */

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace curvebetti {

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what), message_(what) {}

    const char* what() const noexcept override { return message_.c_str(); }

    /// Prefix the message with the location of the failure (AST path, step label).
    void add_context(const std::string& where) { message_ = where + ": " + message_; }

private:
    std::string message_;
};

class arithmetic_error : public error {
    using error::error;
};

class usage_error : public error {
    using error::error;
};

class non_exact_division : public arithmetic_error {
    using arithmetic_error::arithmetic_error;
};

class division_by_zero : public arithmetic_error {
    using arithmetic_error::arithmetic_error;
};

class negative_betti : public arithmetic_error {
    using arithmetic_error::arithmetic_error;
};

class dimension_mismatch : public arithmetic_error {
    using arithmetic_error::arithmetic_error;
};

class invalid_parameters : public usage_error {
    using usage_error::usage_error;
};

class parse_error : public usage_error {
public:
    parse_error(std::size_t offset, std::string expected, std::string found)
        : usage_error("parse error at offset " + std::to_string(offset) + ": expected " + expected +
                      ", found " + found),
          offset_(offset),
          expected_(std::move(expected)),
          found_(std::move(found)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }
    const std::string& found() const noexcept { return found_; }

private:
    std::size_t offset_;
    std::string expected_;
    std::string found_;
};

}  // namespace curvebetti
