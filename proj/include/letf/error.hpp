#pragma once

#include <stdexcept>
#include <string>

namespace letf {

/// Broad failure class. The CLI maps these onto exit codes 2, 3 and 4.
enum class ErrorKind { Config, Data, Numerical };

/// Error carrying a stable machine-readable code (e.g. "empty-series")
/// alongside the human-readable message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& detail);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

[[noreturn]] void throw_config(const std::string& code, const std::string& detail);
[[noreturn]] void throw_data(const std::string& code, const std::string& detail);
[[noreturn]] void throw_numerical(const std::string& code, const std::string& detail);

}  // namespace letf
