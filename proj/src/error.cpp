#include "letf/error.hpp"

namespace letf {

Error::Error(ErrorKind kind, std::string code, const std::string& detail)
    : std::runtime_error(code + ": " + detail), kind_(kind), code_(std::move(code)) {}

void throw_config(const std::string& code, const std::string& detail) {
    throw Error(ErrorKind::Config, code, detail);
}

void throw_data(const std::string& code, const std::string& detail) {
    throw Error(ErrorKind::Data, code, detail);
}

void throw_numerical(const std::string& code, const std::string& detail) {
    throw Error(ErrorKind::Numerical, code, detail);
}

}  // namespace letf
