#pragma once

#include <stdexcept>
#include <string>

namespace rulepick {

enum class ErrorKind {
    domain,  // precondition violated by the caller's data
    input,   // malformed input file or stream
    config,  // bad option, unknown rule name, invalid parameter
    limit,   // a resource or enumeration limit was exceeded
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace rulepick
