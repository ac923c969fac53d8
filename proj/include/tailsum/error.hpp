#pragma once

#include <stdexcept>
#include <string>

namespace tailsum {

enum class ErrorCode {
    domain,       // argument outside the mathematical domain
    config,       // malformed configuration or grid
    boundary,     // parameters sit exactly on a case boundary
    unsupported,  // family or operation not available
    numeric,      // quadrature / root finding did not converge
    io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const char* what) {
    if (!ok) throw Error(code, what);
}

}  // namespace tailsum
