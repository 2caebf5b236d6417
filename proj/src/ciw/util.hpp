#pragma once

#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace ciw {

// Workbench error categories, mapped to CLI exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct AssertionError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

inline std::string strformat(const char* fmt, ...) {
    va_list ap;
    va_start(ap, fmt);
    char buf[1024];
    vsnprintf(buf, sizeof(buf), fmt, ap);
    va_end(ap);
    return std::string(buf);
}

// Shortest round-trippable decimal form, for deterministic text output.
inline std::string num_str(double v) {
    char buf[64];
    snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw AssertionError(msg);
}

}  // namespace ciw
