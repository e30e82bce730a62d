#pragma once

#include <stdexcept>
#include <string>

namespace sme {

/// Raised on any contract violation (bad dimensions, out-of-box inputs,
/// malformed configuration). The message names the offending field.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw Error(what);
}

} // namespace sme
