#pragma once

#include <stdexcept>
#include <string>

namespace homsim {

struct MalformedInputError : std::runtime_error {
    explicit MalformedInputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptySpectrumError : std::runtime_error {
    explicit EmptySpectrumError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoDipError : std::runtime_error {
    explicit NoDipError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RangeError : std::runtime_error {
    explicit RangeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IdentifiabilityError : std::runtime_error {
    explicit IdentifiabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace homsim
