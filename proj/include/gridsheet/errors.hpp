#pragma once

#include <stdexcept>
#include <string>

namespace gridsheet {

// Error categories; the CLI maps them onto process exit codes
// (validation/parse -> 2, provider -> 3, io -> 4).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct ProviderError : Error {
    using Error::Error;
};

}  // namespace gridsheet
