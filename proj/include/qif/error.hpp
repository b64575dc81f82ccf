#pragma once

#include <stdexcept>
#include <string>

namespace qif {

/// A computation produced non-finite values or could not be stabilized.
/// Distinct from std::invalid_argument so callers can map input errors and
/// numerical aborts to different exit codes.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qif
