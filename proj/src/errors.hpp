#pragma once

#include <stdexcept>

namespace teflow {

/// File could not be opened, read, or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Too few samples/states/neighbors for the requested operation. Derives
/// from invalid_argument: it is a precondition failure, just one worth a
/// distinct status code at the C boundary.
struct InsufficientData : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace teflow
