#pragma once

#include <stdexcept>
#include <string>

namespace geonet {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An operation received an empty point/input set where at least one element is required.
struct EmptyInputError : Error {
    using Error::Error;
};

// A parameter is outside its documented range.
struct ParameterError : Error {
    using Error::Error;
};

// A candidate set is not contained in its reference set.
struct ContainmentError : Error {
    using Error::Error;
};

// A message payload kind is unknown to the bit-size schema.
struct SchemaError : Error {
    using Error::Error;
};

// A protocol tried to send a message larger than the per-message budget.
struct BudgetError : Error {
    explicit BudgetError(const std::string& kind, const std::string& what)
        : Error(what), message_kind(kind) {}
    std::string message_kind;
};

// The simulation did not reach quiescence within the event cap.
struct LivelockError : Error {
    using Error::Error;
};

// Network construction or validation failed.
struct NetworkError : Error {
    using Error::Error;
};

// Text input could not be parsed; carries a 1-based line number.
struct ParseError : Error {
    ParseError(std::size_t line_no, const std::string& what)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    std::size_t line;
};

}  // namespace geonet
