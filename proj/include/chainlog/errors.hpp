#pragma once

#include <stdexcept>
#include <string>

namespace chainlog {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// -- hex / wire decoding --------------------------------------------------

struct MalformedQuantity : Error {
    using Error::Error;
};
struct MalformedAddress : Error {
    using Error::Error;
};
struct MalformedData : Error {
    using Error::Error;
};

// -- ABI codec ------------------------------------------------------------

struct TopicMismatch : Error {
    using Error::Error;
};
struct DataUnderflow : Error {
    using Error::Error;
};
struct OffsetOutOfBounds : Error {
    using Error::Error;
};
struct ArityMismatch : Error {
    using Error::Error;
};
struct TypeMismatch : Error {
    using Error::Error;
};

// -- node client ----------------------------------------------------------

struct TransportError : Error {
    using Error::Error;
};
// A JSON-RPC level error response. Never retried.
struct RpcError : Error {
    int code;
    RpcError(int code, const std::string& msg) : Error(msg), code(code) {}
};
struct BlockNotFound : Error {
    using Error::Error;
};
struct CallReverted : Error {
    using Error::Error;
};
struct DecodeError : Error {
    using Error::Error;
};

// -- compression ----------------------------------------------------------

struct FieldOutOfRange : Error {
    using Error::Error;
};
struct MissingField : Error {
    using Error::Error;
};
struct UnknownCode : Error {
    using Error::Error;
};
struct UnknownSource : Error {
    using Error::Error;
};

// -- extraction runtime ---------------------------------------------------

struct RangeUnresolvable : Error {
    using Error::Error;
};
struct SinkError : Error {
    using Error::Error;
};

// Entity-level evaluation failure. Recorded in the run summary and the
// offending entity's remaining body is skipped; the run continues.
struct EvalError : Error {
    enum class Category { Type, Scope, Arithmetic, Data };
    Category category;
    EvalError(Category cat, const std::string& msg) : Error(msg), category(cat) {}
};

inline EvalError divide_by_zero() {
    return EvalError(EvalError::Category::Arithmetic, "division by zero");
}

} // namespace chainlog
