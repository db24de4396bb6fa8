#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mva {

enum class ErrorKind {
    Syntax,
    UnknownIdentifier,
    MalformedNumber,
    Domain,
    OrderOverflow,
    NotContraction,
    EscapesInterval,
    MaxIterExceeded,
    DegenerateFy,
    CannotCertify,
    OutsideNeighborhood,
    EndpointCollision,
    DegenerateProblem,
    NotASolution,
    SeedNotRegular,
    CorrectorDiverged,
    SeedSearchFailed,
    InvalidArgument,
    Io,
    UnknownFormat,
};

std::string_view to_string(ErrorKind kind);

/// Every failure the library reports. `kind()` is stable and is what callers
/// and the CLI switch on; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failures additionally carry the byte offset into the input text.
class ParseError : public Error {
public:
    ParseError(ErrorKind kind, std::size_t offset, const std::string& message);

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace mva
