#include "mva/error.hpp"

namespace mva {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Syntax: return "SyntaxError";
        case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
        case ErrorKind::MalformedNumber: return "MalformedNumber";
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::OrderOverflow: return "OrderOverflow";
        case ErrorKind::NotContraction: return "NotContraction";
        case ErrorKind::EscapesInterval: return "EscapesInterval";
        case ErrorKind::MaxIterExceeded: return "MaxIterExceeded";
        case ErrorKind::DegenerateFy: return "DegenerateFy";
        case ErrorKind::CannotCertify: return "CannotCertify";
        case ErrorKind::OutsideNeighborhood: return "OutsideNeighborhood";
        case ErrorKind::EndpointCollision: return "EndpointCollision";
        case ErrorKind::DegenerateProblem: return "DegenerateProblem";
        case ErrorKind::NotASolution: return "NotASolution";
        case ErrorKind::SeedNotRegular: return "SeedNotRegular";
        case ErrorKind::CorrectorDiverged: return "CorrectorDiverged";
        case ErrorKind::SeedSearchFailed: return "SeedSearchFailed";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "IoError";
        case ErrorKind::UnknownFormat: return "UnknownFormat";
    }
    return "Error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

ParseError::ParseError(ErrorKind kind, std::size_t offset, const std::string& message)
    : Error(kind, message + " at offset " + std::to_string(offset)), offset_(offset) {}

}  // namespace mva
