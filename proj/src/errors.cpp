#include "stockloan/errors.hpp"

namespace stockloan {

std::string_view kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Parameter: return "ParameterError";
    case ErrorKind::Regime: return "RegimeViolation";
    case ErrorKind::Arbitrage: return "ArbitrageViolation";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Grid: return "GridError";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

}  // namespace stockloan
