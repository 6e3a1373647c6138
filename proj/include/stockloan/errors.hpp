#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stockloan {

enum class ErrorKind {
    Parameter,
    Regime,
    Arbitrage,
    Domain,
    Grid,
    NonConvergence,
    Config,
    NoBracket,
    Parse,
    Io,
};

/// Machine-readable name used as the prefix of CLI error lines.
std::string_view kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define STOCKLOAN_DEFINE_ERROR(Name, Kind)                                     \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& message) : Error(Kind, message) {}    \
    };

STOCKLOAN_DEFINE_ERROR(ParameterError, ErrorKind::Parameter)
STOCKLOAN_DEFINE_ERROR(RegimeViolation, ErrorKind::Regime)
STOCKLOAN_DEFINE_ERROR(ArbitrageViolation, ErrorKind::Arbitrage)
STOCKLOAN_DEFINE_ERROR(DomainError, ErrorKind::Domain)
STOCKLOAN_DEFINE_ERROR(GridError, ErrorKind::Grid)
STOCKLOAN_DEFINE_ERROR(ConfigError, ErrorKind::Config)
STOCKLOAN_DEFINE_ERROR(NoBracket, ErrorKind::NoBracket)
STOCKLOAN_DEFINE_ERROR(ParseError, ErrorKind::Parse)
STOCKLOAN_DEFINE_ERROR(IoError, ErrorKind::Io)

#undef STOCKLOAN_DEFINE_ERROR

/// PSOR ran out of iterations; carries the best residual reached.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& message, double best_residual)
        : Error(ErrorKind::NonConvergence, message), best_residual_(best_residual) {}

    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

}  // namespace stockloan
