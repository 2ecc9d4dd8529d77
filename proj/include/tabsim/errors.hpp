#ifndef TABSIM_ERRORS_HPP
#define TABSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tabsim {

/// Diagnostic codes for netlist parsing and graph validation.
enum class ParseErrorCode {
    UnknownElementPrefix,
    ArityError,
    InvalidNumber,
    DuplicateName,
    UnresolvedControlRef,
    DisconnectedGraph,
    SelfLoop,
    NonPositiveResistance,
    MissingGround,
};

const char* to_string(ParseErrorCode code);

/// Parse/validation failure. Always carries the 1-based line number of the
/// offending netlist line.
class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorCode code, int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " +
                             std::string(to_string(code)) + ": " + what),
          code_(code),
          line_(line) {}

    ParseErrorCode code() const { return code_; }
    int line() const { return line_; }

private:
    ParseErrorCode code_;
    int line_;
};

/// Which linear system tripped the singularity check.
enum class SingularContext {
    FullSystem,      // the assembled tableau L
    ZeroedControls,  // L with every control coefficient set to zero
    ControlSystem,   // the small system in the control variables
    NodalSystem,     // the nodal cross-check formulation
};

const char* to_string(SingularContext ctx);

/// A pivot fell below the singularity threshold: the circuit is ill-posed
/// (voltage loop, current cutset) or a gain sits at a critical value.
class SingularSystem : public std::runtime_error {
public:
    SingularSystem(SingularContext context, int pivot_index)
        : std::runtime_error(std::string(to_string(context)) +
                             " is singular (pivot " +
                             std::to_string(pivot_index) + ")"),
          context_(context),
          pivot_index_(pivot_index) {}

    SingularContext context() const { return context_; }
    int pivot_index() const { return pivot_index_; }

private:
    SingularContext context_;
    int pivot_index_;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An internal consistency check failed (solver residual, load line).
/// Indicates a defect, not a property of the input circuit.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The random generator could not produce a well-posed circuit within the
/// retry budget.
class GenerationExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tabsim

#endif
