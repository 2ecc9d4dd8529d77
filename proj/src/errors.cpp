#include "tabsim/errors.hpp"

namespace tabsim {

const char* to_string(ParseErrorCode code) {
    switch (code) {
        case ParseErrorCode::UnknownElementPrefix: return "unknown element prefix";
        case ParseErrorCode::ArityError: return "wrong number of fields";
        case ParseErrorCode::InvalidNumber: return "invalid numeric literal";
        case ParseErrorCode::DuplicateName: return "duplicate branch name";
        case ParseErrorCode::UnresolvedControlRef: return "unresolved control reference";
        case ParseErrorCode::DisconnectedGraph: return "disconnected graph";
        case ParseErrorCode::SelfLoop: return "self loop";
        case ParseErrorCode::NonPositiveResistance: return "non-positive resistance";
        case ParseErrorCode::MissingGround: return "missing ground node";
    }
    return "parse error";
}

const char* to_string(SingularContext ctx) {
    switch (ctx) {
        case SingularContext::FullSystem: return "tableau system";
        case SingularContext::ZeroedControls: return "zeroed-control tableau system";
        case SingularContext::ControlSystem: return "control-variable system";
        case SingularContext::NodalSystem: return "nodal system";
    }
    return "linear system";
}

}  // namespace tabsim
