#pragma once

#include <stdexcept>
#include <string>

namespace walklab {

/// Failure categories raised by the library.  Each error carries a
/// human-readable message naming the offending line / state / quantity.
enum class Errc {
    SelfLoop,
    DuplicateEdge,
    Malformed,
    InvalidSize,
    InvalidParams,
    IsolatedNode,
    DeadEnd,
    NotIrreducible,
    NotErgodic,
    NoConvergence,
    Disconnected,
    UnknownState,
    Overflow,
    SolveFailure,
    NegativeEntry,
    ZeroBacktrack,
    NoCycleInBall,
    NeverReturned,
    BudgetExceeded,
    HypothesisViolated,
    PreconditionFailed,
    IoError,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::SelfLoop: return "SelfLoop";
        case Errc::DuplicateEdge: return "DuplicateEdge";
        case Errc::Malformed: return "Malformed";
        case Errc::InvalidSize: return "InvalidSize";
        case Errc::InvalidParams: return "InvalidParams";
        case Errc::IsolatedNode: return "IsolatedNode";
        case Errc::DeadEnd: return "DeadEnd";
        case Errc::NotIrreducible: return "NotIrreducible";
        case Errc::NotErgodic: return "NotErgodic";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::Disconnected: return "Disconnected";
        case Errc::UnknownState: return "UnknownState";
        case Errc::Overflow: return "Overflow";
        case Errc::SolveFailure: return "SolveFailure";
        case Errc::NegativeEntry: return "NegativeEntry";
        case Errc::ZeroBacktrack: return "ZeroBacktrack";
        case Errc::NoCycleInBall: return "NoCycleInBall";
        case Errc::NeverReturned: return "NeverReturned";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::HypothesisViolated: return "HypothesisViolated";
        case Errc::PreconditionFailed: return "PreconditionFailed";
        case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace walklab
