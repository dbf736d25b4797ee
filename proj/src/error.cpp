#include "cgmos/error.hpp"

namespace cgmos {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Io: return "io";
        case ErrorKind::DegenerateDataset: return "degenerate-dataset";
        case ErrorKind::Parameter: return "parameter";
        case ErrorKind::InfeasibleStratification: return "infeasible-stratification";
        case ErrorKind::InfeasibleSynthesis: return "infeasible-synthesis";
        case ErrorKind::DivisionGuard: return "division-guard";
        case ErrorKind::InsufficientData: return "insufficient-data";
        case ErrorKind::DimensionMismatch: return "dimension-mismatch";
        case ErrorKind::Verification: return "verification";
    }
    return "unknown";
}

}  // namespace cgmos
