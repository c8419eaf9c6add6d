#include "qhm/error.hpp"

namespace qhm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorKind::ProjectionNotConverged: return "ProjectionNotConverged";
    case ErrorKind::RegionMissesBoundary: return "RegionMissesBoundary";
    case ErrorKind::UnboundedModulus: return "UnboundedModulus";
    case ErrorKind::NonpositiveDistance: return "NonpositiveDistance";
    case ErrorKind::ConstantOutOfRange: return "ConstantOutOfRange";
    case ErrorKind::CurveTouchesBoundary: return "CurveTouchesBoundary";
    case ErrorKind::PointTooCloseToBoundary: return "PointTooCloseToBoundary";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::ExceedsReach: return "ExceedsReach";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::FeetNotUnique: return "FeetNotUnique";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace qhm
