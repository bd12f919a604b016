#include "careertrace/error.hpp"

namespace careertrace {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::DuplicatePubId: return "DuplicatePubId";
    case Errc::EmptyAuthorList: return "EmptyAuthorList";
    case Errc::YearOutOfWindow: return "YearOutOfWindow";
    case Errc::DuplicateAuthor: return "DuplicateAuthor";
    case Errc::InvalidScheme: return "InvalidScheme";
    case Errc::HomeMismatch: return "HomeMismatch";
    case Errc::NoStateForYear: return "NoStateForYear";
    case Errc::BeforeCareer: return "BeforeCareer";
    case Errc::AfterHorizon: return "AfterHorizon";
    case Errc::UndefinedRatio: return "UndefinedRatio";
    case Errc::MissingCohort: return "MissingCohort";
    case Errc::EmptyReference: return "EmptyReference";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace careertrace
