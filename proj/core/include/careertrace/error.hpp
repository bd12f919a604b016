#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace careertrace {

enum class Errc {
  MalformedLine,
  DuplicatePubId,
  EmptyAuthorList,
  YearOutOfWindow,
  DuplicateAuthor,
  InvalidScheme,
  HomeMismatch,
  NoStateForYear,
  BeforeCareer,
  AfterHorizon,
  UndefinedRatio,
  MissingCohort,
  EmptyReference,
  InvalidConfig,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Every library failure is reported through this type; `code()` carries the
/// machine-checkable reason, `what()` a human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace careertrace
