#pragma once

#include <stdexcept>

namespace tilerank {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidPerformance : Error { using Error::Error; };
struct InvalidImportance : Error { using Error::Error; };
struct UndefinedScore : Error { using Error::Error; };
struct InvalidRange : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct AllZeroWeights : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };

struct NoDefinedScores : Error { using Error::Error; };
struct EntityMismatch : Error { using Error::Error; };
struct TooFewEntities : Error { using Error::Error; };

struct ResolutionTooSmall : Error { using Error::Error; };
struct ResolutionMismatch : Error { using Error::Error; };
struct EmptyList : Error { using Error::Error; };

struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct UnknownDomain : Error { using Error::Error; };
struct UnknownCategory : Error { using Error::Error; };
struct EmptyCategory : Error { using Error::Error; };

struct SpecParseError : Error { using Error::Error; };
struct StrategyUnavailable : Error { using Error::Error; };
struct MissingGlobalRanking : StrategyUnavailable {
  using StrategyUnavailable::StrategyUnavailable;
};

struct EmptyReport : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace tilerank
