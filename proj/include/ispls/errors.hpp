#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ispls {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// shape / input validation
struct DimensionMismatch : Error { using Error::Error; };
struct NonFinite : Error { using Error::Error; };
struct InvalidHyper : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };

// numeric failures
struct DegenerateColumn : Error { using Error::Error; };
struct AllZero : Error { using Error::Error; };
struct SingularScores : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };

struct NoConvergence : Error {
  NoConvergence(const std::string& msg, double res, std::vector<double> iterate)
      : Error(msg), residual(res), last_iterate(std::move(iterate)) {}
  double residual = 0.0;
  std::vector<double> last_iterate;  // flattened column-major last basis/vector
};

// simulation / harness
struct ScheduleGap : Error { using Error::Error; };
struct EmptyTruth : Error { using Error::Error; };
struct MisalignedHorizons : Error { using Error::Error; };

// ingestion
struct ParseError : Error { using Error::Error; };
struct NonPositivePrice : Error { using Error::Error; };
struct RaggedRow : Error { using Error::Error; };

}  // namespace ispls
