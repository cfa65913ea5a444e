#pragma once

#include "copro/corpus.hpp"

namespace copro {

/// Two academics of one UDA: alpha with 23 publications (4 with a foreign
/// organization), beta with 13 (3 foreign), 8 of them shared (3 foreign).
/// The union holds 28 publications, 4 of them international.
CorpusInputs two_researcher_example();

inline constexpr const char* kExampleAlpha = "alpha";
inline constexpr const char* kExampleBeta = "beta";
inline constexpr const char* kExampleUda = "PHY";

}  // namespace copro
