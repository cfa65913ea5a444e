#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>

#include "copro/indicators.hpp"
#include "copro/stats.hpp"

namespace copro {

/// One Spearman cell; `result` is empty when rho is undefined (see `error`).
struct CorrelationCell {
  std::optional<stats::TestResult> result;
  std::string error;
};

/// Spearman correlations among C, CI, CED, CEF over academics.
struct CorrelationMatrix {
  std::array<Form, 4> labels = kAllForms;
  std::array<std::array<CorrelationCell, 4>, 4> cells;

  const CorrelationCell& at(Form row, Form col) const {
    return cells[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
  }
};

/// The six off-diagonal pairs are computed once and mirrored; the diagonal is
/// rho = 1. Throws Error(EmptyInput) for fewer than 3 academics.
CorrelationMatrix correlation_matrix(std::span<const PropensitySet> per_academic);

}  // namespace copro
