#include "copro/correlation.hpp"

#include <vector>

#include "copro/error.hpp"

namespace copro {

CorrelationMatrix correlation_matrix(std::span<const PropensitySet> per_academic) {
  if (per_academic.size() < 3) throw Error(ErrorKind::EmptyInput, "correlation_matrix needs n >= 3");
  std::array<std::vector<double>, 4> columns;
  for (Form f : kAllForms) {
    auto& col = columns[static_cast<std::size_t>(f)];
    col.reserve(per_academic.size());
    for (const auto& s : per_academic) col.push_back(s[f]);
  }
  CorrelationMatrix m;
  for (std::size_t i = 0; i < 4; ++i) {
    m.cells[i][i].result = stats::TestResult{1.0, 0.0, {per_academic.size()}, "diagonal", "***"};
    for (std::size_t j = i + 1; j < 4; ++j) {
      CorrelationCell cell;
      try {
        cell.result = stats::spearman_rho(columns[i], columns[j]);
      } catch (const Error& e) {
        cell.error = e.what();
      }
      m.cells[i][j] = cell;
      m.cells[j][i] = cell;
    }
  }
  return m;
}

}  // namespace copro
