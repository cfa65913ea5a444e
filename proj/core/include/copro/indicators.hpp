#pragma once

// Propensity indicators (per academic, averaged over a field), incidence
// indicators (per field, over the de-duplicated publication union), their
// difference, and the classical co-authorship indices.

#include <cstddef>
#include <span>
#include <string>

#include "copro/classify.hpp"
#include "copro/corpus.hpp"

namespace copro {

struct PropensitySet {
  double c = 0.0;
  double ci = 0.0;
  double ced = 0.0;
  double cef = 0.0;

  double operator[](Form form) const;
};

/// Throws Error(NotProductive) when p == 0.
PropensitySet propensities(const CollaborationProfile& profile);

/// Percentages are in [0, 100]; `mean` is a ratio.
struct FieldSummary {
  std::string field_code;
  Form form = Form::C;
  std::size_t n_productive = 0;
  double mean = 0.0;
  double pct_zero = 0.0;
  double pct_full = 0.0;
};

struct IncidenceSummary {
  std::string field_code;
  Form form = Form::C;
  std::size_t n_pubs_union = 0;
  std::size_t n_pubs_with_form = 0;
  double incidence = 0.0;
};

struct ComparisonRow {
  std::string field_code;
  Form form = Form::C;
  double mean_propensity = 0.0;
  double incidence = 0.0;
  double delta = 0.0;  // percentage points
};

struct ClassicalIndices {
  std::size_t n_publications = 0;
  int max_authors = 0;
  double degree_of_collaboration = 0.0;
  double collaborative_index = 0.0;
  double collaborative_coefficient = 0.0;
  double revised_cc = 0.0;
};

/// Unweighted mean over the productive members. Throws Error(EmptyField).
FieldSummary field_summary(const ProfileTable& profiles, std::span<const AcademicIndex> members, Form form,
                           std::string field_code);
FieldSummary field_summary(const Corpus& corpus, const ProfileTable& profiles, const FieldScope& scope,
                           Form form, const SdsFilter* active_sds = nullptr);

/// Share of the members' publication union exhibiting the form for at least
/// one member author. Throws Error(EmptyField).
IncidenceSummary incidence(const Corpus& corpus, std::span<const AcademicIndex> members, Form form,
                           std::string field_code);
IncidenceSummary incidence(const Corpus& corpus, const FieldScope& scope, Form form,
                           const SdsFilter* active_sds = nullptr);

ComparisonRow compare(const Corpus& corpus, const ProfileTable& profiles,
                      std::span<const AcademicIndex> members, Form form, std::string field_code);
ComparisonRow compare(const Corpus& corpus, const ProfileTable& profiles, const FieldScope& scope, Form form,
                      const SdsFilter* active_sds = nullptr);

/// Degree of collaboration, collaborative index, collaborative coefficient
/// and its revised form, from the author-count histogram of the union.
ClassicalIndices classical_indices(const Corpus& corpus, std::span<const AcademicIndex> members);
ClassicalIndices classical_indices(const Corpus& corpus, const FieldScope& scope,
                                   const SdsFilter* active_sds = nullptr);

/// Same indices from raw author counts, one entry per publication.
ClassicalIndices classical_indices(std::span<const int> author_counts);

}  // namespace copro
