#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "copro/corpus.hpp"

namespace copro {

/// The four collaboration forms: general, intramural, extramural domestic,
/// extramural international.
enum class Form { C, CI, CED, CEF };

inline constexpr std::array<Form, 4> kAllForms = {Form::C, Form::CI, Form::CED, Form::CEF};

std::string_view to_string(Form form);
std::optional<Form> parse_form(std::string_view text);

/// Collaboration forms of one publication as seen by one of its academics.
/// Forms are not exclusive; a non-collaborative publication sets nothing.
struct PubForms {
  bool collaborative = false;
  bool intramural = false;
  bool extramural_domestic = false;
  bool extramural_international = false;

  bool has(Form form) const;
  bool operator==(const PubForms&) const = default;
};

/// Throws Error(AcademicNotOnPublication) when `a` is not an author of `p`.
PubForms classify_for(const Corpus& corpus, PublicationIndex p, AcademicIndex a);
PubForms classify_for(const Corpus& corpus, std::string_view pub_id, std::string_view academic_id);

struct CollaborationProfile {
  std::string academic_id;
  std::uint32_t p = 0;
  std::uint32_t cp = 0;
  std::uint32_t cip = 0;
  std::uint32_t cedp = 0;
  std::uint32_t cefp = 0;

  std::uint32_t count(Form form) const;
  bool operator==(const CollaborationProfile&) const = default;
};

/// Per-academic profiles, addressable by index or by id.
class ProfileTable {
 public:
  ProfileTable() = default;
  explicit ProfileTable(std::vector<CollaborationProfile> rows) : rows_(std::move(rows)) {}

  const CollaborationProfile& operator[](AcademicIndex a) const { return rows_[a]; }
  /// Throws Error(DanglingReference) for an unknown id.
  const CollaborationProfile& at(const Corpus& corpus, std::string_view academic_id) const;

  std::size_t size() const { return rows_.size(); }
  auto begin() const { return rows_.begin(); }
  auto end() const { return rows_.end(); }

  bool operator==(const ProfileTable&) const = default;

 private:
  std::vector<CollaborationProfile> rows_;
};

/// Aggregates the classification of every (publication, academic) pair.
/// `threads` > 1 splits the academics across worker threads.
ProfileTable build_profiles(const Corpus& corpus, unsigned threads = 1);

/// Diagnostic dump: header, then one "pub_id,academic_id,C,CI,CED,CEF" line per pair.
void write_flag_dump(std::ostream& out, const Corpus& corpus);

}  // namespace copro
