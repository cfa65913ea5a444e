#include "copro/classify.hpp"

#include <algorithm>
#include <ostream>
#include <thread>

#include "copro/error.hpp"

namespace copro {

std::string_view to_string(Form form) {
  switch (form) {
    case Form::C: return "C";
    case Form::CI: return "CI";
    case Form::CED: return "CED";
    case Form::CEF: return "CEF";
  }
  return "?";
}

std::optional<Form> parse_form(std::string_view text) {
  for (Form f : kAllForms) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

bool PubForms::has(Form form) const {
  switch (form) {
    case Form::C: return collaborative;
    case Form::CI: return intramural;
    case Form::CED: return extramural_domestic;
    case Form::CEF: return extramural_international;
  }
  return false;
}

std::uint32_t CollaborationProfile::count(Form form) const {
  switch (form) {
    case Form::C: return cp;
    case Form::CI: return cip;
    case Form::CED: return cedp;
    case Form::CEF: return cefp;
  }
  return 0;
}

namespace {

// Caller guarantees a is an author of p.
PubForms classify_unchecked(const Corpus& corpus, PublicationIndex p, AcademicIndex a) {
  PubForms f;
  if (corpus.publication(p).n_authors < 2) return f;
  f.collaborative = true;
  const OrgIndex home = corpus.university_of(a);
  for (AcademicIndex b : corpus.authors_of(p)) {
    if (b != a && corpus.university_of(b) == home) {
      f.intramural = true;
      break;
    }
  }
  for (OrgIndex o : corpus.addresses_of(p)) {
    if (corpus.is_domestic(o) && o != home) {
      f.extramural_domestic = true;
      break;
    }
  }
  f.extramural_international = corpus.has_foreign_address(p);
  return f;
}

void accumulate(const Corpus& corpus, AcademicIndex a, CollaborationProfile& row) {
  row.academic_id = corpus.academic(a).academic_id;
  for (PublicationIndex p : corpus.publications_of(a)) {
    const PubForms f = classify_unchecked(corpus, p, a);
    ++row.p;
    row.cp += f.collaborative;
    row.cip += f.intramural;
    row.cedp += f.extramural_domestic;
    row.cefp += f.extramural_international;
  }
}

}  // namespace

PubForms classify_for(const Corpus& corpus, PublicationIndex p, AcademicIndex a) {
  auto authors = corpus.authors_of(p);
  if (!std::binary_search(authors.begin(), authors.end(), a)) {
    throw Error(ErrorKind::AcademicNotOnPublication,
                corpus.academic(a).academic_id + " on " + corpus.publication(p).pub_id);
  }
  return classify_unchecked(corpus, p, a);
}

PubForms classify_for(const Corpus& corpus, std::string_view pub_id, std::string_view academic_id) {
  auto p = corpus.find_publication(pub_id);
  if (!p) throw Error(ErrorKind::DanglingReference, std::string(pub_id));
  auto a = corpus.find_academic(academic_id);
  if (!a) throw Error(ErrorKind::AcademicNotOnPublication, std::string(academic_id) + " on " + std::string(pub_id));
  return classify_for(corpus, *p, *a);
}

const CollaborationProfile& ProfileTable::at(const Corpus& corpus, std::string_view academic_id) const {
  auto a = corpus.find_academic(academic_id);
  if (!a || *a >= rows_.size()) throw Error(ErrorKind::DanglingReference, std::string(academic_id));
  return rows_[*a];
}

ProfileTable build_profiles(const Corpus& corpus, unsigned threads) {
  const std::size_t n = corpus.academics().size();
  std::vector<CollaborationProfile> rows(n);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n / 1024 + 1)));
  if (threads == 1) {
    for (AcademicIndex a = 0; a < n; ++a) accumulate(corpus, a, rows[a]);
    return ProfileTable(std::move(rows));
  }
  std::vector<std::jthread> workers;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    workers.emplace_back([&corpus, &rows, lo, hi] {
      for (std::size_t a = lo; a < hi; ++a) accumulate(corpus, static_cast<AcademicIndex>(a), rows[a]);
    });
  }
  workers.clear();
  return ProfileTable(std::move(rows));
}

void write_flag_dump(std::ostream& out, const Corpus& corpus) {
  out << "pub_id,academic_id,C,CI,CED,CEF\n";
  for (PublicationIndex p = 0; p < corpus.publications().size(); ++p) {
    for (AcademicIndex a : corpus.authors_of(p)) {
      const PubForms f = classify_unchecked(corpus, p, a);
      out << corpus.publication(p).pub_id << ',' << corpus.academic(a).academic_id << ','
          << f.collaborative << ',' << f.intramural << ',' << f.extramural_domestic << ','
          << f.extramural_international << '\n';
    }
  }
}

}  // namespace copro
