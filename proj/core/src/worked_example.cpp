#include "copro/worked_example.hpp"

#include <cstdio>
#include <string>

namespace copro {

namespace {

std::string pub_id(const char* prefix, int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%s%02d", prefix, n);
  return buf;
}

}  // namespace

CorpusInputs two_researcher_example() {
  CorpusInputs in;
  in.domestic_country = "IT";
  in.taxonomy.add("FIS/01", kExampleUda);
  in.organizations = {
      {"UNI-A", "IT", true},
      {"UNI-B", "IT", true},
      {"INST-US", "US", false},
  };
  in.academics = {
      {kExampleAlpha, "UNI-A", "FIS/01", {}},
      {kExampleBeta, "UNI-B", "FIS/01", {}},
  };
  // 15 alpha-only (1 foreign), 8 shared (3 foreign), 5 beta-only (none foreign).
  for (int i = 1; i <= 15; ++i) {
    Publication p{pub_id("A", i), 2008, 3, {kExampleAlpha}, {"UNI-A"}};
    if (i == 1) p.org_addresses.push_back("INST-US");
    in.publications.push_back(std::move(p));
  }
  for (int i = 1; i <= 8; ++i) {
    Publication p{pub_id("S", i), 2008, 4, {kExampleAlpha, kExampleBeta}, {"UNI-A", "UNI-B"}};
    if (i <= 3) p.org_addresses.push_back("INST-US");
    in.publications.push_back(std::move(p));
  }
  for (int i = 1; i <= 5; ++i) {
    in.publications.push_back({pub_id("B", i), 2009, 2, {kExampleBeta}, {"UNI-B"}});
  }
  return in;
}

}  // namespace copro
