#pragma once

#include <string>
#include <vector>

namespace tabletitle::testing {

std::string fixture_dir();

struct FixtureOutcome {
  std::string name;
  std::vector<std::string> mismatches;  // empty on a field-exact match
};

// Runs extraction over every NAME.html in fixtures/extract and compares all
// fields against NAME.json.
std::vector<FixtureOutcome> check_extraction_fixtures();

}  // namespace tabletitle::testing
