#pragma once

#include <string>

#include "tabletitle/extractor/extract.hpp"

namespace tabletitle::evalkit {

// Page title with the trailing site-name segment (after the last "|" or
// "-" token) removed when there are at least two segments.
std::string baseline_page_title(const extractor::TableContext& context);

// Nearest section heading with "[ edit ]" runs removed; falls back to the
// page-title baseline when there is no heading or nothing is left.
std::string baseline_section_heading(const extractor::TableContext& context);

}  // namespace tabletitle::evalkit
