#include "tabletitle/evalkit/baselines.hpp"

namespace tabletitle::evalkit {

using corpus::Tokens;

namespace {

bool is_delimiter(const std::string& token) { return token == "|" || token == "-"; }

}  // namespace

std::string baseline_page_title(const extractor::TableContext& context) {
  const Tokens& title = context.page_title;
  std::size_t cut = title.size();
  for (std::size_t i = title.size(); i-- > 0;) {
    if (is_delimiter(title[i])) {
      cut = i;
      break;
    }
  }
  // Only strip when something precedes the delimiter.
  if (cut == 0 || cut == title.size()) return corpus::join(title);
  return corpus::join(std::span(title).first(cut));
}

std::string baseline_section_heading(const extractor::TableContext& context) {
  if (context.section_headings.empty()) return baseline_page_title(context);
  const Tokens& heading = context.section_headings.back().tokens;
  Tokens kept;
  for (std::size_t i = 0; i < heading.size(); ++i) {
    if (i + 2 < heading.size() && heading[i] == "[" && heading[i + 1] == "edit" && heading[i + 2] == "]") {
      i += 2;
      continue;
    }
    kept.push_back(heading[i]);
  }
  if (kept.empty()) return baseline_page_title(context);
  return corpus::join(kept);
}

}  // namespace tabletitle::evalkit
