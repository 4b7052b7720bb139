#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cmkb {

// Trim, collapse internal whitespace runs to one space, Unicode NFC.
// Case is preserved: drug names are case-significant.
std::string canonicalize_text(std::string_view text);

std::string to_lower_ascii(std::string_view text);

// Path segments use JSON-pointer escaping ("~" -> "~0", "/" -> "~1") so that
// natural keys such as "hu1F5 / MBP1F5" stay a single segment.
std::string escape_segment(std::string_view segment);
std::string unescape_segment(std::string_view segment);
std::vector<std::string> split_path(std::string_view path);
std::string join_path(const std::vector<std::string>& segments);
std::string append_segment(std::string_view path, std::string_view segment);

bool is_absolute_url(std::string_view text);
bool is_slug(std::string_view text);

}  // namespace cmkb
