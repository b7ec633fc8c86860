#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bodyct {

/// Minimal RFC-4180 style CSV: comma separated, '"' quoting, LF line ends.
/// Fields containing a comma, quote, CR or LF are quoted on write.
namespace csv {

std::string escape(const std::string& field);

void write_row(std::ostream& os, const std::vector<std::string>& fields);

/// Parses one logical record (may span physical lines when quoted).
/// Returns false at end of stream. Throws bodyct::Error on malformed quoting.
bool read_row(std::istream& is, std::vector<std::string>& fields, std::size_t& line_no);

}  // namespace csv

}  // namespace bodyct
