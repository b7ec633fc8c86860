#include "core/csv.hpp"

#include <istream>
#include <ostream>

#include "core/error.hpp"

namespace bodyct::csv {

std::string escape(const std::string& field) {
    bool needs_quote = false;
    for (char c : field) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs_quote = true;
            break;
        }
    }
    if (!needs_quote) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

void write_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << escape(fields[i]);
    }
    os << '\n';
}

bool read_row(std::istream& is, std::vector<std::string>& fields, std::size_t& line_no) {
    fields.clear();
    int ch = is.get();
    if (ch == std::istream::traits_type::eof()) return false;
    ++line_no;
    std::string field;
    bool in_quotes = false;
    bool any = false;
    while (true) {
        if (ch == std::istream::traits_type::eof()) {
            if (in_quotes) fail(ErrorCode::parse, "unterminated quoted CSV field at line " + std::to_string(line_no));
            fields.push_back(std::move(field));
            return true;
        }
        char c = static_cast<char>(ch);
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (is.peek() == '"') {
                    is.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_no;
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            return true;
        } else if (c == '\r') {
            if (is.peek() == '\n') is.get();
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(c);
        }
        ch = is.get();
    }
    (void)any;
}

}  // namespace bodyct::csv
