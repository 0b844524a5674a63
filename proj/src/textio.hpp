#pragma once

#include <map>
#include <string>
#include <vector>

namespace idob {

// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);
double parse_double_strict(const std::string& s);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Records of the form "name count v1 v2 ...", one per line, after a
// single header line. Used for model parameter files.
struct Record {
    std::string name;
    std::vector<double> values;
};
std::string format_records(const std::string& header, const std::vector<Record>& recs);
// Returns records keyed by name; checks the header line.
std::map<std::string, std::vector<double>> parse_records(const std::string& text,
                                                         const std::string& header,
                                                         const std::string& what);

}  // namespace idob
