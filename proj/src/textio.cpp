#include "textio.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace idob {

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

double parse_double_strict(const std::string& s) {
    double x = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size())
        throw Error(ErrorCode::Io, "not a number: '" + s + "'");
    return x;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

std::string format_records(const std::string& header, const std::vector<Record>& recs) {
    std::string s = header + "\n";
    for (const auto& r : recs) {
        s += r.name + " " + std::to_string(r.values.size());
        for (double v : r.values) s += " " + format_double(v);
        s += "\n";
    }
    return s;
}

std::map<std::string, std::vector<double>> parse_records(const std::string& text,
                                                         const std::string& header,
                                                         const std::string& what) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw Error(ErrorCode::Io, what + ": missing header '" + header + "'");
    std::map<std::string, std::vector<double>> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string name, tok;
        std::size_t n = 0;
        if (!(ls >> name >> n)) throw Error(ErrorCode::Io, what + ": malformed line");
        std::vector<double> v;
        v.reserve(n);
        while (ls >> tok) v.push_back(parse_double_strict(tok));
        if (v.size() != n)
            throw Error(ErrorCode::Io, what + ": record '" + name + "' has wrong length");
        out[name] = std::move(v);
    }
    return out;
}

}  // namespace idob
