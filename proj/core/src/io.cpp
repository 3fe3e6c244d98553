#include "liejet/io.hpp"

#include <fstream>
#include <sstream>

namespace liejet {

std::vector<std::string> scan_column_names(int ncoords) {
    if (ncoords == 3) return {"x", "y", "z"};
    if (ncoords == 6) return {"x", "y", "z", "a", "b", "c"};
    std::vector<std::string> out;
    out.reserve(ncoords);
    for (int i = 1; i <= ncoords; ++i) out.push_back("c" + std::to_string(i));
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json load_json_file(const std::string& path) {
    std::string text = read_text_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open for writing: " + path);
    out << contents;
    if (!out) throw Error("write failed: " + path);
}

} // namespace liejet
