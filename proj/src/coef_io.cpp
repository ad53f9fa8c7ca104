#include "heatmann/coef_io.hpp"

#include "json.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace heatmann::io {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string to_json_line(const CoefVec& v) {
    std::string out = "[";
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (j > 0) out += ',';
        out += format_double(v[j]);
    }
    out += "]";
    return out;
}

std::string to_csv(const CoefVec& v) {
    std::string out = "mode,coefficient\n";
    for (std::size_t j = 0; j < v.size(); ++j) {
        out += std::to_string(j + 1);
        out += ',';
        out += format_double(v[j]);
        out += '\n';
    }
    return out;
}

std::vector<double> parse_json_coefficients(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed coefficient JSON: ") + e.what());
    }
    if (!doc.is_array()) {
        throw ConfigError("coefficient JSON must be an array of numbers");
    }
    std::vector<double> out;
    out.reserve(doc.size());
    for (const auto& item : doc) {
        if (!item.is_number()) {
            throw ConfigError("coefficient JSON must be an array of numbers");
        }
        out.push_back(item.get<double>());
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view s, std::size_t line) {
    s = trim(s);
    T value{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ConfigError("coefficient CSV: bad number on line " + std::to_string(line));
    }
    return value;
}

}  // namespace

std::vector<double> parse_csv_coefficients(std::string_view text) {
    std::vector<double> out;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "mode,coefficient") {
                throw ConfigError("coefficient CSV must start with the header `mode,coefficient`");
            }
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) {
            throw ConfigError("coefficient CSV: missing comma on line " + std::to_string(line_no));
        }
        const auto mode = parse_number<std::size_t>(line.substr(0, comma), line_no);
        if (mode != out.size() + 1) {
            throw ConfigError("coefficient CSV: modes must be listed as 1, 2, ... (line " +
                              std::to_string(line_no) + ")");
        }
        out.push_back(parse_number<double>(line.substr(comma + 1), line_no));
    }
    if (!header_seen) {
        throw ConfigError("coefficient CSV is empty");
    }
    return out;
}

CoefVec from_json(const GridPtr& grid, std::string_view text) {
    return CoefVec(grid, parse_json_coefficients(text));
}

CoefVec from_csv(const GridPtr& grid, std::string_view text) {
    return CoefVec(grid, parse_csv_coefficients(text));
}

std::vector<double> read_coefficients(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    if (path.extension() == ".csv") return parse_csv_coefficients(text);
    if (path.extension() == ".json") return parse_json_coefficients(text);
    throw ConfigError("unknown coefficient file extension: " + path.string() + " (want .json or .csv)");
}

void write_coefvec(const std::filesystem::path& stem, const CoefVec& v) {
    auto json_path = stem;
    json_path += ".json";
    auto csv_path = stem;
    csv_path += ".csv";
    write_text(json_path, to_json_line(v) + "\n");
    write_text(csv_path, to_csv(v));
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out << text;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace heatmann::io
