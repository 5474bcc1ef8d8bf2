#include "config_file.hpp"

#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

#include "hawkes/io.hpp"

namespace hawkes::cli {

namespace {

std::string trim(const std::string& s) {
    const std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// Strip a trailing comment, honoring double-quoted strings.
std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_string = !in_string;
        else if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& msg) {
    throw io_error(path + ": line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& path, std::size_t line, const std::string& v) {
    const char* begin = v.c_str();
    char* end = nullptr;
    const double x = std::strtod(begin, &end);
    if (end == begin || *end != '\0') fail(path, line, "expected a number, got \"" + v + "\"");
    return x;
}

std::uint64_t parse_count(const std::string& path, std::size_t line, const std::string& v) {
    const double x = parse_number(path, line, v);
    if (x < 0.0 || x != static_cast<double>(static_cast<std::uint64_t>(x)))
        fail(path, line, "expected a nonnegative integer, got \"" + v + "\"");
    return static_cast<std::uint64_t>(x);
}

std::string parse_string(const std::string& path, std::size_t line, const std::string& v) {
    if (v.size() < 2 || v.front() != '"' || v.back() != '"')
        fail(path, line, "expected a double-quoted string, got \"" + v + "\"");
    return v.substr(1, v.size() - 2);
}

FileConfig parse_toml(const std::string& path, const std::string& text) {
    FileConfig cfg;
    std::size_t pos = 0, line_no = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(path, line_no, "unterminated table header");
            continue;  // single flat table; headers are decorative
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(path, line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) fail(path, line_no, "missing value for key \"" + key + "\"");

        if (key == "mu") cfg.mu = parse_number(path, line_no, val);
        else if (key == "alpha") cfg.alpha = parse_number(path, line_no, val);
        else if (key == "beta") cfg.beta = parse_number(path, line_no, val);
        else if (key == "t") cfg.t = parse_number(path, line_no, val);
        else if (key == "seed") cfg.seed = parse_count(path, line_no, val);
        else if (key == "mc") cfg.mc = parse_count(path, line_no, val);
        else if (key == "reps") cfg.reps = parse_count(path, line_no, val);
        else if (key == "workers") cfg.workers = parse_count(path, line_no, val);
        else if (key == "grid") cfg.grid = parse_count(path, line_no, val);
        else if (key == "out") cfg.out = parse_string(path, line_no, val);
        else fail(path, line_no, "unknown key \"" + key + "\"");
    }
    return cfg;
}

FileConfig parse_json(const std::string& path, const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw io_error(path + ": " + e.what());
    }
    if (!j.is_object()) throw io_error(path + ": expected a JSON object");
    FileConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "mu") cfg.mu = value.get<double>();
            else if (key == "alpha") cfg.alpha = value.get<double>();
            else if (key == "beta") cfg.beta = value.get<double>();
            else if (key == "t" || key == "t_horizon") cfg.t = value.get<double>();
            else if (key == "seed" || key == "master_seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "mc" || key == "mc_coeff") cfg.mc = value.get<std::uint64_t>();
            else if (key == "reps" || key == "n_rep_mle") cfg.reps = value.get<std::uint64_t>();
            else if (key == "workers") cfg.workers = value.get<std::uint64_t>();
            else if (key == "grid" || key == "grid_points") cfg.grid = value.get<std::uint64_t>();
            else if (key == "out" || key == "output_dir") cfg.out = value.get<std::string>();
            else if (key == "theta0" && value.is_object()) {
                cfg.mu = value.at("mu").get<double>();
                cfg.alpha = value.at("alpha").get<double>();
                cfg.beta = value.at("beta").get<double>();
            } else throw io_error(path + ": unknown key \"" + key + "\"");
        }
    } catch (const nlohmann::json::exception& e) {
        throw io_error(path + ": " + e.what());
    }
    return cfg;
}

}  // namespace

FileConfig load_config_file(const std::string& path) {
    const std::string text = read_text_file(path);
    const bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    return is_json ? parse_json(path, text) : parse_toml(path, text);
}

}  // namespace hawkes::cli
