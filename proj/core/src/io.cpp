#include "hawkes/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hawkes {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void JsonWriter::separator() {
    if (needs_comma_.back()) buf_ += ',';
    needs_comma_.back() = true;
}

JsonWriter& JsonWriter::begin_object() {
    separator();
    buf_ += '{';
    needs_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    buf_ += '}';
    needs_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separator();
    buf_ += '[';
    needs_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    buf_ += ']';
    needs_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
    separator();
    buf_ += '"';
    buf_ += k;
    buf_ += "\":";
    needs_comma_.back() = false;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    separator();
    buf_ += format_g17(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
    separator();
    buf_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
    separator();
    buf_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    separator();
    buf_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
    separator();
    buf_ += '"';
    for (char c : v) {
        switch (c) {
            case '"': buf_ += "\\\""; break;
            case '\\': buf_ += "\\\\"; break;
            case '\n': buf_ += "\\n"; break;
            case '\t': buf_ += "\\t"; break;
            case '\r': buf_ += "\\r"; break;
            default: buf_ += c;
        }
    }
    buf_ += '"';
    return *this;
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw io_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_events_csv(const std::string& path, const EventSequence& events) {
    std::string out = "time\n";
    for (double t : events.times) {
        out += format_g17(t);
        out += '\n';
    }
    write_text_file(path, out);
}

std::vector<double> read_events_csv(const std::string& path) {
    const std::string text = read_text_file(path);
    std::vector<double> times;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_no;
        if (line_no == 1) {
            if (line != "time")
                throw io_error(path + ": line 1: expected header \"time\", got \"" + line + "\"");
        } else if (!line.empty()) {
            const char* begin = line.c_str();
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin || *end != '\0')
                throw io_error(path + ": line " + std::to_string(line_no) + ": column " +
                               std::to_string(end - begin + 1) + ": expected a number, got \"" +
                               line + "\"");
            times.push_back(v);
        }
        pos = eol + 1;
    }
    if (line_no == 0) throw io_error(path + ": line 1: empty file, expected header \"time\"");
    return times;
}

std::string sidecar_path(const std::string& events_csv_path) { return events_csv_path + ".json"; }

void write_events_descriptor(const std::string& path, const EventsDescriptor& desc) {
    JsonWriter w;
    w.begin_object();
    w.key("horizon").value(desc.horizon);
    w.key("theta").begin_object();
    w.key("mu").value(desc.theta.mu);
    w.key("alpha").value(desc.theta.alpha);
    w.key("beta").value(desc.theta.beta);
    w.end_object();
    if (desc.seed) w.key("seed").value(*desc.seed);
    w.end_object();
    write_text_file(path, w.str() + "\n");
}

EventsDescriptor read_events_descriptor(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw io_error(path + ": " + e.what());
    }
    try {
        EventsDescriptor d;
        d.horizon = j.at("horizon").get<double>();
        d.theta.mu = j.at("theta").at("mu").get<double>();
        d.theta.alpha = j.at("theta").at("alpha").get<double>();
        d.theta.beta = j.at("theta").at("beta").get<double>();
        if (j.contains("seed")) d.seed = j.at("seed").get<std::uint64_t>();
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw io_error(path + ": " + e.what());
    }
}

}  // namespace hawkes
