#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hawkes/event_sequence.hpp"
#include "hawkes/theta.hpp"

namespace hawkes {

// Malformed input file; the message carries a line (and where possible
// column) diagnostic.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 17 significant digits, enough to round-trip any double.
std::string format_g17(double v);

// Minimal incremental JSON emitter so numeric output formatting stays under
// our control (doubles as %.17g, LF only).
class JsonWriter {
  public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);
    JsonWriter& value(double v);
    JsonWriter& value(std::uint64_t v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view v);
    const std::string& str() const { return buf_; }

  private:
    void separator();
    std::string buf_;
    std::vector<bool> needs_comma_{false};
};

void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

// Events CSV: header "time", one jump time per line. The horizon and theta
// live in a sidecar JSON descriptor next to the CSV.
void write_events_csv(const std::string& path, const EventSequence& events);
std::vector<double> read_events_csv(const std::string& path);

std::string sidecar_path(const std::string& events_csv_path);

struct EventsDescriptor {
    double horizon{0.0};
    Theta theta{};
    std::optional<std::uint64_t> seed;
};

void write_events_descriptor(const std::string& path, const EventsDescriptor& desc);
EventsDescriptor read_events_descriptor(const std::string& path);

}  // namespace hawkes
