#include "sam/csv_io.hpp"

#include <cstdio>
#include <fstream>

#include "sam/error.hpp"

namespace sam {

std::string format_fixed2(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.2f", value);
    // Avoid "-0.00" for tiny negative values.
    if (std::string_view(buffer) == "-0.00") return "0.00";
    return buffer;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

LoadedInput load_timelines(const std::vector<std::filesystem::path>& paths, ParseMode mode,
                           std::ostream& diag) {
    std::vector<StayRecord> records;
    LoadedInput loaded;
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot open input '" + path.string() + "'");
        ParseResult parsed;
        try {
            parsed = parse_records(in, mode);
        } catch (const RecordError& e) {
            throw RecordError(e.line(), e.detail() + " (in " + path.string() + ")");
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ": " + e.what());
        }
        for (const auto& d : parsed.diagnostics) {
            diag << path.string() << ":" << d.line << ": " << d.message << "\n";
        }
        loaded.summary.rows_read += parsed.rows_read;
        loaded.summary.diagnostics += parsed.diagnostics.size();
        if (records.empty()) {
            records = std::move(parsed.records);
        } else {
            records.insert(records.end(), std::make_move_iterator(parsed.records.begin()),
                           std::make_move_iterator(parsed.records.end()));
        }
    }
    loaded.summary.records = records.size();
    loaded.timelines = build_timelines(records);
    loaded.summary.clients = loaded.timelines.size();
    loaded.summary.unique_client_days = total_stays(loaded.timelines);
    return loaded;
}

std::string render_records_csv(const std::vector<StayRecord>& records) {
    std::string out = "client_id,date\n";
    out.reserve(records.size() * 20 + out.size());
    for (const auto& r : records) {
        out += r.client_id;
        out += ',';
        out += r.date.to_string();
        out += '\n';
    }
    return out;
}

}  // namespace sam
