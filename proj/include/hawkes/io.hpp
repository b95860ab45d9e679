#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hawkes/ingest.hpp"
#include "hawkes/types.hpp"

namespace hawkes::io {

/// Fixed-locale number formatting for all CSV/JSON output: 9 significant
/// digits, shortest form.
std::string format_number(double value);

/// Params document {"U": int, "omega": real, "mu": [...], "A": [[...]]};
/// row u of A is destinations, columns are sources.
std::string params_to_json(const HawkesParams& params);
HawkesParams params_from_json_text(const std::string& text);
HawkesParams load_params(const std::string& path);
void save_params(const HawkesParams& params, const std::string& path);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
std::string file_digest(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

struct RunManifest {
    std::string command;
    std::string version;
    std::vector<std::pair<std::string, std::string>> config;  // key, value
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    std::vector<std::string> outputs;
    double duration_seconds{0.0};

    /// Serialized JSON; the duration field is excluded from determinism
    /// comparisons by consumers.
    std::string to_json() const;
};

/// Simulated sequences in the ingest event-log format, one synthetic
/// cascade per sequence. Dimensions map back to platform names via a
/// representative URL per dimension.
std::string sequences_to_event_log(const std::vector<EventSequence>& sequences,
                                   ingest::Group group);

}  // namespace hawkes::io
