#include "hawkes/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hawkes::io {

namespace {

const std::vector<std::string>& dimension_urls() {
    static const std::vector<std::string> urls = {
        "https://twitter.com/post",
        "https://www.facebook.com/post",
        "https://www.instagram.com/post",
        "https://www.google.com/post",
        "https://www.youtube.com/post",
        "https://www.nytimes.com/post",
        "https://www.rt.com/post",
    };
    return urls;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

std::string params_to_json(const HawkesParams& params) {
    std::ostringstream out;
    out << "{\n  \"U\": " << params.dims() << ",\n  \"omega\": "
        << format_number(params.kernel.omega) << ",\n  \"mu\": [";
    for (std::size_t u = 0; u < params.dims(); ++u) {
        out << (u == 0 ? "" : ", ") << format_number(params.mu[u]);
    }
    out << "],\n  \"A\": [\n";
    for (std::size_t u = 0; u < params.dims(); ++u) {
        out << "    [";
        for (std::size_t v = 0; v < params.dims(); ++v) {
            out << (v == 0 ? "" : ", ") << format_number(params.A[u][v]);
        }
        out << (u + 1 < params.dims() ? "],\n" : "]\n");
    }
    out << "  ]\n}\n";
    return out.str();
}

HawkesParams params_from_json_text(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    const auto dims = doc.at("U").get<std::size_t>();
    const auto omega = doc.at("omega").get<double>();
    auto mu = doc.at("mu").get<std::vector<double>>();
    auto A = doc.at("A").get<std::vector<std::vector<double>>>();
    if (mu.size() != dims || A.size() != dims) {
        throw std::runtime_error("params JSON: U inconsistent with mu/A shape");
    }
    return HawkesParams(std::move(mu), std::move(A), ExpKernel(omega));
}

HawkesParams load_params(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open params file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return params_from_json_text(buf.str());
}

void save_params(const HawkesParams& params, const std::string& path) {
    write_text_file(path, params_to_json(params));
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file for digest: " + path);
    }
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
        if (!in) {
            break;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(hash));
    return hex;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("short write: " + path);
    }
}

std::string RunManifest::to_json() const {
    std::ostringstream out;
    out << "{\n  \"command\": \"" << json_escape(command) << "\",\n"
        << "  \"version\": \"" << json_escape(version) << "\",\n"
        << "  \"config\": {";
    for (std::size_t i = 0; i < config.size(); ++i) {
        out << (i == 0 ? "\n" : ",\n") << "    \"" << json_escape(config[i].first)
            << "\": \"" << json_escape(config[i].second) << "\"";
    }
    out << "\n  },\n  \"inputs\": [";
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        out << (i == 0 ? "\n" : ",\n") << "    {\"path\": \""
            << json_escape(inputs[i].first) << "\", \"digest\": \""
            << json_escape(inputs[i].second) << "\"}";
    }
    out << "\n  ],\n  \"outputs\": [";
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        out << (i == 0 ? "\n" : ",\n") << "    \"" << json_escape(outputs[i])
            << "\"";
    }
    out << "\n  ],\n  \"duration_seconds\": " << format_number(duration_seconds)
        << "\n}\n";
    return out.str();
}

std::string sequences_to_event_log(const std::vector<EventSequence>& sequences,
                                   ingest::Group group) {
    std::ostringstream out;
    out << "record_id,cascade_id,user_id,timestamp,url,label,retweet_of\n";
    const char* label = ingest::group_name(group);
    for (std::size_t k = 0; k < sequences.size(); ++k) {
        const EventSequence& seq = sequences[k];
        const std::string cascade = "sim-" + std::to_string(k);
        // One synthetic root tweet per dimension carries the source URL the
        // retweets pair against.
        std::vector<bool> root_written(dimension_urls().size(), false);
        std::ostringstream roots;
        std::ostringstream retweets;
        for (std::size_t i = 0; i < seq.events.size(); ++i) {
            const Event& e = seq.events[i];
            if (e.dim >= dimension_urls().size()) {
                throw std::invalid_argument(
                    "sequences_to_event_log: dimension beyond the 7 platforms");
            }
            const std::string root_id = cascade + "-root-" + std::to_string(e.dim);
            if (!root_written[e.dim]) {
                root_written[e.dim] = true;
                roots << root_id << ',' << cascade << ",seed-user-" << e.dim
                      << ",0," << dimension_urls()[e.dim] << ',' << label
                      << ",\n";
            }
            retweets << cascade << "-r" << i << ',' << cascade << ",user-" << k
                     << '-' << i << ','
                     << static_cast<std::int64_t>(std::llround(e.time)) << ','
                     << dimension_urls()[0] << ',' << label << ',' << root_id
                     << '\n';
        }
        out << roots.str() << retweets.str();
    }
    return out.str();
}

}  // namespace hawkes::io
