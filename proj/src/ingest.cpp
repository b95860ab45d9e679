#include "hawkes/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace hawkes::ingest {

namespace {

constexpr const char* kHeader =
    "record_id,cascade_id,user_id,timestamp,url,label,retweet_of";

std::vector<std::string> split_csv_line(const std::string& line,
                                        std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) {
        throw ParseError("unterminated quoted field", line_no);
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool host_matches(const std::string& host, const std::string& domain) {
    if (host == domain) {
        return true;
    }
    return host.size() > domain.size() &&
           host.compare(host.size() - domain.size(), domain.size(), domain) ==
               0 &&
           host[host.size() - domain.size() - 1] == '.';
}

}  // namespace

const char* group_name(Group g) {
    return g == Group::psm ? "psm" : "normal";
}

std::optional<Group> parse_group(const std::string& name) {
    if (name == "psm") {
        return Group::psm;
    }
    if (name == "normal") {
        return Group::normal;
    }
    return std::nullopt;
}

const std::vector<std::string>& platform_names() {
    static const std::vector<std::string> names = {
        "Twitter",    "Facebook",   "Instagram",   "Google",
        "Youtube",    "Mainstream", "Alternatives"};
    return names;
}

std::optional<Platform> parse_platform(const std::string& name) {
    const auto& names = platform_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            return static_cast<Platform>(i);
        }
    }
    return std::nullopt;
}

std::vector<EventRecord> parse_event_log_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<EventRecord> records;
    std::unordered_set<std::string> seen_ids;

    if (!std::getline(in, line)) {
        throw ParseError("empty file, expected header", 1);
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kHeader) {
        throw ParseError(std::string("bad header, expected ") + kHeader, 1);
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line, line_no);
        if (fields.size() != 7) {
            throw ParseError("expected 7 fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        EventRecord rec;
        rec.record_id = fields[0];
        rec.cascade_id = fields[1];
        rec.user_id = fields[2];
        try {
            std::size_t pos = 0;
            rec.timestamp = std::stoll(fields[3], &pos);
            if (pos != fields[3].size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw ParseError("unparseable timestamp '" + fields[3] + "'",
                             line_no);
        }
        if (rec.timestamp < 0) {
            throw ParseError("negative timestamp", line_no);
        }
        rec.url = fields[4];
        const auto label = parse_group(fields[5]);
        if (!label) {
            throw ParseError("unknown label '" + fields[5] + "'", line_no);
        }
        rec.label = *label;
        rec.retweet_of = fields[6];
        if (rec.record_id.empty() || !seen_ids.insert(rec.record_id).second) {
            throw ParseError("missing or duplicate record_id '" +
                                 rec.record_id + "'",
                             line_no);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<EventRecord> parse_event_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open event log: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_event_log_text(buf.str());
}

PlatformTaxonomy PlatformTaxonomy::builtin() {
    PlatformTaxonomy t;
    t.domains = {
        {"twitter.com", Platform::Twitter},
        {"x.com", Platform::Twitter},
        {"facebook.com", Platform::Facebook},
        {"fb.com", Platform::Facebook},
        {"fb.me", Platform::Facebook},
        {"instagram.com", Platform::Instagram},
        {"instagr.am", Platform::Instagram},
        {"google.com", Platform::Google},
        {"plus.google.com", Platform::Google},
        {"youtube.com", Platform::Youtube},
        {"youtu.be", Platform::Youtube},
    };
    t.mainstream = {
        "nytimes.com", "reuters.com", "wsj.com", "nbcnews.com", "ft.com",
    };
    return t;
}

PlatformTaxonomy PlatformTaxonomy::load(const std::string& taxonomy_path,
                                        const std::string& mainstream_path) {
    PlatformTaxonomy t;
    std::ifstream tax(taxonomy_path);
    if (!tax) {
        throw std::runtime_error("cannot open taxonomy file: " + taxonomy_path);
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(tax, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError("taxonomy line missing TAB separator", line_no);
        }
        const std::string domain = to_lower(line.substr(0, tab));
        const auto platform = parse_platform(line.substr(tab + 1));
        if (!platform) {
            throw ParseError("unknown dimension '" + line.substr(tab + 1) +
                                 "'",
                             line_no);
        }
        t.domains[domain] = *platform;
    }
    std::ifstream ms(mainstream_path);
    if (!ms) {
        throw std::runtime_error("cannot open mainstream list: " +
                                 mainstream_path);
    }
    while (std::getline(ms, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        t.mainstream.insert(to_lower(line));
    }
    return t;
}

std::string url_host(const std::string& url) {
    std::string rest = url;
    const auto scheme = rest.find("://");
    if (scheme != std::string::npos) {
        rest = rest.substr(scheme + 3);
    }
    const auto end = rest.find_first_of("/?#");
    if (end != std::string::npos) {
        rest = rest.substr(0, end);
    }
    const auto at = rest.rfind('@');
    if (at != std::string::npos) {
        rest = rest.substr(at + 1);
    }
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
        rest = rest.substr(0, colon);
    }
    if (rest.empty()) {
        throw std::invalid_argument("URL has no host: " + url);
    }
    return to_lower(rest);
}

Platform categorize_url(const std::string& url,
                        const PlatformTaxonomy& taxonomy) {
    const std::string host = url_host(url);
    for (const auto& [domain, platform] : taxonomy.domains) {
        if (host_matches(host, domain)) {
            return platform;
        }
    }
    for (const auto& domain : taxonomy.mainstream) {
        if (host_matches(host, domain)) {
            return Platform::Mainstream;
        }
    }
    return Platform::Alternatives;
}

std::vector<PairedUrl> derive_pairs(const std::vector<EventRecord>& records,
                                    const PlatformTaxonomy& taxonomy,
                                    std::vector<std::string>* warnings) {
    std::unordered_map<std::string, const EventRecord*> by_id;
    for (const EventRecord& rec : records) {
        by_id.emplace(rec.record_id, &rec);
    }

    std::vector<PairedUrl> pairs;
    // (user, original record) -> index of the kept pair, for deduplication
    std::unordered_map<std::string, std::size_t> kept;
    for (const EventRecord& rec : records) {
        if (rec.retweet_of.empty()) {
            continue;
        }
        const auto it = by_id.find(rec.retweet_of);
        if (it == by_id.end()) {
            if (warnings != nullptr) {
                warnings->push_back("record " + rec.record_id +
                                    " references missing id " + rec.retweet_of);
            }
            continue;
        }
        const EventRecord& original = *it->second;
        PairedUrl pair;
        pair.cascade_id = rec.cascade_id;
        pair.source_url = original.url;
        pair.target_url = rec.url;
        pair.source_platform = categorize_url(original.url, taxonomy);
        pair.target_platform = categorize_url(rec.url, taxonomy);
        pair.timestamp = rec.timestamp;
        pair.group = rec.label;

        const std::string key = rec.user_id + '\x1f' + original.record_id;
        const auto [pos, inserted] = kept.emplace(key, pairs.size());
        if (inserted) {
            pairs.push_back(std::move(pair));
        } else if (pair.timestamp < pairs[pos->second].timestamp) {
            pairs[pos->second] = std::move(pair);
        }
    }
    return pairs;
}

std::vector<EventSequence> build_sequences(const std::vector<PairedUrl>& pairs,
                                           Group group) {
    // Preserve cascade order of first appearance.
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<const PairedUrl*>> by_cascade;
    for (const PairedUrl& pair : pairs) {
        if (pair.group != group) {
            continue;
        }
        auto& bucket = by_cascade[pair.cascade_id];
        if (bucket.empty()) {
            order.push_back(pair.cascade_id);
        }
        bucket.push_back(&pair);
    }

    std::vector<EventSequence> sequences;
    sequences.reserve(order.size());
    for (const std::string& cascade : order) {
        auto& bucket = by_cascade[cascade];
        std::stable_sort(bucket.begin(), bucket.end(),
                         [](const PairedUrl* a, const PairedUrl* b) {
                             return a->timestamp < b->timestamp;
                         });
        const std::int64_t start = bucket.front()->timestamp;
        const std::int64_t last = bucket.back()->timestamp;

        EventSequence seq;
        seq.horizon = std::max<double>(static_cast<double>(last - start), 1.0);
        double prev = -1.0;
        for (const PairedUrl* pair : bucket) {
            double t = static_cast<double>(pair->timestamp - start);
            if (t <= prev) {
                t = std::nextafter(prev, std::numeric_limits<double>::max());
            }
            seq.events.push_back(
                {t, static_cast<std::size_t>(pair->source_platform)});
            prev = t;
        }
        if (prev > seq.horizon) {
            seq.horizon = prev;
        }
        sequences.push_back(std::move(seq));
    }
    return sequences;
}

CascadeStats cascade_stats(const std::vector<EventRecord>& records) {
    CascadeStats stats;
    std::vector<std::string> order;
    struct Acc {
        std::size_t size{0};
        std::int64_t min_ts{std::numeric_limits<std::int64_t>::max()};
        std::int64_t max_ts{std::numeric_limits<std::int64_t>::min()};
        std::unordered_set<std::string> suspended;
    };
    std::unordered_map<std::string, Acc> acc;
    for (const EventRecord& rec : records) {
        auto [it, inserted] = acc.try_emplace(rec.cascade_id);
        if (inserted) {
            order.push_back(rec.cascade_id);
        }
        Acc& a = it->second;
        ++a.size;
        a.min_ts = std::min(a.min_ts, rec.timestamp);
        a.max_ts = std::max(a.max_ts, rec.timestamp);
        if (rec.label == Group::psm) {
            a.suspended.insert(rec.user_id);
        }
    }
    for (const std::string& cascade : order) {
        const Acc& a = acc[cascade];
        stats.cascades.push_back(
            {cascade, a.size, a.max_ts - a.min_ts, a.suspended.size()});
    }

    // Daily paired-URL counts; pairing needs no taxonomy, so reuse
    // derive_pairs with an empty domain map.
    PlatformTaxonomy empty;
    for (const PairedUrl& pair : derive_pairs(records, empty)) {
        auto& daily = pair.group == Group::psm ? stats.daily_pairs_psm
                                               : stats.daily_pairs_normal;
        ++daily[pair.timestamp / 86400];
    }
    return stats;
}

}  // namespace hawkes::ingest
