#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hawkes/types.hpp"

namespace hawkes::ingest {

enum class Group { psm, normal };

const char* group_name(Group g);
std::optional<Group> parse_group(const std::string& name);

/// One row of the retweet event log.
struct EventRecord {
    std::string record_id;
    std::string cascade_id;
    std::string user_id;
    std::int64_t timestamp{0};  // epoch seconds
    std::string url;
    Group label{Group::normal};
    std::string retweet_of;  // empty for originals
};

struct ParseError : std::runtime_error {
    std::size_t line;
    ParseError(const std::string& what, std::size_t line_)
        : std::runtime_error(what), line(line_) {}
};

/// CSV with header record_id,cascade_id,user_id,timestamp,url,label,retweet_of.
/// Header-only files parse to an empty list; malformed rows throw ParseError
/// naming the offending line.
std::vector<EventRecord> parse_event_log(const std::string& path);
std::vector<EventRecord> parse_event_log_text(const std::string& text);

/// The seven process dimensions, in fixed report order.
enum class Platform : std::size_t {
    Twitter = 0,
    Facebook,
    Instagram,
    Google,
    Youtube,
    Mainstream,
    Alternatives,
};

constexpr std::size_t kNumPlatforms = 7;

const std::vector<std::string>& platform_names();
std::optional<Platform> parse_platform(const std::string& name);

/// Maps registrable URL hosts to the seven dimensions. Social platforms and
/// their aliases match first, then the mainstream allow-list; everything
/// else falls through to Alternatives.
struct PlatformTaxonomy {
    std::unordered_map<std::string, Platform> domains;
    std::unordered_set<std::string> mainstream;

    static PlatformTaxonomy builtin();
    /// taxonomy file: one domain<TAB>dimension per line; mainstream file:
    /// one domain per line. '#' starts a comment in both.
    static PlatformTaxonomy load(const std::string& taxonomy_path,
                                 const std::string& mainstream_path);
};

/// Lowercased host of a URL, or an error for URLs with no host.
std::string url_host(const std::string& url);

Platform categorize_url(const std::string& url,
                        const PlatformTaxonomy& taxonomy);

struct PairedUrl {
    std::string cascade_id;
    std::string source_url;
    std::string target_url;
    Platform source_platform{Platform::Alternatives};
    Platform target_platform{Platform::Alternatives};
    std::int64_t timestamp{0};
    Group group{Group::normal};
};

/// Emits one pair per retweet record, pointing original URL -> retweet URL.
/// Repeat retweets of the same original by the same user collapse to the
/// earliest occurrence; dangling retweet_of references are skipped and
/// reported through warnings.
std::vector<PairedUrl> derive_pairs(const std::vector<EventRecord>& records,
                                    const PlatformTaxonomy& taxonomy,
                                    std::vector<std::string>* warnings = nullptr);

/// One EventSequence per cascade for the requested group. Event dimension is
/// the pair's source platform; times are seconds from the cascade's first
/// pair; duplicate timestamps are nudged apart by one ulp.
std::vector<EventSequence> build_sequences(const std::vector<PairedUrl>& pairs,
                                           Group group);

struct CascadeSummary {
    std::string cascade_id;
    std::size_t size{0};
    std::int64_t duration_seconds{0};
    std::size_t suspended_users{0};  // distinct psm-labeled users
};

struct CascadeStats {
    std::vector<CascadeSummary> cascades;
    /// epoch day -> pair count, per group
    std::map<std::int64_t, std::size_t> daily_pairs_psm;
    std::map<std::int64_t, std::size_t> daily_pairs_normal;
};

CascadeStats cascade_stats(const std::vector<EventRecord>& records);

}  // namespace hawkes::ingest
