#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hawkes::resolve {

struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One hop of a redirect chain.
struct FetchResult {
    int status{0};
    std::string location;  // from the Location header, empty if absent
};

/// Transport used to probe one URL. Implementations issue HEAD and fall
/// back to GET on 405; tests substitute a scripted double.
class RedirectFetcher {
public:
    virtual ~RedirectFetcher() = default;
    virtual FetchResult fetch(const std::string& url) = 0;
};

/// HTTP implementation over cpp-httplib. Follows nothing itself; one call
/// is one hop so the resolver controls depth and loop handling.
class HttpRedirectFetcher : public RedirectFetcher {
public:
    explicit HttpRedirectFetcher(int timeout_seconds = 10,
                                 std::string user_agent = "hawkes-influence/1.0");
    FetchResult fetch(const std::string& url) override;

private:
    int timeout_seconds_;
    std::string user_agent_;
};

/// Append-only cache of input_url TAB resolved_url lines, loaded fully at
/// startup. A cache without a backing path is memory-only.
class ResolveCache {
public:
    ResolveCache() = default;
    explicit ResolveCache(const std::string& path);

    std::optional<std::string> lookup(const std::string& url) const;
    void store(const std::string& url, const std::string& resolved);
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::string> entries_;
    std::string path_;
};

struct ResolveOptions {
    std::size_t max_depth{10};
    /// Hosts treated as shorteners; anything else is its own fixed point
    /// and is returned without a network call.
    std::unordered_set<std::string> shortener_hosts{
        "t.co",    "bit.ly", "goo.gl", "tinyurl.com",
        "ow.ly",   "is.gd",  "buff.ly"};
};

/// Expand a possibly shortened URL. Consults the cache first; with a null
/// fetcher (offline mode) uncached shortened URLs raise ResolutionError.
std::string resolve_url(const std::string& url, ResolveCache& cache,
                        RedirectFetcher* fetcher,
                        const ResolveOptions& opts = {});

}  // namespace hawkes::resolve
