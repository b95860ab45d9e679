#include "hawkes/resolve.hpp"

#include <fstream>

#include "hawkes/ingest.hpp"

#define CPPHTTPLIB_NO_EXCEPTIONS  // report transport failures via status 0
#include <httplib.h>

namespace hawkes::resolve {

namespace {

/// Splits an absolute URL into scheme://host part and path for httplib.
struct UrlParts {
    std::string origin;  // scheme://host[:port]
    std::string path;    // starts with '/', defaults to "/"
};

UrlParts split_url(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) {
        throw ResolutionError("URL missing scheme: " + url);
    }
    const auto path_start = url.find('/', scheme + 3);
    if (path_start == std::string::npos) {
        return {url, "/"};
    }
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpRedirectFetcher::HttpRedirectFetcher(int timeout_seconds,
                                         std::string user_agent)
    : timeout_seconds_(timeout_seconds), user_agent_(std::move(user_agent)) {}

FetchResult HttpRedirectFetcher::fetch(const std::string& url) {
    const UrlParts parts = split_url(url);
    httplib::Client client(parts.origin);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);
    client.set_follow_location(false);
    const httplib::Headers headers = {{"User-Agent", user_agent_}};

    auto res = client.Head(parts.path, headers);
    if (res && res->status == 405) {
        res = client.Get(parts.path, headers);
    }
    if (!res) {
        return {0, ""};
    }
    FetchResult out;
    out.status = res->status;
    if (res->has_header("Location")) {
        out.location = res->get_header_value("Location");
    }
    return out;
}

ResolveCache::ResolveCache(const std::string& path) : path_(path) {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            continue;
        }
        entries_[line.substr(0, tab)] = line.substr(tab + 1);
    }
}

std::optional<std::string> ResolveCache::lookup(const std::string& url) const {
    const auto it = entries_.find(url);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void ResolveCache::store(const std::string& url, const std::string& resolved) {
    const auto [it, inserted] = entries_.emplace(url, resolved);
    if (!inserted || path_.empty()) {
        return;
    }
    std::ofstream out(path_, std::ios::app);
    out << url << '\t' << resolved << '\n';
}

std::string resolve_url(const std::string& url, ResolveCache& cache,
                        RedirectFetcher* fetcher, const ResolveOptions& opts) {
    if (const auto cached = cache.lookup(url)) {
        return *cached;
    }
    if (opts.shortener_hosts.count(ingest::url_host(url)) == 0) {
        return url;  // already expanded
    }
    if (fetcher == nullptr) {
        throw ResolutionError("offline and not cached: " + url);
    }

    std::unordered_set<std::string> visited;
    std::string current = url;
    for (std::size_t depth = 0; depth <= opts.max_depth; ++depth) {
        if (!visited.insert(current).second) {
            throw ResolutionError("redirect loop at: " + current);
        }
        const FetchResult hop = fetcher->fetch(current);
        if (hop.status == 0) {
            throw ResolutionError("network failure resolving: " + current);
        }
        if (hop.status >= 300 && hop.status < 400 && !hop.location.empty()) {
            current = hop.location;
            continue;
        }
        cache.store(url, current);
        return current;
    }
    throw ResolutionError("redirect depth exceeded for: " + url);
}

}  // namespace hawkes::resolve
