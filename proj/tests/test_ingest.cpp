#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hawkes/ingest.hpp"
#include "hawkes/io.hpp"
#include "hawkes/resolve.hpp"
#include "hawkes/simulate.hpp"

using namespace hawkes;
using namespace hawkes::ingest;

namespace {

const std::string kSamplePath =
    std::string(HAWKES_DATA_DIR) + "/sample_events.csv";

struct ScriptedFetcher : resolve::RedirectFetcher {
    std::unordered_map<std::string, std::string> redirects;
    std::size_t calls{0};
    resolve::FetchResult fetch(const std::string& url) override {
        ++calls;
        const auto it = redirects.find(url);
        if (it != redirects.end()) {
            return {301, it->second};
        }
        return {200, ""};
    }
};

bool same_sequence(const EventSequence& a, const EventSequence& b) {
    if (a.horizon != b.horizon || a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.events[i].time != b.events[i].time ||
            a.events[i].dim != b.events[i].dim) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("parse_event_log on the bundled sample") {
    const auto records = parse_event_log(kSamplePath);
    CHECK(records.size() == 50);
    std::unordered_set<std::string> cascades;
    for (const auto& r : records) {
        cascades.insert(r.cascade_id);
    }
    CHECK(cascades.size() == 3);
    CHECK(records[0].record_id == "o1");
    CHECK(records[0].retweet_of.empty());
    CHECK(records[1].retweet_of == "o1");
    CHECK(records[1].timestamp == 1456185610);
    CHECK(records[1].label == Group::psm);
}

TEST_CASE("parse_event_log error handling") {
    const std::string header =
        "record_id,cascade_id,user_id,timestamp,url,label,retweet_of\n";
    SUBCASE("header-only file is empty, not an error") {
        CHECK(parse_event_log_text(header).empty());
    }
    SUBCASE("unknown label names the line") {
        try {
            parse_event_log_text(header +
                                 "r1,c1,u1,100,https://a.com/x,bot,\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
            CHECK(std::string(e.what()).find("bot") != std::string::npos);
        }
    }
    SUBCASE("bad header") {
        try {
            parse_event_log_text("id,when\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 1);
        }
    }
    SUBCASE("unparseable timestamp") {
        CHECK_THROWS_AS(parse_event_log_text(
                            header + "r1,c1,u1,noon,https://a.com/x,psm,\n"),
                        ParseError);
    }
    SUBCASE("duplicate record id") {
        CHECK_THROWS_AS(
            parse_event_log_text(header +
                                 "r1,c1,u1,1,https://a.com/x,psm,\n"
                                 "r1,c1,u2,2,https://a.com/y,psm,\n"),
            ParseError);
    }
}

TEST_CASE("categorize_url") {
    const auto tax = PlatformTaxonomy::builtin();
    CHECK(categorize_url("https://www.nytimes.com/2016/x", tax) ==
          Platform::Mainstream);
    CHECK(categorize_url("https://www.rt.com/y", tax) ==
          Platform::Alternatives);
    CHECK(categorize_url("https://m.facebook.com/p", tax) ==
          Platform::Facebook);
    CHECK(categorize_url("https://youtu.be/abc", tax) == Platform::Youtube);
    CHECK(categorize_url("https://twitter.com/u/status/1", tax) ==
          Platform::Twitter);
    CHECK(categorize_url("https://www.google.com/maps", tax) ==
          Platform::Google);
    CHECK(categorize_url("https://www.instagram.com/p/1", tax) ==
          Platform::Instagram);
    CHECK_THROWS_AS(categorize_url("https:///path-only", tax),
                    std::invalid_argument);

    SUBCASE("total over random hosts") {
        std::mt19937_64 rng(2);
        const std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
        for (int rep = 0; rep < 500; ++rep) {
            std::string host;
            for (int i = 0; i < 1 + static_cast<int>(rng() % 12); ++i) {
                host += alphabet[rng() % alphabet.size()];
            }
            host += rng() % 2 == 0 ? ".com" : ".net";
            const auto platform =
                categorize_url("https://" + host + "/x", tax);
            CHECK(static_cast<std::size_t>(platform) < kNumPlatforms);
        }
    }
    SUBCASE("files match the builtin table") {
        const auto loaded = PlatformTaxonomy::load(
            std::string(HAWKES_DATA_DIR) + "/taxonomy.tsv",
            std::string(HAWKES_DATA_DIR) + "/mainstream.txt");
        for (const auto& url :
             {"https://twitter.com/a", "https://www.fb.com/b",
              "https://www.wsj.com/c", "https://zamnpress.com/d",
              "https://www.youtube.com/e"}) {
            CHECK(categorize_url(url, loaded) == categorize_url(url, tax));
        }
    }
}

TEST_CASE("derive_pairs on the bundled sample") {
    const auto records = parse_event_log(kSamplePath);
    const auto tax = PlatformTaxonomy::builtin();
    std::vector<std::string> warnings;
    const auto pairs = derive_pairs(records, tax, &warnings);

    CHECK(pairs.size() == 41);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("oMISSING") != std::string::npos);

    std::size_t psm = 0;
    std::size_t retweets = 0;
    for (const auto& p : pairs) {
        if (p.group == Group::psm) {
            ++psm;
        }
    }
    for (const auto& r : records) {
        if (!r.retweet_of.empty()) {
            ++retweets;
        }
    }
    CHECK(psm == 25);
    CHECK(pairs.size() - psm == 16);
    CHECK(pairs.size() <= retweets);

    SUBCASE("repeat retweeter collapses to the earliest occurrence") {
        std::size_t hits = 0;
        for (const auto& p : pairs) {
            if (p.cascade_id == "c1" && p.timestamp == 1456185610) {
                ++hits;
                CHECK(p.source_platform == Platform::Facebook);
            }
            CHECK(p.timestamp != 1456186100);  // the duplicate retweets
            CHECK(p.timestamp != 1456186500);
        }
        CHECK(hits == 1);
    }
}

TEST_CASE("build_sequences golden values") {
    const auto records = parse_event_log(kSamplePath);
    const auto pairs = derive_pairs(records, PlatformTaxonomy::builtin());

    SUBCASE("psm group") {
        const auto seqs = build_sequences(pairs, Group::psm);
        REQUIRE(seqs.size() == 3);

        const std::vector<std::pair<double, Platform>> c1 = {
            {0, Platform::Facebook},  {90, Platform::Facebook},
            {140, Platform::Twitter}, {190, Platform::Facebook},
            {240, Platform::Twitter}, {290, Platform::Facebook},
            {390, Platform::Facebook},{470, Platform::Facebook},
            {590, Platform::Twitter}, {690, Platform::Twitter},
            {790, Platform::Twitter}, {990, Platform::Twitter},
            {1040, Platform::Twitter}};
        REQUIRE(seqs[0].size() == c1.size());
        CHECK(seqs[0].horizon == 1040.0);
        for (std::size_t i = 0; i < c1.size(); ++i) {
            CHECK(seqs[0].events[i].time == c1[i].first);
            CHECK(seqs[0].events[i].dim ==
                  static_cast<std::size_t>(c1[i].second));
        }

        REQUIRE(seqs[1].size() == 2);
        CHECK(seqs[1].horizon == 100.0);
        CHECK(seqs[1].events[0].dim ==
              static_cast<std::size_t>(Platform::Alternatives));
        CHECK(seqs[1].events[1].time == 100.0);

        REQUIRE(seqs[2].size() == 10);
        CHECK(seqs[2].horizon == 90.0);
        for (const auto& e : seqs[2].events) {
            CHECK(e.dim == static_cast<std::size_t>(Platform::Youtube));
        }

        std::size_t total = 0;
        for (const auto& s : seqs) {
            total += s.size();
        }
        CHECK(total == 25);  // pair count of the group after deduplication
    }
    SUBCASE("normal group") {
        const auto seqs = build_sequences(pairs, Group::normal);
        REQUIRE(seqs.size() == 3);
        CHECK(seqs[0].size() == 2);
        CHECK(seqs[0].horizon == 100.0);
        CHECK(seqs[0].events[0].dim ==
              static_cast<std::size_t>(Platform::Twitter));
        CHECK(seqs[1].size() == 13);
        CHECK(seqs[1].horizon == 86400.0);
        // degenerate single-pair cascade gets the minimum horizon
        CHECK(seqs[2].size() == 1);
        CHECK(seqs[2].horizon == 1.0);
        CHECK(seqs[2].events[0].time == 0.0);
    }
    SUBCASE("sequences validate against the 7-dimension model") {
        for (auto group : {Group::psm, Group::normal}) {
            for (const auto& seq : build_sequences(pairs, group)) {
                CHECK_NOTHROW(seq.validate(kNumPlatforms));
            }
        }
    }
}

TEST_CASE("simultaneous timestamps are perturbed, order preserved") {
    std::vector<PairedUrl> pairs;
    for (int i = 0; i < 3; ++i) {
        PairedUrl p;
        p.cascade_id = "c";
        p.source_platform = static_cast<Platform>(i);
        p.timestamp = 1000;
        p.group = Group::psm;
        pairs.push_back(p);
    }
    const auto seqs = build_sequences(pairs, Group::psm);
    REQUIRE(seqs.size() == 1);
    REQUIRE(seqs[0].size() == 3);
    CHECK(seqs[0].events[0].time < seqs[0].events[1].time);
    CHECK(seqs[0].events[1].time < seqs[0].events[2].time);
    CHECK(seqs[0].events[0].dim == 0);  // appearance order kept
    CHECK(seqs[0].events[2].dim == 2);
    CHECK_NOTHROW(seqs[0].validate(kNumPlatforms));
}

TEST_CASE("cascade_stats") {
    SUBCASE("bundled sample goldens") {
        const auto stats = cascade_stats(parse_event_log(kSamplePath));
        REQUIRE(stats.cascades.size() == 3);
        CHECK(stats.cascades[0].cascade_id == "c1");
        CHECK(stats.cascades[0].size == 20);
        CHECK(stats.cascades[0].duration_seconds == 1100);
        CHECK(stats.cascades[0].suspended_users == 16);
        CHECK(stats.cascades[1].size == 18);
        CHECK(stats.cascades[1].duration_seconds == 86500);
        CHECK(stats.cascades[1].suspended_users == 3);
        CHECK(stats.cascades[2].size == 12);
        CHECK(stats.cascades[2].duration_seconds == 100);
        CHECK(stats.cascades[2].suspended_users == 11);

        CHECK(stats.daily_pairs_psm.at(16854) == 13);
        CHECK(stats.daily_pairs_normal.at(16854) == 2);
        CHECK(stats.daily_pairs_psm.at(16855) == 12);
        CHECK(stats.daily_pairs_normal.at(16855) == 13);
        CHECK(stats.daily_pairs_normal.at(16856) == 1);
        CHECK(stats.daily_pairs_psm.count(16856) == 0);
    }
    SUBCASE("single cascade spanning 100 seconds") {
        std::string text =
            "record_id,cascade_id,user_id,timestamp,url,label,retweet_of\n";
        for (int i = 0; i < 5; ++i) {
            text += "r" + std::to_string(i) + ",c,u" + std::to_string(i) +
                    "," + std::to_string(1000 + 25 * i) +
                    ",https://a.com/x,normal," + (i == 0 ? "" : "r0") + "\n";
        }
        const auto stats = cascade_stats(parse_event_log_text(text));
        REQUIRE(stats.cascades.size() == 1);
        CHECK(stats.cascades[0].size == 5);
        CHECK(stats.cascades[0].duration_seconds == 100);
        CHECK(stats.cascades[0].suspended_users == 0);
    }
    SUBCASE("one-record cascade has zero duration") {
        const auto stats = cascade_stats(parse_event_log_text(
            "record_id,cascade_id,user_id,timestamp,url,label,retweet_of\n"
            "r0,c,u0,5,https://a.com/x,psm,\n"));
        REQUIRE(stats.cascades.size() == 1);
        CHECK(stats.cascades[0].duration_seconds == 0);
        CHECK(stats.cascades[0].suspended_users == 1);
    }
}

TEST_CASE("resolve_url") {
    SUBCASE("expanded URL is its own fixed point, no network call") {
        resolve::ResolveCache cache;
        ScriptedFetcher fetcher;
        CHECK(resolve::resolve_url("https://www.example.com/a", cache,
                                   &fetcher) == "https://www.example.com/a");
        CHECK(fetcher.calls == 0);
    }
    SUBCASE("cache hit answers without a network call") {
        resolve::ResolveCache cache;
        cache.store("https://t.co/x", "https://www.youtube.com/watch?v=1");
        ScriptedFetcher fetcher;
        CHECK(resolve::resolve_url("https://t.co/x", cache, &fetcher) ==
              "https://www.youtube.com/watch?v=1");
        CHECK(fetcher.calls == 0);
    }
    SUBCASE("scripted chain a -> b -> c resolves and caches a -> c") {
        resolve::ResolveCache cache;
        ScriptedFetcher fetcher;
        fetcher.redirects["https://t.co/a"] = "https://bit.ly/b";
        fetcher.redirects["https://bit.ly/b"] = "https://www.example.com/c";
        CHECK(resolve::resolve_url("https://t.co/a", cache, &fetcher) ==
              "https://www.example.com/c");
        CHECK(cache.lookup("https://t.co/a") == "https://www.example.com/c");
    }
    SUBCASE("offline mode raises for uncached shortened URLs") {
        resolve::ResolveCache cache;
        CHECK_THROWS_AS(resolve::resolve_url("https://t.co/y", cache, nullptr),
                        resolve::ResolutionError);
    }
    SUBCASE("redirect loop detection") {
        resolve::ResolveCache cache;
        ScriptedFetcher fetcher;
        fetcher.redirects["https://t.co/a"] = "https://bit.ly/b";
        fetcher.redirects["https://bit.ly/b"] = "https://t.co/a";
        CHECK_THROWS_AS(resolve::resolve_url("https://t.co/a", cache, &fetcher),
                        resolve::ResolutionError);
    }
    SUBCASE("persistent cache file round trip") {
        const std::string path = "resolve_cache_test.tsv";
        std::remove(path.c_str());
        {
            resolve::ResolveCache cache(path);
            cache.store("https://t.co/q", "https://www.example.com/q");
        }
        resolve::ResolveCache reloaded(path);
        CHECK(reloaded.lookup("https://t.co/q") ==
              "https://www.example.com/q");
        std::remove(path.c_str());
    }
}

TEST_CASE("event-log dump and re-ingest is a fixed point") {
    const HawkesParams p({0.2, 0.1, 0.0, 0.0, 0.3, 0.0, 0.1},
                         std::vector<std::vector<double>>(
                             7, std::vector<double>(7, 0.05)),
                         ExpKernel(0.01));
    SimConfig cfg;
    cfg.horizon = 5000.0;
    cfg.seed = 12;
    const auto simulated = simulate_batch(p, cfg, 3);

    const auto tax = PlatformTaxonomy::builtin();
    const auto dump = io::sequences_to_event_log(simulated, Group::psm);
    const auto once =
        build_sequences(derive_pairs(parse_event_log_text(dump), tax),
                        Group::psm);
    const auto dump2 = io::sequences_to_event_log(once, Group::psm);
    const auto twice =
        build_sequences(derive_pairs(parse_event_log_text(dump2), tax),
                        Group::psm);
    REQUIRE(once.size() == twice.size());
    for (std::size_t k = 0; k < once.size(); ++k) {
        CHECK(same_sequence(once[k], twice[k]));
    }
    // second-resolution quantization is the only loss
    std::size_t events_in = 0, events_out = 0;
    for (const auto& s : simulated) {
        events_in += s.size();
    }
    for (const auto& s : once) {
        events_out += s.size();
    }
    CHECK(events_in == events_out);
}

TEST_CASE("pipeline determinism") {
    const auto a = parse_event_log(kSamplePath);
    const auto b = parse_event_log(kSamplePath);
    const auto tax = PlatformTaxonomy::builtin();
    const auto seq_a = build_sequences(derive_pairs(a, tax), Group::psm);
    const auto seq_b = build_sequences(derive_pairs(b, tax), Group::psm);
    REQUIRE(seq_a.size() == seq_b.size());
    for (std::size_t k = 0; k < seq_a.size(); ++k) {
        CHECK(same_sequence(seq_a[k], seq_b[k]));
    }
}
