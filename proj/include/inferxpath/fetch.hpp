#ifndef INFERXPATH_FETCH_HPP
#define INFERXPATH_FETCH_HPP

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "inferxpath/annotations.hpp"
#include "inferxpath/dom.hpp"

namespace ixp {

enum class FetchMode { CorpusOnly, CorpusThenHttp };

struct FetchPolicy {
    FetchMode mode = FetchMode::CorpusOnly;
    int max_fetch = 100;                             // lifetime load cap
    std::optional<std::vector<std::string>> allow_hosts;
    int timeout_ms = 5000;
    int per_host_delay_ms = 0; // politeness pause between HTTP hits per host

    bool host_allowed(const std::string& host) const;
};

enum class FetchStatus { HitCorpus, Fetched, Failed };

struct FetchRecord {
    std::string url;
    FetchStatus status = FetchStatus::HitCorpus;
    std::string reason;                // for Failed
    std::optional<std::string> bytes;  // present iff status == Fetched
};

// Lazy page acquisition. Pages come from the already-loaded corpus, then from
// manifest-listed files, then (CorpusThenHttp) over HTTP. Each URL is loaded
// at most once per Fetcher lifetime; failures are cached like successes so
// dead links stay cheap. Concurrent fetches of one URL are single-flight.
class Fetcher {
public:
    Fetcher(Corpus& corpus, FetchPolicy policy, Manifest manifest = {});

    // Loads the seed pages (or all pages when the manifest names no seeds).
    // Seed loading does not count against fetch instrumentation.
    void load_seeds();

    // `budget`, when given, is a per-evaluation countdown decremented once
    // per fresh load; throws FetchBudgetError at zero. Throws HostDeniedError
    // or NetworkError for uncacheable URLs (and replays them from the
    // negative cache on repeat calls).
    std::shared_ptr<const Document> fetch(const std::string& url, int* budget = nullptr);

    // Fresh loads performed via fetch() since construction.
    int load_count() const { return loads_.load(); }

    std::vector<FetchRecord> records() const;

    const FetchPolicy& policy() const { return policy_; }
    Corpus& corpus() { return corpus_; }

private:
    struct Slot {
        bool done = false;
        bool failed = false;
        std::string error_kind; // "host" | "network"
        std::string reason;
        std::shared_ptr<const Document> doc;
    };

    std::shared_ptr<const Document> load_uncached(const std::string& url,
                                                  std::string& bytes);
    std::string load_page_file(const ManifestPage& page, bool seed);

    Corpus& corpus_;
    FetchPolicy policy_;
    Manifest manifest_;
    std::map<std::string, ManifestPage> by_url_; // canonical url -> page entry

    std::mutex mutex_;
    std::condition_variable cv_;
    std::map<std::string, Slot> slots_;
    std::mutex host_delay_mutex_;
    std::map<std::string, std::chrono::steady_clock::time_point> last_host_hit_;
    std::atomic<int> loads_{0};
    std::vector<FetchRecord> records_;
};

// Convenience: build a corpus + fetcher from a manifest file and load seeds.
struct LoadedCorpus {
    std::unique_ptr<Corpus> corpus;
    std::unique_ptr<Fetcher> fetcher;
};

LoadedCorpus open_corpus(const std::string& manifest_path, FetchPolicy policy = {});

} // namespace ixp

#endif
