#include "inferxpath/fetch.hpp"

#include <chrono>
#include <filesystem>
#include <thread>

#include "inferxpath/html.hpp"
#include "inferxpath/url.hpp"
#include "inferxpath/util.hpp"

namespace ixp {

namespace {

constexpr const char* kUserAgent = "inferxpath/0.1";

std::string http_get(const std::string& url, int timeout_ms, std::string& error);

} // namespace

bool FetchPolicy::host_allowed(const std::string& host) const {
    if (!allow_hosts)
        return true;
    for (const std::string& h : *allow_hosts)
        if (lower_ascii(h) == host)
            return true;
    return false;
}

Fetcher::Fetcher(Corpus& corpus, FetchPolicy policy, Manifest manifest)
    : corpus_(corpus), policy_(policy), manifest_(std::move(manifest)) {
    for (const ManifestPage& page : manifest_.pages)
        by_url_[canonicalize_url(page.url)] = page;
}

void Fetcher::load_seeds() {
    std::vector<std::string> seeds = manifest_.seeds;
    if (seeds.empty())
        for (const ManifestPage& page : manifest_.pages)
            seeds.push_back(page.url);
    for (const std::string& seed : seeds) {
        std::string url = canonicalize_url(seed);
        auto it = by_url_.find(url);
        if (it == by_url_.end())
            throw FormatError("seed URL not listed in manifest pages: " + seed);
        if (!corpus_.has_page(it->second.url))
            load_page_file(it->second, true);
        corpus_.seed_urls.push_back(it->second.url);
    }
}

std::string Fetcher::load_page_file(const ManifestPage& page, bool seed) {
    namespace fs = std::filesystem;
    fs::path file = fs::path(page.file);
    if (file.is_relative())
        file = fs::path(manifest_.base_dir) / file;
    std::string html = read_file(file.string());
    auto doc = std::make_shared<const Document>(parse_document(page.url, html));
    Annotations ann;
    if (!page.annotations.empty()) {
        fs::path apath = fs::path(page.annotations);
        if (apath.is_relative())
            apath = fs::path(manifest_.base_dir) / apath;
        ann = load_annotations(*doc, read_file(apath.string()));
    }
    corpus_.add_page(doc, std::move(ann));
    if (seed) {
        std::lock_guard lock(mutex_);
        records_.push_back({page.url, FetchStatus::HitCorpus, "", std::nullopt});
    }
    return html;
}

std::shared_ptr<const Document> Fetcher::fetch(const std::string& url, int* budget) {
    std::string canonical = canonicalize_url(url);

    // fast path: already in the corpus (seeds and prior fetches)
    if (auto doc = corpus_.document(canonical))
        return doc;
    if (auto it = by_url_.find(canonical); it != by_url_.end())
        if (auto doc = corpus_.document(it->second.url))
            return doc;

    std::unique_lock lock(mutex_);
    for (;;) {
        auto [it, inserted] = slots_.try_emplace(canonical);
        Slot& slot = it->second;
        if (inserted)
            break; // we own the load
        if (!slot.done) {
            // the owner either finishes the slot or abandons it (budget ran
            // out before loading); handle both
            cv_.wait(lock, [&] {
                auto found = slots_.find(canonical);
                return found == slots_.end() || found->second.done;
            });
            continue; // re-examine from scratch
        }
        if (slot.failed) {
            if (slot.error_kind == "host")
                throw HostDeniedError(slot.reason);
            throw NetworkError(slot.reason);
        }
        return slot.doc;
    }

    // single-flight load; the slot blocks other callers until done
    Slot& slot = slots_[canonical];
    if ((budget && *budget <= 0) || loads_.load() >= policy_.max_fetch) {
        // budget exhaustion is per-evaluation, not a property of the URL:
        // drop the slot so a later evaluation may still load it
        slots_.erase(canonical);
        cv_.notify_all();
        throw FetchBudgetError("fetch budget exhausted at " + canonical);
    }
    lock.unlock();

    std::shared_ptr<const Document> result;
    std::string error_kind, reason, bytes;
    try {
        result = load_uncached(canonical, bytes);
    } catch (const HostDeniedError& e) {
        error_kind = "host";
        reason = e.what();
    } catch (const NetworkError& e) {
        error_kind = "network";
        reason = e.what();
    } catch (const std::exception& e) {
        error_kind = "network";
        reason = std::string("load failed: ") + e.what();
    }

    lock.lock();
    slot.done = true;
    if (result) {
        slot.doc = result;
        loads_.fetch_add(1);
        if (budget)
            --*budget;
        records_.push_back({canonical, FetchStatus::Fetched, "", std::move(bytes)});
    } else {
        slot.failed = true;
        slot.error_kind = error_kind;
        slot.reason = reason;
        records_.push_back({canonical, FetchStatus::Failed, reason, std::nullopt});
    }
    cv_.notify_all();
    if (!result) {
        if (error_kind == "host")
            throw HostDeniedError(reason);
        throw NetworkError(reason);
    }
    return result;
}

std::shared_ptr<const Document> Fetcher::load_uncached(const std::string& url,
                                                       std::string& bytes) {
    if (auto it = by_url_.find(url); it != by_url_.end()) {
        bytes = load_page_file(it->second, false);
        return corpus_.document(it->second.url);
    }
    if (policy_.mode == FetchMode::CorpusOnly)
        throw NetworkError("corpus-only miss: " + url);

    std::string host = url_host(url);
    if (!policy_.host_allowed(host))
        throw HostDeniedError("host not allowed: " + host);

    if (policy_.per_host_delay_ms > 0) {
        std::unique_lock delay_lock(host_delay_mutex_);
        auto& last = last_host_hit_[host];
        auto now = std::chrono::steady_clock::now();
        auto wait_until = last + std::chrono::milliseconds(policy_.per_host_delay_ms);
        if (last.time_since_epoch().count() != 0 && wait_until > now)
            std::this_thread::sleep_for(wait_until - now);
        last = std::chrono::steady_clock::now();
    }

    std::string error;
    bytes = http_get(url, policy_.timeout_ms, error);
    if (!error.empty())
        throw NetworkError("fetch of " + url + " failed: " + error);
    auto doc = std::make_shared<const Document>(parse_document(url, bytes));
    corpus_.add_page(doc);
    return doc;
}

std::vector<FetchRecord> Fetcher::records() const {
    std::lock_guard lock(const_cast<std::mutex&>(mutex_));
    return records_;
}

LoadedCorpus open_corpus(const std::string& manifest_path, FetchPolicy policy) {
    LoadedCorpus out;
    out.corpus = std::make_unique<Corpus>();
    out.fetcher =
        std::make_unique<Fetcher>(*out.corpus, policy, load_manifest(manifest_path));
    out.fetcher->load_seeds();
    return out;
}

} // namespace ixp

// httplib pulls in a lot; keep it isolated at the end of this TU.
#define CPPHTTPLIB_NO_EXCEPTIONS
#include <httplib.h>

namespace ixp {
namespace {

std::string http_get(const std::string& url, int timeout_ms, std::string& error) {
    UrlParts parts = split_url(url);
    if (parts.scheme != "http") {
        error = "unsupported scheme: " + (parts.scheme.empty() ? "<none>" : parts.scheme);
        return "";
    }
    std::string target = parts.path.empty() ? "/" : parts.path;
    if (parts.has_query)
        target += "?" + parts.query;
    httplib::Client client("http://" + parts.authority);
    client.set_connection_timeout(0, timeout_ms * 1000);
    client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    client.set_default_headers({{"User-Agent", kUserAgent}});
    auto res = client.Get(target);
    if (!res) {
        error = "connection failed";
        return "";
    }
    if (res->status != 200) {
        error = "HTTP status " + std::to_string(res->status);
        return "";
    }
    return res->body;
}

} // namespace
} // namespace ixp
