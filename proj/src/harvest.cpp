#include "vesa/harvest.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <thread>

namespace vesa {
namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string target;  // /path?query
};

Url split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::InvalidArgument, "not an absolute URL: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string with_query(const std::string& target, const std::string& params) {
  return target + (target.find('?') == std::string::npos ? "?" : "&") + params;
}

Attrs fetch_json(const std::string& url, const HarvestOptions& options) {
  Url u = split_url(url);
  auto backoff = options.retry.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= options.retry.attempts; ++attempt) {
    httplib::Client client(u.origin);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    client.set_follow_location(true);
    auto res = client.Get(u.target, {{"Accept", "application/json"}});
    if (res && res->status >= 200 && res->status < 300) {
      Attrs body = Attrs::parse(res->body, nullptr, false);
      if (body.is_discarded()) throw Error(ErrorCode::RemoteFormatError, url + " returned a non-JSON body");
      return body;
    }
    if (res && res->status >= 400 && res->status < 500) {
      throw Error(ErrorCode::NetworkError, url + " returned HTTP " + std::to_string(res->status));
    }
    last_error = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
    if (attempt < options.retry.attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw Error(ErrorCode::NetworkError, url + " failed after " + std::to_string(options.retry.attempts) +
                                           " attempts: " + last_error);
}

std::string resolve(const std::string& base, const std::string& href) {
  if (href.find("://") != std::string::npos) return href;
  Url u = split_url(base);
  if (!href.empty() && href[0] == '/') return u.origin + href;
  auto dir = u.target.substr(0, u.target.find('?'));
  dir = dir.substr(0, dir.rfind('/') + 1);
  return u.origin + dir + href;
}

std::vector<Attrs> harvest_stac(const std::string& endpoint, size_t limit, const HarvestOptions& options) {
  std::vector<Attrs> out;
  Url u = split_url(endpoint);
  std::string next =
      u.origin + with_query(u.target, "limit=" + std::to_string(std::min(limit, options.page_size)));
  while (!next.empty() && out.size() < limit) {
    Attrs page = fetch_json(next, options);
    auto collections = page.find("collections");
    if (!page.is_object() || collections == page.end() || !collections->is_array()) {
      throw Error(ErrorCode::RemoteFormatError, next + ": no 'collections' array");
    }
    for (auto& c : *collections) {
      if (out.size() == limit) break;
      out.push_back(std::move(c));
    }
    std::string following;
    if (auto links = page.find("links"); links != page.end() && links->is_array()) {
      for (const auto& link : *links) {
        if (link.is_object() && link.value("rel", "") == "next" && link.contains("href")) {
          following = resolve(next, link["href"].get<std::string>());
          break;
        }
      }
    }
    if (following == next) break;
    next = following;
  }
  return out;
}

std::vector<Attrs> page_records(const Attrs& page, const std::string& url) {
  const Attrs* list = nullptr;
  if (page.is_array()) {
    list = &page;
  } else if (page.is_object() && page.contains("result") && page["result"].is_array()) {
    list = &page["result"];
  } else if (page.is_object() && page.contains("hits") && page["hits"].is_object() &&
             page["hits"].contains("hits") && page["hits"]["hits"].is_array()) {
    std::vector<Attrs> out;
    for (const auto& hit : page["hits"]["hits"]) {
      if (!hit.is_object() || !hit.contains("_source")) throw Error(ErrorCode::RemoteFormatError, url + ": hit without _source");
      Attrs doc = hit["_source"];
      if (doc.is_object() && !doc.contains("id") && hit.contains("_id")) doc["id"] = hit["_id"];
      out.push_back(std::move(doc));
    }
    return out;
  }
  if (!list) throw Error(ErrorCode::RemoteFormatError, url + ": unrecognised page shape");
  return {list->begin(), list->end()};
}

std::vector<Attrs> harvest_offset(const std::string& endpoint, size_t limit, const HarvestOptions& options) {
  std::vector<Attrs> out;
  const size_t page = std::max<size_t>(1, std::min(limit, options.page_size));
  const size_t lanes = std::max<size_t>(1, options.parallelism);
  size_t offset = 0;
  bool exhausted = false;
  while (!exhausted && out.size() < limit) {
    std::vector<std::future<std::pair<std::string, Attrs>>> wave;
    for (size_t lane = 0; lane < lanes && offset < limit; ++lane, offset += page) {
      std::string url = with_query(endpoint, "from=" + std::to_string(offset) + "&size=" + std::to_string(page));
      wave.push_back(std::async(std::launch::async, [url, &options] { return std::pair{url, fetch_json(url, options)}; }));
    }
    for (auto& f : wave) {
      auto [url, body] = f.get();
      if (exhausted) continue;
      auto records = page_records(body, url);
      for (auto& r : records) {
        if (out.size() == limit) break;
        out.push_back(std::move(r));
      }
      if (records.size() < page) exhausted = true;
    }
    if (offset >= limit) break;
  }
  return out;
}

}  // namespace

std::vector<Attrs> harvest_remote(const std::string& endpoint, SourceKind kind, size_t limit,
                                  const HarvestOptions& options) {
  if (limit < 1) throw Error(ErrorCode::InvalidArgument, "harvest limit must be >= 1");
  if (options.offline) {
    if (!options.cache_dir) throw Error(ErrorCode::InvalidArgument, "offline harvest needs a cache directory");
    auto docs = read_cache(*options.cache_dir);
    if (docs.size() > limit) docs.resize(limit);
    return docs;
  }
  std::vector<Attrs> docs = kind == SourceKind::Stac ? harvest_stac(endpoint, limit, options)
                                                     : harvest_offset(endpoint, limit, options);
  if (options.cache_dir) write_cache(*options.cache_dir, docs);
  return docs;
}

void write_cache(const std::filesystem::path& dir, const std::vector<Attrs>& documents) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") fs::remove(entry.path());
  }
  for (size_t i = 0; i < documents.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.json", i);
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + (dir / name).string());
    f << documents[i].dump(2) << '\n';
  }
}

std::vector<Attrs> read_cache(const std::filesystem::path& dir) {
  std::vector<Attrs> out;
  for (auto& [name, doc] : read_document_dir(dir)) {
    if (doc.is_discarded()) throw Error(ErrorCode::IoError, "corrupt cache entry " + (dir / name).string());
    out.push_back(std::move(doc));
  }
  return out;
}

}  // namespace vesa
