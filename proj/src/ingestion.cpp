#include "vesa/ingestion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vesa/text.hpp"

namespace vesa {

double SpatialExtent::display_latitude() const {
  return mean_latitude.value_or((north_bound_latitude + south_bound_latitude) / 2.0);
}

double SpatialExtent::display_longitude() const {
  if (mean_longitude) return *mean_longitude;
  double west = west_bound_longitude;
  double east = east_bound_longitude;
  if (west <= east) return (west + east) / 2.0;
  double mid = (west + east + 360.0) / 2.0;
  return mid > 180.0 ? mid - 360.0 : mid;
}

IngestReport& IngestReport::operator+=(const IngestReport& other) {
  corpora_added += other.corpora_added;
  datasets_added += other.datasets_added;
  collections_added += other.collections_added;
  publications_added += other.publications_added;
  authors_added += other.authors_added;
  keywords_added += other.keywords_added;
  edges_added += other.edges_added;
  records_rejected += other.records_rejected;
  rejections.insert(rejections.end(), other.rejections.begin(), other.rejections.end());
  return *this;
}

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }
[[noreturn]] void field_error(const std::string& what) { throw Error(ErrorCode::FieldError, what); }

const Attrs* member(const Attrs& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

std::optional<std::string> opt_string(const Attrs& obj, const char* name) {
  const Attrs* v = member(obj, name);
  if (!v) return std::nullopt;
  if (!v->is_string()) parse_error(std::string("'") + name + "' is not a string");
  return v->get<std::string>();
}

std::optional<double> opt_number(const Attrs& obj, const char* name) {
  const Attrs* v = member(obj, name);
  if (!v) return std::nullopt;
  if (!v->is_number()) parse_error(std::string("'") + name + "' is not a number");
  double d = v->get<double>();
  if (!std::isfinite(d)) field_error(std::string("'") + name + "' is not finite");
  return d;
}

std::optional<Timestamp> opt_timestamp(const Attrs& obj, const char* name) {
  auto text = opt_string(obj, name);
  if (!text) return std::nullopt;
  auto instant = parse_timestamp(*text);
  if (!instant) field_error(std::string("'") + name + "' is not an RFC 3339 timestamp: " + *text);
  return Timestamp{*instant, *text};
}

std::string required_key(const Attrs& raw, const char* name) {
  const Attrs* v = member(raw, name);
  std::string key;
  if (v && v->is_string()) {
    key = v->get<std::string>();
  } else if (v && v->is_number_integer()) {
    key = v->dump();
  } else {
    parse_error(std::string("missing identifier '") + name + "'");
  }
  // Accept "Dataset/123" as well as a bare key.
  if (auto id = NodeId::try_parse(key)) key = std::string(id->key());
  if (key.empty() || key.find('/') != std::string::npos) field_error("invalid identifier '" + key + "'");
  return key;
}

std::vector<std::string> term_list(const Attrs& raw, const char* name) {
  std::vector<std::string> out;
  const Attrs* v = member(raw, name);
  if (!v) return out;
  if (!v->is_array()) parse_error(std::string("'") + name + "' is not a list");
  std::set<std::string> seen;
  for (const auto& entry : *v) {
    std::string term;
    if (entry.is_string()) {
      term = entry.get<std::string>();
    } else if (entry.is_object() && entry.contains("name") && entry["name"].is_string()) {
      term = entry["name"].get<std::string>();
    } else {
      parse_error(std::string("'") + name + "' entries must be strings");
    }
    term = normalize_term(term);
    if (!term.empty() && seen.insert(term).second) out.push_back(term);
  }
  return out;
}

std::vector<AuthorRef> author_list(const Attrs& raw, const char* name, const char* name_field) {
  std::vector<AuthorRef> out;
  const Attrs* v = member(raw, name);
  if (!v) return out;
  if (!v->is_array()) parse_error(std::string("'") + name + "' is not a list");
  std::set<std::string> seen;
  for (const auto& entry : *v) {
    AuthorRef author;
    if (entry.is_string()) {
      author.name = entry.get<std::string>();
    } else if (entry.is_object()) {
      author.name = opt_string(entry, name_field).value_or("");
      author.organization = opt_string(entry, "organization").value_or("");
    } else {
      parse_error(std::string("'") + name + "' entries must be strings or records");
    }
    author.name = collapse_whitespace(author.name);
    if (author.name.empty()) continue;
    if (seen.insert(author_key(author.name)).second) out.push_back(std::move(author));
  }
  return out;
}

void check_coverage(const TemporalCoverage& tc) {
  if (tc.start && tc.end && tc.start->instant > tc.end->instant) {
    field_error("temporal coverage start " + tc.start->text + " is after end " + tc.end->text);
  }
}

void check_extent(const SpatialExtent& e) {
  auto lon_ok = [](double v) { return v >= -180.0 && v <= 180.0; };
  auto lat_ok = [](double v) { return v >= -90.0 && v <= 90.0; };
  if (!lon_ok(e.west_bound_longitude) || !lon_ok(e.east_bound_longitude)) field_error("longitude out of range");
  if (!lat_ok(e.north_bound_latitude) || !lat_ok(e.south_bound_latitude)) field_error("latitude out of range");
  if (e.south_bound_latitude > e.north_bound_latitude) field_error("south bound exceeds north bound");
  if (e.mean_latitude && !lat_ok(*e.mean_latitude)) field_error("mean latitude out of range");
  if (e.mean_longitude && !lon_ok(*e.mean_longitude)) field_error("mean longitude out of range");
}

Attrs timestamp_json(const Timestamp& t) { return t.text; }

Timestamp timestamp_from_json(const Attrs& v) {
  const auto& text = v.get_ref<const std::string&>();
  auto instant = parse_timestamp(text);
  if (!instant) throw Error(ErrorCode::SchemaViolation, "bad timestamp " + text);
  return Timestamp{*instant, text};
}

}  // namespace

NormalizedDataset parse_pangaea_record(const Attrs& raw) {
  static const std::set<std::string, std::less<>> known = {
      "id",          "dataset_title", "title",    "organization",     "abstract",
      "doi",         "dataset_publication_date", "temporal_coverage", "location_data",
      "authors",     "keywords"};
  if (!raw.is_object()) parse_error("record is not a JSON object");

  NormalizedDataset d;
  d.kind = NodeKind::Dataset;
  d.source_key = required_key(raw, "id");
  auto title = opt_string(raw, "dataset_title");
  if (!title) title = opt_string(raw, "title");
  if (!title || collapse_whitespace(*title).empty()) field_error("record has no title");
  d.title = *title;
  d.organization = opt_string(raw, "organization").value_or(kPangaeaOrganization);
  d.abstract = opt_string(raw, "abstract").value_or("");
  d.doi = opt_string(raw, "doi").value_or("");
  d.publication_date = opt_timestamp(raw, "dataset_publication_date");

  if (const Attrs* tc = member(raw, "temporal_coverage")) {
    if (!tc->is_object()) parse_error("'temporal_coverage' is not an object");
    TemporalCoverage cov{opt_timestamp(*tc, "start_date"), opt_timestamp(*tc, "end_date")};
    check_coverage(cov);
    if (cov.start || cov.end) d.temporal_coverage = cov;
  }

  if (const Attrs* loc = member(raw, "location_data")) {
    if (!loc->is_object()) parse_error("'location_data' is not an object");
    auto w = opt_number(*loc, "west_bound_longitude");
    auto e = opt_number(*loc, "east_bound_longitude");
    auto n = opt_number(*loc, "north_bound_latitude");
    auto s = opt_number(*loc, "south_bound_latitude");
    if (w || e || n || s) {
      if (!(w && e && n && s)) field_error("incomplete bounding box");
      SpatialExtent ext{*w, *e, *n, *s, opt_number(*loc, "mean_latitude"), opt_number(*loc, "mean_longitude")};
      check_extent(ext);
      d.location = ext;
    }
  }

  d.authors = author_list(raw, "authors", "name");
  d.keywords = term_list(raw, "keywords");
  for (const auto& [k, v] : raw.items()) {
    if (!known.count(k)) d.extra[k] = v;
  }
  return d;
}

NormalizedDataset parse_stac_collection(const Attrs& raw, const std::string& organization) {
  static const std::set<std::string, std::less<>> known = {
      "id", "title", "description", "extent", "keywords", "providers", "sci:doi", "mission", "summaries"};
  if (!raw.is_object()) parse_error("collection is not a JSON object");
  if (auto type = opt_string(raw, "type"); type && *type != "Collection") {
    parse_error("document type '" + *type + "' is not a Collection");
  }

  NormalizedDataset d;
  d.kind = NodeKind::STACCollection;
  d.source_key = required_key(raw, "id");
  d.title = opt_string(raw, "title").value_or(d.source_key);
  if (collapse_whitespace(d.title).empty()) d.title = d.source_key;
  d.organization = organization.empty() ? kStacOrganization : organization;
  d.abstract = opt_string(raw, "description").value_or("");
  if (auto doi = opt_string(raw, "sci:doi")) {
    d.doi = doi->rfind("http", 0) == 0 ? *doi : "https://doi.org/" + *doi;
  }

  if (const Attrs* extent = member(raw, "extent")) {
    if (!extent->is_object()) parse_error("'extent' is not an object");
    if (const Attrs* spatial = member(*extent, "spatial")) {
      const Attrs* bbox = spatial->is_object() ? member(*spatial, "bbox") : nullptr;
      if (bbox) {
        if (!bbox->is_array() || bbox->empty() || !(*bbox)[0].is_array()) parse_error("malformed extent.spatial.bbox");
        const Attrs& b = (*bbox)[0];
        if (b.size() != 4 && b.size() != 6) parse_error("bbox must have 4 or 6 numbers");
        for (const auto& v : b) {
          if (!v.is_number()) parse_error("bbox entries must be numbers");
        }
        // 2D: [west, south, east, north]; 3D: [west, south, min_z, east, north, max_z].
        size_t east_at = b.size() == 4 ? 2 : 3;
        SpatialExtent ext{b[0].get<double>(), b[east_at].get<double>(), b[east_at + 1].get<double>(),
                          b[1].get<double>(), std::nullopt, std::nullopt};
        check_extent(ext);
        d.location = ext;
      }
    }
    if (const Attrs* temporal = member(*extent, "temporal")) {
      const Attrs* interval = temporal->is_object() ? member(*temporal, "interval") : nullptr;
      if (interval) {
        if (!interval->is_array() || interval->empty() || !(*interval)[0].is_array() || (*interval)[0].size() != 2) {
          parse_error("malformed extent.temporal.interval");
        }
        const Attrs& iv = (*interval)[0];
        auto bound = [](const Attrs& v) -> std::optional<Timestamp> {
          if (v.is_null()) return std::nullopt;
          if (!v.is_string()) parse_error("temporal interval bounds must be strings or null");
          auto instant = parse_timestamp(v.get<std::string>());
          if (!instant) field_error("bad temporal interval bound " + v.get<std::string>());
          return Timestamp{*instant, v.get<std::string>()};
        };
        TemporalCoverage cov{bound(iv[0]), bound(iv[1])};
        check_coverage(cov);
        if (cov.start || cov.end) d.temporal_coverage = cov;
      }
    }
  }

  d.keywords = term_list(raw, "keywords");
  d.authors = author_list(raw, "providers", "name");

  std::set<std::string> missions;
  if (auto m = opt_string(raw, "mission")) missions.insert(normalize_term(*m));
  if (const Attrs* summaries = member(raw, "summaries"); summaries && summaries->is_object()) {
    for (const char* field : {"mission", "constellation", "platform"}) {
      const Attrs* list = member(*summaries, field);
      if (!list || !list->is_array()) continue;
      for (const auto& v : *list) {
        if (v.is_string()) missions.insert(normalize_term(v.get<std::string>()));
      }
    }
  }
  missions.erase("");
  // Without a declared mission the collection id names it.
  if (missions.empty()) missions.insert(normalize_term(d.source_key));
  d.missions.assign(missions.begin(), missions.end());

  for (const auto& [k, v] : raw.items()) {
    if (!known.count(k)) d.extra[k] = v;
  }
  return d;
}

PublicationRecord parse_publication_record(const Attrs& raw) {
  if (!raw.is_object()) parse_error("publication is not a JSON object");
  PublicationRecord p;
  p.source_key = required_key(raw, "id");
  p.title = opt_string(raw, "title").value_or("");
  if (collapse_whitespace(p.title).empty()) field_error("publication has no title");
  p.doi = opt_string(raw, "doi").value_or("");
  p.authors = author_list(raw, "authors", "name");
  p.keywords = term_list(raw, "keywords");
  p.mission_mentions = term_list(raw, "mission_mentions");
  if (const Attrs* related = member(raw, "related_dataset_keys")) {
    if (!related->is_array()) parse_error("'related_dataset_keys' is not a list");
    for (const auto& v : *related) {
      if (!v.is_string() && !v.is_number_integer()) parse_error("'related_dataset_keys' entries must be keys");
      std::string key = v.is_string() ? v.get<std::string>() : v.dump();
      if (auto id = NodeId::try_parse(key)) key = std::string(id->key());
      p.related_dataset_keys.push_back(key);
    }
  }
  return p;
}

Attrs dataset_attrs(const NormalizedDataset& d) {
  Attrs a = {{"source_key", d.source_key}, {"organization", d.organization}, {"title", d.title},
             {"abstract", d.abstract},     {"doi", d.doi}};
  if (d.publication_date) a["publication_date"] = timestamp_json(*d.publication_date);
  if (d.temporal_coverage) {
    Attrs tc = Attrs::object();
    if (d.temporal_coverage->start) tc["start"] = timestamp_json(*d.temporal_coverage->start);
    if (d.temporal_coverage->end) tc["end"] = timestamp_json(*d.temporal_coverage->end);
    a["temporal_coverage"] = tc;
  }
  if (d.location) {
    const auto& l = *d.location;
    Attrs loc = {{"west_bound_longitude", l.west_bound_longitude},
                 {"east_bound_longitude", l.east_bound_longitude},
                 {"north_bound_latitude", l.north_bound_latitude},
                 {"south_bound_latitude", l.south_bound_latitude}};
    if (l.mean_latitude) loc["mean_latitude"] = *l.mean_latitude;
    if (l.mean_longitude) loc["mean_longitude"] = *l.mean_longitude;
    a["location"] = loc;
  }
  a["authors"] = Attrs::array();
  for (const auto& author : d.authors) {
    a["authors"].push_back({{"name", author.name}, {"organization", author.organization}});
  }
  a["keywords"] = d.keywords;
  a["missions"] = d.missions;
  if (!d.extra.empty()) a["extra"] = d.extra;
  return a;
}

NormalizedDataset dataset_from_node(const GraphNode& node) {
  const Attrs& a = node.attrs;
  NormalizedDataset d;
  d.kind = node.kind;
  d.source_key = a.value("source_key", std::string(node.id.key()));
  d.organization = a.value("organization", "");
  d.title = a.value("title", "");
  d.abstract = a.value("abstract", "");
  d.doi = a.value("doi", "");
  if (auto it = a.find("publication_date"); it != a.end()) d.publication_date = timestamp_from_json(*it);
  if (auto it = a.find("temporal_coverage"); it != a.end()) {
    TemporalCoverage tc;
    if (it->contains("start")) tc.start = timestamp_from_json((*it)["start"]);
    if (it->contains("end")) tc.end = timestamp_from_json((*it)["end"]);
    if (tc.start || tc.end) d.temporal_coverage = tc;
  }
  if (auto it = a.find("location"); it != a.end()) {
    const Attrs& l = *it;
    SpatialExtent ext{l.at("west_bound_longitude").get<double>(), l.at("east_bound_longitude").get<double>(),
                      l.at("north_bound_latitude").get<double>(), l.at("south_bound_latitude").get<double>(),
                      std::nullopt, std::nullopt};
    if (l.contains("mean_latitude")) ext.mean_latitude = l["mean_latitude"].get<double>();
    if (l.contains("mean_longitude")) ext.mean_longitude = l["mean_longitude"].get<double>();
    d.location = ext;
  }
  if (auto it = a.find("authors"); it != a.end()) {
    for (const auto& author : *it) {
      d.authors.push_back({author.value("name", ""), author.value("organization", "")});
    }
  }
  if (auto it = a.find("keywords"); it != a.end()) d.keywords = it->get<std::vector<std::string>>();
  if (auto it = a.find("missions"); it != a.end()) d.missions = it->get<std::vector<std::string>>();
  if (auto it = a.find("extra"); it != a.end()) d.extra = *it;
  return d;
}

namespace {

const Attrs kDirect = {{"provenance", "direct"}};

class Ingestor {
 public:
  Ingestor(GraphStore& store, IngestReport& report) : store_(store), report_(report) {}

  NodeId author(const AuthorRef& ref) {
    std::string key = author_key(ref.name);
    NodeId id = NodeId::make(NodeKind::Author, key);
    if (!store_.contains(id)) {
      store_.add_node(NodeKind::Author, key, {{"name", ref.name}, {"organization", ref.organization}});
      ++report_.authors_added;
    }
    return id;
  }

  NodeId keyword(const std::string& term) {
    if (auto existing = store_.keyword_node(term)) return *existing;
    ++report_.keywords_added;
    return store_.add_node(NodeKind::Keyword, keyword_key(term), {{"term", term}});
  }

  void edge(EdgeKind kind, const NodeId& from, const NodeId& to) {
    size_t before = store_.edge_count();
    store_.add_edge(kind, from, to, kDirect);
    report_.edges_added += store_.edge_count() - before;
  }

 private:
  GraphStore& store_;
  IngestReport& report_;
};

}  // namespace

IngestReport ingest(GraphStore& store, const IngestBatch& batch, const std::string& corpus_name) {
  if (store.frozen()) throw Error(ErrorCode::BuildPhaseError, "ingest on a frozen store");
  IngestReport report;
  report.rejections = batch.rejections;
  report.records_rejected = batch.rejections.size();
  Ingestor in(store, report);

  std::optional<NodeId> corpus;
  if (!corpus_name.empty()) {
    corpus = NodeId::make(NodeKind::Corpus, corpus_name);
    if (!store.contains(*corpus)) {
      store.add_node(NodeKind::Corpus, corpus_name, {{"name", corpus_name}});
      ++report.corpora_added;
    }
  } else if (!batch.datasets.empty()) {
    throw Error(ErrorCode::InvalidArgument, "datasets require a corpus name");
  }

  for (const auto& d : batch.datasets) {
    NodeId id = NodeId::make(d.kind, d.source_key);
    if (store.contains(id)) continue;
    try {
      store.add_node(d.kind, d.source_key, dataset_attrs(d));
    } catch (const Error& e) {
      report.rejections.push_back({d.source_key, e.what()});
      ++report.records_rejected;
      continue;
    }
    ++(d.kind == NodeKind::Dataset ? report.datasets_added : report.collections_added);
    in.edge(EdgeKind::BelongsToCorpus, id, *corpus);
    for (const auto& a : d.authors) in.edge(EdgeKind::HasAuthor, id, in.author(a));
    for (const auto& k : d.keywords) in.edge(EdgeKind::HasKeyword, id, in.keyword(k));
  }

  for (const auto& p : batch.publications) {
    NodeId id = NodeId::make(NodeKind::Publication, p.source_key);
    if (store.contains(id)) continue;
    Attrs attrs = {{"source_key", p.source_key},       {"title", p.title},
                   {"doi", p.doi},                     {"keywords", p.keywords},
                   {"mission_mentions", p.mission_mentions}, {"related_dataset_keys", p.related_dataset_keys}};
    try {
      store.add_node(NodeKind::Publication, p.source_key, std::move(attrs));
    } catch (const Error& e) {
      report.rejections.push_back({p.source_key, e.what()});
      ++report.records_rejected;
      continue;
    }
    ++report.publications_added;
    for (const auto& a : p.authors) in.edge(EdgeKind::HasAuthor, id, in.author(a));
    for (const auto& k : p.keywords) in.edge(EdgeKind::HasKeyword, id, in.keyword(k));
    for (const auto& key : p.related_dataset_keys) {
      auto dataset = NodeId::try_parse("Dataset/" + key);
      if (dataset && store.contains(*dataset)) {
        in.edge(EdgeKind::HasPublication, *dataset, id);
      } else {
        // The publication stays; only the dangling link is reported.
        report.rejections.push_back({p.source_key, "unresolved related dataset '" + key + "'"});
      }
    }
  }
  return report;
}

std::string_view to_string(SourceKind kind) noexcept {
  switch (kind) {
    case SourceKind::Pangaea: return "pangaea";
    case SourceKind::Stac: return "stac";
    case SourceKind::Publication: return "publication";
  }
  return "";
}

std::vector<SourceConfig> parse_sources(const Attrs& config) {
  if (!config.is_array()) throw Error(ErrorCode::ConfigError, "sources config must be a JSON array");
  std::vector<SourceConfig> out;
  std::set<std::string> names;
  for (const auto& entry : config) {
    if (!entry.is_object()) throw Error(ErrorCode::ConfigError, "source entries must be objects");
    SourceConfig s;
    s.name = entry.value("name", "");
    if (s.name.empty() || s.name.find('/') != std::string::npos) {
      throw Error(ErrorCode::ConfigError, "source name must be non-empty and contain no '/'");
    }
    if (!names.insert(s.name).second) throw Error(ErrorCode::ConfigError, "duplicate source " + s.name);
    std::string kind = entry.value("kind", "");
    if (kind == "pangaea") {
      s.kind = SourceKind::Pangaea;
    } else if (kind == "stac") {
      s.kind = SourceKind::Stac;
    } else if (kind == "publication" || kind == "publications") {
      s.kind = SourceKind::Publication;
    } else {
      throw Error(ErrorCode::ConfigError, "source " + s.name + ": unknown kind '" + kind + "'");
    }
    s.endpoint = entry.value("endpoint", "");
    s.organization = entry.value("organization", s.kind == SourceKind::Stac ? kStacOrganization
                                                 : s.kind == SourceKind::Pangaea ? kPangaeaOrganization
                                                                                 : "");
    auto limit = entry.value("limit", int64_t{100});
    if (limit < 1) throw Error(ErrorCode::ConfigError, "source " + s.name + ": limit must be >= 1");
    s.limit = static_cast<size_t>(limit);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SourceConfig> load_sources(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot read sources config " + path.string());
  Attrs config = Attrs::parse(f, nullptr, false);
  if (config.is_discarded()) throw Error(ErrorCode::ConfigError, "sources config is not valid JSON: " + path.string());
  try {
    return parse_sources(config);
  } catch (const Attrs::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
}

IngestBatch parse_documents(const SourceConfig& source, const std::vector<std::pair<std::string, Attrs>>& docs) {
  IngestBatch batch;
  for (const auto& [name, raw] : docs) {
    try {
      if (raw.is_discarded()) parse_error("document is not valid JSON");
      switch (source.kind) {
        case SourceKind::Pangaea: {
          auto d = parse_pangaea_record(raw);
          if (!source.organization.empty() && !raw.contains("organization")) d.organization = source.organization;
          batch.datasets.push_back(std::move(d));
          break;
        }
        case SourceKind::Stac:
          batch.datasets.push_back(parse_stac_collection(raw, source.organization));
          break;
        case SourceKind::Publication:
          batch.publications.push_back(parse_publication_record(raw));
          break;
      }
    } catch (const Error& e) {
      batch.rejections.push_back({name, e.what()});
    } catch (const Attrs::exception& e) {
      batch.rejections.push_back({name, std::string("ParseError: ") + e.what()});
    }
  }
  return batch;
}

std::vector<std::pair<std::string, Attrs>> read_document_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::IoError, "not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, Attrs>> out;
  for (const auto& file : files) {
    std::ifstream f(file, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot read " + file.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    out.emplace_back(file.filename().string(), Attrs::parse(buf.str(), nullptr, false));
  }
  return out;
}

}  // namespace vesa
