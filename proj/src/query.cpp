#include "vesa/query.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "vesa/ingestion.hpp"
#include "vesa/text.hpp"

namespace vesa {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

const std::set<std::string, std::less<>> kSelectionKeys = {"keywords", "time_range", "spatial_box", "authors",
                                                           "sources"};
const std::set<std::string, std::less<>> kViewKeys = {"histogram_bin", "abstract_for", "list_offset",
                                                      "list_limit"};

std::vector<std::string> string_array(const Attrs& body, const char* field) {
  std::vector<std::string> out;
  auto it = body.find(field);
  if (it == body.end() || it->is_null()) return out;
  if (!it->is_array()) invalid(std::string("'") + field + "' must be a list of strings");
  for (const auto& v : *it) {
    if (!v.is_string()) invalid(std::string("'") + field + "' must be a list of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

Instant instant_field(const Attrs& obj, const char* field, const char* context) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_string()) invalid(std::string(context) + "." + field + " must be a timestamp");
  auto t = parse_timestamp(it->get<std::string>());
  if (!t) invalid(std::string(context) + "." + field + " is not RFC 3339: " + it->get<std::string>());
  return *t;
}

double number_field(const Attrs& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_number()) invalid(std::string("spatial_box.") + field + " must be a number");
  return it->get<double>();
}

bool lon_in(double lon, double west, double east) {
  return west <= east ? (lon >= west && lon <= east) : (lon >= west || lon <= east);
}

// Splits a possibly wrapping longitude range into non-wrapping pieces.
std::vector<std::pair<double, double>> lon_pieces(double west, double east) {
  if (west <= east) return {{west, east}};
  return {{west, 180.0}, {-180.0, east}};
}

int64_t bin_index(Instant t, HistogramBin bin) {
  using namespace std::chrono;
  auto day_point = floor<days>(t);
  switch (bin) {
    case HistogramBin::Day:
      return day_point.time_since_epoch().count();
    case HistogramBin::Month: {
      year_month_day ymd{day_point};
      return static_cast<int64_t>(static_cast<int>(ymd.year())) * 12 + static_cast<unsigned>(ymd.month()) - 1;
    }
    case HistogramBin::Year:
      return static_cast<int>(year_month_day{day_point}.year());
  }
  return 0;
}

Instant bin_start(int64_t index, HistogramBin bin) {
  using namespace std::chrono;
  switch (bin) {
    case HistogramBin::Day:
      return Instant{sys_days{days{index}}};
    case HistogramBin::Month: {
      auto y = static_cast<int>(index >= 0 ? index / 12 : (index - 11) / 12);
      auto m = static_cast<unsigned>(index - static_cast<int64_t>(y) * 12 + 1);
      return Instant{sys_days{year{y} / month{m} / 1}};
    }
    case HistogramBin::Year:
      return Instant{sys_days{year{static_cast<int>(index)} / January / 1}};
  }
  return Instant{};
}

}  // namespace

void SelectionState::validate() const {
  if (time_range && time_range->start > time_range->end) invalid("time_range start is after end");
  if (spatial_box) {
    const auto& b = *spatial_box;
    auto lat_ok = [](double v) { return std::isfinite(v) && v >= -90 && v <= 90; };
    auto lon_ok = [](double v) { return std::isfinite(v) && v >= -180 && v <= 180; };
    if (!lat_ok(b.south) || !lat_ok(b.north)) invalid("spatial_box latitude out of range");
    if (!lon_ok(b.west) || !lon_ok(b.east)) invalid("spatial_box longitude out of range");
    if (b.south > b.north) invalid("spatial_box south exceeds north");
  }
}

SelectionState SelectionState::from_json(const Attrs& body) {
  if (!body.is_object()) invalid("selection must be a JSON object");
  for (const auto& [key, _] : body.items()) {
    if (!kSelectionKeys.count(key) && !kViewKeys.count(key)) invalid("unknown selection field '" + key + "'");
  }
  SelectionState s;
  s.keywords = string_array(body, "keywords");
  for (auto& k : s.keywords) {
    k = normalize_term(k);
    if (k.empty()) invalid("empty keyword in selection");
  }
  if (auto it = body.find("time_range"); it != body.end() && !it->is_null()) {
    if (!it->is_object()) invalid("time_range must be an object");
    s.time_range = TimeRange{instant_field(*it, "start", "time_range"), instant_field(*it, "end", "time_range")};
  }
  if (auto it = body.find("spatial_box"); it != body.end() && !it->is_null()) {
    if (!it->is_object()) invalid("spatial_box must be an object");
    s.spatial_box = SpatialBox{number_field(*it, "west"), number_field(*it, "south"), number_field(*it, "east"),
                               number_field(*it, "north")};
  }
  for (const auto& a : string_array(body, "authors")) {
    auto id = NodeId::try_parse(a);
    if (!id || id->kind() != NodeKind::Author) invalid("'" + a + "' is not an Author id");
    s.authors.push_back(*id);
  }
  s.sources = string_array(body, "sources");
  s.validate();
  return s;
}

Attrs SelectionState::to_json() const {
  Attrs j = Attrs::object();
  if (!keywords.empty()) j["keywords"] = keywords;
  if (time_range) {
    j["time_range"] = {{"start", format_timestamp(time_range->start)}, {"end", format_timestamp(time_range->end)}};
  }
  if (spatial_box) {
    j["spatial_box"] = {{"west", spatial_box->west},
                        {"south", spatial_box->south},
                        {"east", spatial_box->east},
                        {"north", spatial_box->north}};
  }
  if (!authors.empty()) {
    j["authors"] = Attrs::array();
    for (const auto& a : authors) j["authors"].push_back(a.str());
  }
  if (!sources.empty()) j["sources"] = sources;
  return j;
}

std::optional<HistogramBin> histogram_bin_from_string(std::string_view name) noexcept {
  if (name == "day") return HistogramBin::Day;
  if (name == "month") return HistogramBin::Month;
  if (name == "year") return HistogramBin::Year;
  return std::nullopt;
}

std::string_view to_string(HistogramBin bin) noexcept {
  switch (bin) {
    case HistogramBin::Day: return "day";
    case HistogramBin::Month: return "month";
    case HistogramBin::Year: return "year";
  }
  return "";
}

ViewOptions ViewOptions::from_json(const Attrs& body) {
  ViewOptions v;
  if (!body.is_object()) return v;
  if (auto it = body.find("histogram_bin"); it != body.end() && !it->is_null()) {
    auto bin = it->is_string() ? histogram_bin_from_string(it->get<std::string>()) : std::nullopt;
    if (!bin) invalid("histogram_bin must be one of day, month, year");
    v.bin = *bin;
  }
  if (auto it = body.find("abstract_for"); it != body.end() && !it->is_null()) {
    auto id = it->is_string() ? NodeId::try_parse(it->get<std::string>()) : std::nullopt;
    if (!id) invalid("abstract_for must be a node id");
    v.abstract_for = *id;
  }
  if (auto it = body.find("list_offset"); it != body.end() && !it->is_null()) {
    if (!it->is_number_unsigned()) invalid("list_offset must be a non-negative integer");
    v.list_offset = it->get<size_t>();
  }
  if (auto it = body.find("list_limit"); it != body.end() && !it->is_null()) {
    if (!it->is_number_unsigned()) invalid("list_limit must be a non-negative integer");
    v.list_limit = it->get<size_t>();
  }
  return v;
}

QueryEngine::QueryEngine(std::shared_ptr<const GraphStore> store, QueryOptions options)
    : store_(std::move(store)), options_(std::move(options)) {
  if (!store_ || !store_->frozen()) throw Error(ErrorCode::BuildPhaseError, "query engine needs a frozen store");
  if (options_.cloud_k == 0) throw Error(ErrorCode::InvalidArgument, "cloud size k must be >= 1");
  const GraphStore& g = *store_;

  for (const auto& id : g.dataset_ids()) {
    dataset_index_.emplace(id, static_cast<uint32_t>(datasets_.size()));
    DatasetEntry e;
    e.id = id;
    const GraphNode& node = g.node(id);
    NormalizedDataset d = dataset_from_node(node);
    const auto& corpora = g.adjacent(id, EdgeKind::BelongsToCorpus, Direction::Out);
    if (!corpora.empty()) e.corpus = std::string(corpora.begin()->key());
    e.organization = d.organization;
    e.title = d.title;
    e.doi = d.doi;
    for (const auto& a : d.authors) e.author_names.push_back(a.name);
    e.coverage = temporal_bounds(node.attrs);
    if (d.location) {
      e.located = true;
      e.lat = d.location->display_latitude();
      e.lon = d.location->display_longitude();
      e.bbox = {d.location->west_bound_longitude, d.location->south_bound_latitude,
                d.location->east_bound_longitude, d.location->north_bound_latitude};
    }
    datasets_.push_back(std::move(e));
  }

  for (const auto& author : g.nodes_of_kind(NodeKind::Author)) {
    auto idx = static_cast<uint32_t>(authors_.size());
    authors_.push_back(author);
    author_names_.push_back(g.node(author).attrs.value("name", std::string(author.key())));
    author_index_.emplace(author, idx);
    auto& posting = author_postings_.emplace_back();
    for (const auto& holder : g.adjacent(author, EdgeKind::HasAuthor, Direction::In)) {
      auto it = dataset_index_.find(holder);
      if (it == dataset_index_.end()) continue;
      posting.push_back(it->second);
      datasets_[it->second].authors.push_back(idx);
    }
  }

  for (const auto& [term, keyword] : g.indexes().keyword_terms) {
    auto idx = static_cast<uint32_t>(keyword_terms_.size());
    keyword_terms_.push_back(term);
    keyword_index_.emplace(term, idx);
    auto& posting = keyword_postings_.emplace_back();
    for (const auto& holder : g.adjacent(keyword, EdgeKind::HasKeyword, Direction::In)) {
      auto it = dataset_index_.find(holder);
      if (it == dataset_index_.end()) continue;
      posting.push_back(it->second);
      datasets_[it->second].keywords.push_back(idx);
    }
  }

  by_title_.resize(datasets_.size());
  std::iota(by_title_.begin(), by_title_.end(), 0u);
  std::stable_sort(by_title_.begin(), by_title_.end(),
                   [this](uint32_t a, uint32_t b) { return datasets_[a].title < datasets_[b].title; });

  for (const auto& e : datasets_) {
    if (!e.coverage) continue;
    Instant lo = e.coverage->first, hi = e.coverage->second;
    // Open bounds do not stretch the axis.
    if (lo == Instant::min()) lo = hi;
    if (hi == Instant::max()) hi = lo;
    if (!time_axis_) {
      time_axis_ = std::pair{lo, hi};
    } else {
      time_axis_->first = std::min(time_axis_->first, lo);
      time_axis_->second = std::max(time_axis_->second, hi);
    }
  }

  if (!datasets_.empty()) {
    scores_ = compute_tfidf(g, options_.tokenizer);
    global_cloud_ = select_cloud_keywords(scores_, options_.cloud_k);
    global_cloud_members_ = cloud_members(global_cloud_);
  }
}

std::vector<std::vector<uint32_t>> QueryEngine::cloud_members(const std::vector<KeywordScore>& cloud) const {
  std::vector<std::vector<uint32_t>> out;
  out.reserve(cloud.size());
  for (const auto& s : cloud) {
    auto& members = out.emplace_back();
    for (const auto& id : s.dataset_ids) {
      if (auto it = dataset_index_.find(id); it != dataset_index_.end()) members.push_back(it->second);
    }
  }
  return out;
}

bool QueryEngine::matches_space(const DatasetEntry& d, const SpatialBox& box) const {
  if (!d.located) return false;
  if (!options_.bbox_intersection) {
    return d.lat >= box.south && d.lat <= box.north && lon_in(d.lon, box.west, box.east);
  }
  if (d.bbox.south > box.north || d.bbox.north < box.south) return false;
  for (auto [a0, a1] : lon_pieces(d.bbox.west, d.bbox.east)) {
    for (auto [b0, b1] : lon_pieces(box.west, box.east)) {
      if (a0 <= b1 && b0 <= a1) return true;
    }
  }
  return false;
}

void QueryEngine::apply(Dimension dim, const SelectionState& s, const std::vector<uint32_t>& keyword_ids,
                        const std::vector<uint32_t>& author_ids, Candidates& candidates) const {
  auto keep_if = [&](auto&& pred) {
    candidates.erase(std::remove_if(candidates.begin(), candidates.end(),
                                    [&](uint32_t i) { return !pred(datasets_[i]); }),
                     candidates.end());
  };
  switch (dim) {
    case Dimension::Keywords:
      for (uint32_t k : keyword_ids) {
        const auto& posting = keyword_postings_[k];
        Candidates next;
        std::set_intersection(candidates.begin(), candidates.end(), posting.begin(), posting.end(),
                              std::back_inserter(next));
        candidates = std::move(next);
      }
      break;
    case Dimension::Authors: {
      if (author_ids.empty()) break;
      Candidates any;
      for (uint32_t a : author_ids) any.insert(any.end(), author_postings_[a].begin(), author_postings_[a].end());
      std::sort(any.begin(), any.end());
      any.erase(std::unique(any.begin(), any.end()), any.end());
      Candidates next;
      std::set_intersection(candidates.begin(), candidates.end(), any.begin(), any.end(), std::back_inserter(next));
      candidates = std::move(next);
      break;
    }
    case Dimension::Sources:
      if (s.sources.empty()) break;
      keep_if([&](const DatasetEntry& d) {
        return std::find(s.sources.begin(), s.sources.end(), d.corpus) != s.sources.end();
      });
      break;
    case Dimension::Time:
      if (!s.time_range) break;
      keep_if([&](const DatasetEntry& d) {
        return d.coverage && d.coverage->first <= s.time_range->end && d.coverage->second >= s.time_range->start;
      });
      break;
    case Dimension::Space:
      if (!s.spatial_box) break;
      keep_if([&](const DatasetEntry& d) { return matches_space(d, *s.spatial_box); });
      break;
  }
}

FilterResult QueryEngine::evaluate(const SelectionState& selection) const {
  return evaluate(selection, kDefaultDimensionOrder);
}

FilterResult QueryEngine::evaluate(const SelectionState& selection, std::span<const Dimension, 5> order) const {
  selection.validate();
  std::vector<uint32_t> keyword_ids;
  for (const auto& k : selection.keywords) {
    auto it = keyword_index_.find(normalize_term(k));
    if (it == keyword_index_.end()) throw Error(ErrorCode::UnknownKeyword, k);
    keyword_ids.push_back(it->second);
  }
  std::vector<uint32_t> author_ids;
  for (const auto& a : selection.authors) {
    auto it = author_index_.find(a);
    if (it == author_index_.end()) throw Error(ErrorCode::UnknownAuthor, a.str());
    author_ids.push_back(it->second);
  }
  // Smallest posting first keeps the intersections short.
  std::sort(keyword_ids.begin(), keyword_ids.end(), [this](uint32_t a, uint32_t b) {
    return keyword_postings_[a].size() < keyword_postings_[b].size();
  });

  Candidates candidates(datasets_.size());
  std::iota(candidates.begin(), candidates.end(), 0u);
  for (Dimension dim : order) apply(dim, selection, keyword_ids, author_ids, candidates);

  FilterResult result;
  result.total = candidates.size();
  result.dataset_ids.reserve(candidates.size());
  for (uint32_t i : candidates) {
    result.dataset_ids.push_back(datasets_[i].id);
    ++result.per_source[datasets_[i].corpus];
  }
  return result;
}

std::vector<uint32_t> QueryEngine::indexes_of(const FilterResult& result) const {
  std::vector<uint32_t> out;
  out.reserve(result.dataset_ids.size());
  for (const auto& id : result.dataset_ids) {
    auto it = dataset_index_.find(id);
    if (it != dataset_index_.end()) out.push_back(it->second);
  }
  return out;
}

Histogram QueryEngine::temporal_histogram(const FilterResult& result, HistogramBin bin) const {
  Histogram h;
  h.bin = bin;
  auto members = indexes_of(result);
  if (!time_axis_) {
    h.undated = members.size();
    return h;
  }
  const int64_t first = bin_index(time_axis_->first, bin);
  const int64_t last = bin_index(time_axis_->second, bin);
  const auto width = static_cast<size_t>(last - first + 1);
  std::vector<int64_t> delta(width + 1, 0);
  for (uint32_t i : members) {
    const auto& cov = datasets_[i].coverage;
    if (!cov) {
      ++h.undated;
      continue;
    }
    int64_t lo = cov->first == Instant::min() ? first : std::max(first, bin_index(cov->first, bin));
    int64_t hi = cov->second == Instant::max() ? last : std::min(last, bin_index(cov->second, bin));
    if (lo > hi) continue;
    ++delta[static_cast<size_t>(lo - first)];
    --delta[static_cast<size_t>(hi - first + 1)];
  }
  h.buckets.reserve(width);
  int64_t running = 0;
  for (size_t j = 0; j < width; ++j) {
    running += delta[j];
    auto index = first + static_cast<int64_t>(j);
    h.buckets.push_back({bin_start(index, bin), bin_start(index + 1, bin), static_cast<size_t>(running)});
  }
  return h;
}

std::vector<MapPoint> QueryEngine::map_points(const FilterResult& result) const {
  std::vector<MapPoint> out;
  for (uint32_t i : indexes_of(result)) {
    const auto& d = datasets_[i];
    if (d.located) out.push_back({d.id, d.lat, d.lon, d.organization});
  }
  return out;
}

ChordPayload QueryEngine::coauthor_matrix(const FilterResult& result) const {
  auto members = indexes_of(result);
  std::vector<uint32_t> involved;
  for (uint32_t i : members) involved.insert(involved.end(), datasets_[i].authors.begin(), datasets_[i].authors.end());
  std::sort(involved.begin(), involved.end());
  involved.erase(std::unique(involved.begin(), involved.end()), involved.end());
  std::sort(involved.begin(), involved.end(), [this](uint32_t a, uint32_t b) {
    if (author_names_[a] != author_names_[b]) return author_names_[a] < author_names_[b];
    return authors_[a] < authors_[b];
  });

  std::unordered_map<uint32_t, size_t> position;
  ChordPayload chord;
  for (uint32_t a : involved) {
    position.emplace(a, chord.authors.size());
    chord.authors.push_back(authors_[a]);
    chord.names.push_back(author_names_[a]);
  }
  chord.matrix.assign(involved.size(), std::vector<size_t>(involved.size(), 0));
  for (uint32_t i : members) {
    const auto& as = datasets_[i].authors;
    for (size_t x = 0; x < as.size(); ++x) {
      for (size_t y = x + 1; y < as.size(); ++y) {
        size_t p = position.at(as[x]), q = position.at(as[y]);
        ++chord.matrix[p][q];
        ++chord.matrix[q][p];
      }
    }
  }
  return chord;
}

std::vector<CloudEntry> QueryEngine::keyword_cloud(const FilterResult& result, const SelectionState& selection,
                                                   size_t k) const {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "cloud size k must be >= 1");
  auto members = indexes_of(result);
  std::vector<CloudEntry> out;
  if (members.empty()) return out;

  if (selection.keywords.empty()) {
    std::vector<char> in_result(datasets_.size(), 0);
    for (uint32_t i : members) in_result[i] = 1;
    std::vector<KeywordScore> custom;
    std::vector<std::vector<uint32_t>> custom_members;
    if (k != options_.cloud_k) {
      custom = select_cloud_keywords(scores_, k);
      custom_members = cloud_members(custom);
    }
    const auto& top = k == options_.cloud_k ? global_cloud_ : custom;
    const auto& top_members = k == options_.cloud_k ? global_cloud_members_ : custom_members;
    for (size_t t = 0; t < top.size(); ++t) {
      size_t weight = 0;
      for (uint32_t i : top_members[t]) weight += in_result[i];
      if (weight > 0) out.push_back({top[t].term, weight, false});
    }
    return out;
  }

  // Every filtered dataset carries all selected keywords, so the keywords
  // seen on the filtered set are exactly the intersection of the selected
  // terms' related sets restricted to that set.
  std::set<uint32_t> selected;
  for (const auto& term : selection.keywords) {
    auto it = keyword_index_.find(normalize_term(term));
    if (it != keyword_index_.end()) selected.insert(it->second);
  }
  std::unordered_map<uint32_t, size_t> weights;
  for (uint32_t i : members) {
    for (uint32_t kw : datasets_[i].keywords) {
      if (!selected.count(kw)) ++weights[kw];
    }
  }
  for (const auto& [kw, w] : weights) out.push_back({keyword_terms_[kw], w, true});
  std::sort(out.begin(), out.end(), [](const CloudEntry& a, const CloudEntry& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.term < b.term;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

ListPayload QueryEngine::dataset_list(const FilterResult& result, std::optional<NodeId> abstract_for,
                                      size_t offset, std::optional<size_t> limit) const {
  ListPayload list;
  if (abstract_for) {
    const GraphNode* node = store_->find_node(*abstract_for);
    if (!node || !is_dataset_kind(node->kind)) throw Error(ErrorCode::UnknownDataset, abstract_for->str());
    list.abstract_id = abstract_for;
    list.abstract = node->attrs.value("abstract", "");
  }
  std::vector<char> in_result(datasets_.size(), 0);
  for (uint32_t i : indexes_of(result)) in_result[i] = 1;
  size_t seen = 0;
  for (uint32_t i : by_title_) {
    if (!in_result[i]) continue;
    ++list.total;
    if (seen++ < offset) continue;
    if (limit && list.rows.size() >= *limit) continue;
    const auto& d = datasets_[i];
    list.rows.push_back({d.id, d.title, d.author_names, d.doi, d.organization});
  }
  return list;
}

VisualizationPayloads QueryEngine::payloads(const FilterResult& result, const SelectionState& selection,
                                            const ViewOptions& view) const {
  VisualizationPayloads p;
  p.cloud = keyword_cloud(result, selection, options_.cloud_k);
  p.map_points = map_points(result);
  p.histogram = temporal_histogram(result, view.bin);
  p.chord = coauthor_matrix(result);
  p.list = dataset_list(result, view.abstract_for, view.list_offset, view.list_limit);
  return p;
}

}  // namespace vesa
