#include "vesa/wire.hpp"

namespace vesa::wire {

Attrs dataset_record(const GraphNode& dataset) {
  const Attrs& a = dataset.attrs;
  Attrs r = {{"id", dataset.id.str()}};
  if (auto loc = a.find("location"); loc != a.end()) r["location_data"] = *loc;
  if (auto doi = a.value("doi", ""); !doi.empty()) r["doi"] = doi;
  if (auto it = a.find("publication_date"); it != a.end()) r["dataset_publication_date"] = *it;
  if (auto tc = a.find("temporal_coverage"); tc != a.end()) {
    Attrs cov = Attrs::object();
    if (auto s = tc->find("start"); s != tc->end()) cov["start_date"] = *s;
    if (auto e = tc->find("end"); e != tc->end()) cov["end_date"] = *e;
    r["temporal_coverage"] = cov;
  }
  r["authors"] = Attrs::array();
  if (auto authors = a.find("authors"); authors != a.end()) {
    for (const auto& author : *authors) r["authors"].push_back(author.value("name", ""));
  }
  r["dataset_title"] = a.value("title", "");
  r["organization"] = a.value("organization", "");
  return r;
}

Attrs keyword_entry(const KeywordScore& s) {
  Attrs ids = Attrs::array();
  for (const auto& id : s.dataset_ids) ids.push_back(id.str());
  return {{"keyword", s.term}, {"score", s.score}, {"document_frequency", s.document_frequency}, {"dataset_ids", ids}};
}

Attrs related_entry(const RelatedKeyword& r) { return {{"keyword", r.term}, {"co_count", r.co_count}}; }

Attrs to_json(const FilterResult& result) {
  Attrs ids = Attrs::array();
  for (const auto& id : result.dataset_ids) ids.push_back(id.str());
  return {{"dataset_ids", ids}, {"total", result.total}, {"per_source", result.per_source}};
}

Attrs to_json(const MapPoint& p) {
  return {{"dataset_id", p.dataset_id.str()}, {"lat", p.lat}, {"lon", p.lon}, {"source", p.source}};
}

Attrs to_json(const std::vector<MapPoint>& points) {
  Attrs out = Attrs::array();
  for (const auto& p : points) out.push_back(to_json(p));
  return out;
}

Attrs to_json(const Histogram& h) {
  Attrs bins = Attrs::array();
  for (const auto& b : h.buckets) {
    bins.push_back({{"bin_start", format_timestamp(b.bin_start)}, {"bin_end", format_timestamp(b.bin_end)},
                    {"count", b.count}});
  }
  return {{"bin", to_string(h.bin)}, {"bins", bins}, {"undated", h.undated}};
}

Attrs to_json(const ChordPayload& chord) {
  Attrs authors = Attrs::array();
  for (size_t i = 0; i < chord.authors.size(); ++i) {
    authors.push_back({{"id", chord.authors[i].str()}, {"name", chord.names[i]}});
  }
  return {{"authors", authors}, {"matrix", chord.matrix}};
}

Attrs to_json(const std::vector<CloudEntry>& cloud) {
  Attrs out = Attrs::array();
  for (const auto& c : cloud) out.push_back({{"term", c.term}, {"weight", c.weight}, {"related", c.related}});
  return out;
}

Attrs to_json(const ListPayload& list) {
  Attrs rows = Attrs::array();
  for (const auto& r : list.rows) {
    rows.push_back({{"dataset_id", r.dataset_id.str()},
                    {"title", r.title},
                    {"authors", r.authors},
                    {"doi", r.doi},
                    {"source", r.source}});
  }
  Attrs out = {{"rows", rows}, {"total", list.total}};
  if (list.abstract_id) out["abstract"] = {{"id", list.abstract_id->str()}, {"abstract", *list.abstract}};
  return out;
}

Attrs to_json(const VisualizationPayloads& p) {
  return {{"cloud", to_json(p.cloud)},
          {"map_points", to_json(p.map_points)},
          {"histogram", to_json(p.histogram)},
          {"chord", to_json(p.chord)},
          {"list_rows", to_json(p.list)}};
}

}  // namespace vesa::wire
