#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vesa::testing {
namespace {

// Outgoing edges grouped by (source, kind), from one scan of the edge set.
class OutEdges {
 public:
  explicit OutEdges(const GraphStore& store) {
    for (const auto& [id, e] : store.edges()) out_[{e.from, e.kind}].push_back(e.to);
  }
  const std::vector<NodeId>& operator()(const NodeId& from, EdgeKind kind) const {
    static const std::vector<NodeId> none;
    auto it = out_.find({from, kind});
    return it == out_.end() ? none : it->second;
  }

 private:
  std::map<std::pair<NodeId, EdgeKind>, std::vector<NodeId>> out_;
};

std::string lower(std::string s) {
  for (auto& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

struct Point {
  double lat, lon;
};

std::optional<Point> display_point(const Attrs& attrs) {
  if (!attrs.contains("location")) return std::nullopt;
  const Attrs& l = attrs["location"];
  double w = l["west_bound_longitude"], e = l["east_bound_longitude"];
  double s = l["south_bound_latitude"], n = l["north_bound_latitude"];
  Point p{(s + n) / 2, 0};
  if (l.contains("mean_latitude")) p.lat = l["mean_latitude"];
  if (l.contains("mean_longitude")) {
    p.lon = l["mean_longitude"];
  } else if (w <= e) {
    p.lon = (w + e) / 2;
  } else {
    // Box over the antimeridian: go east from w by half the wrapped width.
    double width = (e + 360) - w;
    p.lon = w + width / 2;
    if (p.lon > 180) p.lon -= 360;
  }
  return p;
}

bool lon_within(double lon, double west, double east) {
  return west <= east ? (west <= lon && lon <= east) : (lon >= west || lon <= east);
}

}  // namespace

std::map<std::string, OracleScore> oracle_tfidf(const std::vector<std::vector<std::string>>& documents) {
  std::map<std::string, OracleScore> out;
  const double n = static_cast<double>(documents.size());
  std::set<std::string> vocabulary;
  for (const auto& d : documents) vocabulary.insert(d.begin(), d.end());
  for (const auto& term : vocabulary) {
    size_t df = 0;
    size_t max_tf = 0;
    for (const auto& d : documents) {
      size_t tf = static_cast<size_t>(std::count(d.begin(), d.end(), term));
      if (tf > 0) ++df;
      max_tf = std::max(max_tf, tf);
    }
    out[term] = OracleScore{static_cast<double>(max_tf) * std::log(n / static_cast<double>(df)), df};
  }
  return out;
}

std::vector<NodeId> oracle_filter(const GraphStore& store, const SelectionState& sel) {
  std::vector<NodeId> out;
  const OutEdges targets(store);
  const Instant lo = Instant::min(), hi = Instant::max();
  for (const auto& [id, node] : store.nodes()) {
    if (node.kind != NodeKind::Dataset && node.kind != NodeKind::STACCollection) continue;

    std::set<std::string> terms;
    for (const auto& k : targets(id, EdgeKind::HasKeyword)) terms.insert(store.node(k).attrs["term"]);
    bool ok = std::all_of(sel.keywords.begin(), sel.keywords.end(),
                          [&](const std::string& k) { return terms.count(lower(k)) > 0; });

    if (ok && !sel.authors.empty()) {
      const auto& mine = targets(id, EdgeKind::HasAuthor);
      ok = std::any_of(sel.authors.begin(), sel.authors.end(), [&](const NodeId& a) {
        return std::find(mine.begin(), mine.end(), a) != mine.end();
      });
    }
    if (ok && !sel.sources.empty()) {
      const auto& corpora = targets(id, EdgeKind::BelongsToCorpus);
      ok = std::any_of(corpora.begin(), corpora.end(), [&](const NodeId& c) {
        std::string name = store.node(c).attrs["name"];
        return std::find(sel.sources.begin(), sel.sources.end(), name) != sel.sources.end();
      });
    }
    if (ok && sel.time_range) {
      const Attrs& a = node.attrs;
      if (!a.contains("temporal_coverage") || a["temporal_coverage"].empty()) {
        ok = false;
      } else {
        const Attrs& tc = a["temporal_coverage"];
        Instant s = tc.contains("start") ? *parse_timestamp(tc["start"].get<std::string>()) : lo;
        Instant e = tc.contains("end") ? *parse_timestamp(tc["end"].get<std::string>()) : hi;
        ok = s <= sel.time_range->end && sel.time_range->start <= e;
      }
    }
    if (ok && sel.spatial_box) {
      auto p = display_point(node.attrs);
      const auto& b = *sel.spatial_box;
      ok = p && p->lat >= b.south && p->lat <= b.north && lon_within(p->lon, b.west, b.east);
    }
    if (ok) out.push_back(id);
  }
  return out;
}

std::map<std::string, size_t> oracle_cooccurrence(const GraphStore& store, const std::string& term) {
  std::map<std::string, size_t> out;
  const OutEdges targets(store);
  for (const auto& id : store.dataset_ids()) {
    std::set<std::string> terms;
    for (const auto& k : targets(id, EdgeKind::HasKeyword)) terms.insert(store.node(k).attrs["term"]);
    if (!terms.count(term)) continue;
    for (const auto& t : terms) {
      if (t != term) ++out[t];
    }
  }
  return out;
}

std::map<std::pair<NodeId, NodeId>, size_t> oracle_coauthorship(const GraphStore& store,
                                                                const std::vector<NodeId>& datasets) {
  std::map<std::pair<NodeId, NodeId>, size_t> out;
  const OutEdges targets(store);
  for (const auto& d : datasets) {
    const auto& authors = targets(d, EdgeKind::HasAuthor);
    for (const auto& a : authors) {
      for (const auto& b : authors) {
        if (a != b) ++out[{a, b}];
      }
    }
  }
  return out;
}

std::set<NodeId> oracle_keyword_reach(const GraphStore& store, const NodeId& dataset) {
  std::set<NodeId> keywords, out;
  for (const auto& [id, e] : store.edges()) {
    if (e.kind == EdgeKind::HasKeyword && e.from == dataset) keywords.insert(e.to);
  }
  for (const auto& [id, e] : store.edges()) {
    if (e.kind == EdgeKind::HasKeyword && keywords.count(e.to)) out.insert(e.from);
  }
  return out;
}

}  // namespace vesa::testing
