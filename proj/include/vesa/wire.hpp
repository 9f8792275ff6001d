#pragma once

#include <string>
#include <vector>

#include "vesa/graph.hpp"
#include "vesa/query.hpp"
#include "vesa/semantics.hpp"

namespace vesa::wire {

/// One /main/all record: id, location_data, doi, dataset_publication_date,
/// temporal_coverage {start_date, end_date}, authors (names),
/// dataset_title, organization. Absent optional fields are omitted;
/// timestamps are echoed as harvested.
Attrs dataset_record(const GraphNode& dataset);

Attrs keyword_entry(const KeywordScore& score);
Attrs related_entry(const RelatedKeyword& related);

Attrs to_json(const FilterResult& result);
Attrs to_json(const MapPoint& point);
Attrs to_json(const std::vector<MapPoint>& points);
Attrs to_json(const Histogram& histogram);
Attrs to_json(const ChordPayload& chord);
Attrs to_json(const std::vector<CloudEntry>& cloud);
Attrs to_json(const ListPayload& list);
Attrs to_json(const VisualizationPayloads& payloads);

}  // namespace vesa::wire
