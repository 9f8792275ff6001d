#include "vesa/build.hpp"

namespace vesa {

Attrs BuildReport::to_json() const {
  Attrs rejections = Attrs::array();
  for (const auto& r : ingest.rejections) rejections.push_back({{"source_key", r.source_key}, {"reason", r.reason}});
  Attrs shared = Attrs::array();
  for (const auto& s : shared_keywords) shared.push_back({{"term", s.term}, {"corpora", s.corpora}});
  return {{"records_seen", records_seen},
          {"corpora_added", ingest.corpora_added},
          {"datasets_added", ingest.datasets_added},
          {"collections_added", ingest.collections_added},
          {"publications_added", ingest.publications_added},
          {"authors_added", ingest.authors_added},
          {"keywords_added", ingest.keywords_added},
          {"edges_added", ingest.edges_added},
          {"records_rejected", ingest.records_rejected},
          {"rejections", rejections},
          {"mediated_keyword_edges", mediated_keyword_edges},
          {"mission_edges", mission_edges},
          {"extracted_keywords_added", extracted.keywords_added},
          {"extracted_edges_added", extracted.edges_added},
          {"shared_keywords", shared},
          {"total_nodes", nodes_added()},
          {"total_edges", edges_added()}};
}

BuildResult build_graph(const std::vector<SourceDocuments>& sources, const BuildOptions& options) {
  BuildResult result;
  GraphStore& store = result.store;
  BuildReport& report = result.report;

  std::vector<IngestBatch> publication_batches;
  for (const auto& [source, docs] : sources) {
    report.records_seen += docs.size();
    IngestBatch batch = parse_documents(source, docs);
    if (source.kind == SourceKind::Publication) {
      publication_batches.push_back(std::move(batch));
      continue;
    }
    report.ingest += ingest(store, batch, source.name);
  }
  for (const auto& batch : publication_batches) report.ingest += ingest(store, batch, "");

  if (report.records_seen > 0) {
    double fraction = static_cast<double>(report.ingest.records_rejected) / static_cast<double>(report.records_seen);
    if (fraction > options.max_reject_fraction) {
      throw Error(ErrorCode::ParseError, std::to_string(report.ingest.records_rejected) + " of " +
                                             std::to_string(report.records_seen) +
                                             " records rejected, above the allowed fraction");
    }
  }

  size_t before = store.edge_count();
  report.mediated_keyword_edges = mediate_stac_keywords(store);
  report.mission_edges = store.edge_count() - before - report.mediated_keyword_edges;

  if (!store.dataset_ids().empty()) {
    report.extracted = attach_extracted_keywords(store, compute_tfidf(store, options.tokenizer));
  }
  report.shared_keywords = link_common_keywords(store);
  store.freeze();
  return result;
}

BuildResult build_graph(const std::vector<SourceConfig>& sources, const std::filesystem::path& fixtures,
                        const BuildOptions& options) {
  std::vector<SourceDocuments> docs;
  for (const auto& source : sources) docs.emplace_back(source, read_document_dir(fixtures / source.name));
  return build_graph(docs, options);
}

}  // namespace vesa
