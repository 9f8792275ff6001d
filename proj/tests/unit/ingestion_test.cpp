#include <gtest/gtest.h>

#include <random>
#include <set>

#include "synthetic.hpp"
#include "vesa/ingestion.hpp"
#include "vesa/text.hpp"

namespace vesa {
namespace {

const std::filesystem::path kFixtures = VESA_TEST_FIXTURES;
const std::filesystem::path kForaminifera = std::filesystem::path(VESA_DATA_DIR) / "golden/foraminifera/fixtures/pangaea";

Attrs foraminifera_raw() { return read_document_dir(kForaminifera).at(0).second; }

Instant at(const char* text) { return *parse_timestamp(text); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

TEST(ParsePangaea, ForaminiferaRecord) {
  NormalizedDataset d = parse_pangaea_record(foraminifera_raw());
  EXPECT_EQ(d.kind, NodeKind::Dataset);
  EXPECT_EQ(d.source_key, "495977132");
  EXPECT_EQ(d.organization, "PANGAEA");
  EXPECT_EQ(d.doi, "https://doi.org/10.1594/PANGAEA.958142");
  ASSERT_TRUE(d.temporal_coverage && d.temporal_coverage->start && d.temporal_coverage->end);
  EXPECT_EQ(d.temporal_coverage->start->instant, at("1999-07-31T23:00:00Z"));
  EXPECT_EQ(d.temporal_coverage->end->instant, at("1999-08-01T23:00:00Z"));
  EXPECT_EQ(d.temporal_coverage->end->text, "1999-08-01T23:00:00.000Z");
  ASSERT_EQ(d.authors.size(), 1u);
  EXPECT_EQ(d.authors[0].name, "Franziska Tell");
  ASSERT_TRUE(d.location);
  EXPECT_EQ(d.location->west_bound_longitude, -58.0365);
  EXPECT_EQ(d.location->mean_latitude, 56.62752222222233);
  EXPECT_EQ(d.location->display_latitude(), 56.62752222222233);
  EXPECT_EQ(d.location->display_longitude(), -50.69916666666666);
  EXPECT_EQ(d.publication_date->instant, at("2023-11-13T06:33:47Z"));
  EXPECT_EQ(d.keywords, (std::vector<std::string>{"planktonic foraminifera", "shell weight", "labrador sea"}));
}

TEST(ParsePangaea, AbsentLocationStaysAbsent) {
  Attrs raw = foraminifera_raw();
  raw.erase("location_data");
  raw.erase("doi");
  NormalizedDataset d = parse_pangaea_record(raw);
  EXPECT_FALSE(d.location);
  EXPECT_EQ(d.doi, "");
}

TEST(ParsePangaea, ReversedCoverageIsFieldError) {
  Attrs raw = foraminifera_raw();
  raw["temporal_coverage"] = {{"start_date", "2000-01-02T00:00:00Z"}, {"end_date", "2000-01-01T00:00:00Z"}};
  EXPECT_EQ(code_of([&] { parse_pangaea_record(raw); }), ErrorCode::FieldError);

  IngestBatch batch = parse_documents({"pangaea", SourceKind::Pangaea}, {{"bad.json", raw}, {"ok.json", foraminifera_raw()}});
  ASSERT_EQ(batch.rejections.size(), 1u);
  EXPECT_EQ(batch.rejections[0].source_key, "bad.json");
  EXPECT_EQ(batch.datasets.size(), 1u);

  GraphStore g;
  IngestReport report = ingest(g, batch, "pangaea");
  EXPECT_EQ(report.records_rejected, 1u);
  EXPECT_EQ(report.datasets_added, 1u);
}

TEST(ParsePangaea, FieldViolations) {
  Attrs lat = foraminifera_raw();
  lat["location_data"]["north_bound_latitude"] = 95.0;
  EXPECT_EQ(code_of([&] { parse_pangaea_record(lat); }), ErrorCode::FieldError);
  Attrs flipped = foraminifera_raw();
  flipped["location_data"]["south_bound_latitude"] = 62.0;
  EXPECT_EQ(code_of([&] { parse_pangaea_record(flipped); }), ErrorCode::FieldError);
  Attrs stamp = foraminifera_raw();
  stamp["dataset_publication_date"] = "yesterday";
  EXPECT_EQ(code_of([&] { parse_pangaea_record(stamp); }), ErrorCode::FieldError);
  EXPECT_EQ(code_of([] { parse_pangaea_record(Attrs::array()); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_pangaea_record({{"dataset_title", "no id"}}); }), ErrorCode::ParseError);
}

TEST(ParsePangaea, UnknownFieldsArePreserved) {
  Attrs raw = foraminifera_raw();
  raw["funding"] = {{"agency", "DFG"}};
  NormalizedDataset d = parse_pangaea_record(raw);
  EXPECT_EQ(d.extra["funding"]["agency"], "DFG");
  GraphNode node{NodeId::make(NodeKind::Dataset, d.source_key), NodeKind::Dataset, dataset_attrs(d)};
  EXPECT_EQ(dataset_from_node(node), d);
}

TEST(SpatialExtent, MidpointWhenMeansAbsent) {
  SpatialExtent box{-10, 10, 20, 0, std::nullopt, std::nullopt};
  EXPECT_EQ(box.display_latitude(), 10.0);
  EXPECT_EQ(box.display_longitude(), 0.0);
  // 170E to 160W spans 30 degrees across the antimeridian; the midpoint is 175W.
  SpatialExtent wrap{170, -160, 10, -10, std::nullopt, std::nullopt};
  EXPECT_DOUBLE_EQ(wrap.display_longitude(), -175.0);
  SpatialExtent wrap_east{160, -170, 10, -10, std::nullopt, std::nullopt};
  EXPECT_DOUBLE_EQ(wrap_east.display_longitude(), 175.0);
}

TEST(ParseStac, GlobalCollectionWithoutKeywords) {
  Attrs raw = {{"type", "Collection"},
               {"id", "TSX-1"},
               {"extent", {{"spatial", {{"bbox", {{-180, -90, 180, 90}}}}}}}};
  NormalizedDataset d = parse_stac_collection(raw);
  EXPECT_EQ(d.kind, NodeKind::STACCollection);
  EXPECT_EQ(d.organization, "DLR_EO");
  ASSERT_TRUE(d.location);
  EXPECT_EQ(*d.location, (SpatialExtent{-180, 180, 90, -90, std::nullopt, std::nullopt}));
  EXPECT_TRUE(d.keywords.empty());
  EXPECT_EQ(parse_stac_collection(raw, "DLR").organization, "DLR");
}

TEST(ParseStac, OpenIntervalLeavesEndAbsent) {
  Attrs raw = Attrs::parse(R"({"id": "TerraSarX",
                               "extent": {"temporal": {"interval": [["2007-06-15T00:00:00Z", null]]}}})");
  NormalizedDataset d = parse_stac_collection(raw);
  ASSERT_TRUE(d.temporal_coverage);
  EXPECT_EQ(d.temporal_coverage->start->instant, at("2007-06-15T00:00:00Z"));
  EXPECT_FALSE(d.temporal_coverage->end);
}

TEST(ParseStac, ThreeCollectionFixtureMatchesExpectationTable) {
  struct Row {
    std::string key, title, doi;
    SpatialExtent extent;
    std::optional<const char*> start, end;
    std::vector<std::string> authors, keywords, missions;
  };
  const Row expected[] = {
      {"TSX-1", "TanDEM-X global DEM", "", {-180, 180, 90, -90, std::nullopt, std::nullopt},
       "2010-12-12T00:00:00Z", "2015-01-16T00:00:00Z", {"DLR"}, {}, {"tsx-1"}},
      {"TerraSarX", "TerraSAR-X scenes", "", {5.5, 15.0, 55.0, 47.25, std::nullopt, std::nullopt},
       "2007-06-15T00:00:00Z", std::nullopt, {"DLR", "Airbus DS"}, {}, {"terrasarx"}},
      {"S5P-NO2", "Sentinel-5P  tropospheric NO2", "https://doi.org/10.5270/S5P-s4ljg54",
       {170, -170, 60, -60, std::nullopt, std::nullopt}, std::nullopt, "2023-12-30T23:00:00.5Z", {"DLR"},
       {"air quality", "atmosphere", "climate"}, {"sentinel-5", "sentinel-5p"}},
  };
  auto docs = read_document_dir(kFixtures / "stac_three");
  IngestBatch batch = parse_documents({"dlr_eo", SourceKind::Stac}, docs);
  ASSERT_TRUE(batch.rejections.empty());
  ASSERT_EQ(batch.datasets.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    const auto& d = batch.datasets[i];
    const auto& e = expected[i];
    SCOPED_TRACE(e.key);
    EXPECT_EQ(d.source_key, e.key);
    EXPECT_EQ(d.title, e.title);
    EXPECT_EQ(d.doi, e.doi);
    EXPECT_EQ(d.organization, "DLR_EO");
    EXPECT_EQ(*d.location, e.extent);
    ASSERT_TRUE(d.temporal_coverage);
    EXPECT_EQ(d.temporal_coverage->start.has_value(), e.start.has_value());
    if (e.start) EXPECT_EQ(d.temporal_coverage->start->instant, at(*e.start));
    EXPECT_EQ(d.temporal_coverage->end.has_value(), e.end.has_value());
    if (e.end) EXPECT_EQ(d.temporal_coverage->end->instant, at(*e.end));
    std::vector<std::string> names;
    for (const auto& a : d.authors) names.push_back(a.name);
    EXPECT_EQ(names, e.authors);
    EXPECT_EQ(d.keywords, e.keywords);
    EXPECT_EQ(d.missions, e.missions);
  }
  EXPECT_FALSE(batch.datasets[2].extra.contains("license"));
  EXPECT_EQ(batch.datasets[0].extra["license"], "proprietary");
}

TEST(ParseStac, WrongShapes) {
  EXPECT_EQ(code_of([] { parse_stac_collection({{"type", "Feature"}, {"id", "x"}}); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_stac_collection({{"id", "x"}, {"extent", {{"spatial", {{"bbox", {{1, 2, 3}}}}}}}}); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] {
              parse_stac_collection(Attrs::parse(
                  R"({"id": "x", "extent": {"temporal": {"interval": [["2001-01-01", "2000-01-01"]]}}})"));
            }),
            ErrorCode::FieldError);
}

TEST(ParsePublication, Fields) {
  PublicationRecord p = parse_publication_record({{"id", "pub-1"},
                                                  {"title", "Mapping floods"},
                                                  {"keywords", {"Flood Events"}},
                                                  {"mission_mentions", {"TerraSarX"}},
                                                  {"authors", {"Katrin Vogel"}}});
  EXPECT_EQ(p.source_key, "pub-1");
  EXPECT_EQ(p.keywords, std::vector<std::string>{"flood events"});
  EXPECT_EQ(p.mission_mentions, std::vector<std::string>{"terrasarx"});
  EXPECT_EQ(code_of([] { parse_publication_record({{"id", "x"}}); }), ErrorCode::FieldError);
}

TEST(Ingest, SharedAuthorIsOneNode) {
  NormalizedDataset a = parse_pangaea_record({{"id", "1"}, {"title", "a"}, {"authors", {"A. Smith"}}});
  NormalizedDataset b = parse_pangaea_record({{"id", "2"}, {"title", "b"}, {"authors", {"A.  Smith"}}});
  GraphStore g;
  IngestReport r = ingest(g, {{a, b}, {}, {}}, "pangaea");
  EXPECT_EQ(r.authors_added, 1u);
  auto author = NodeId::make(NodeKind::Author, author_key("A. Smith"));
  EXPECT_EQ(g.neighbors(author, EdgeKind::HasAuthor, Direction::In).size(), 2u);
}

TEST(Ingest, SecondIngestIsNoOp) {
  IngestBatch batch = parse_documents({"pangaea", SourceKind::Pangaea}, read_document_dir(kForaminifera));
  GraphStore g;
  IngestReport first = ingest(g, batch, "pangaea");
  EXPECT_EQ(first.datasets_added, 1u);
  auto before = g;
  IngestReport second = ingest(g, batch, "pangaea");
  EXPECT_EQ(second.nodes_added(), 0u);
  EXPECT_EQ(second.edges_added, 0u);
  EXPECT_EQ(g, before);
  EXPECT_EQ(g.neighbors(NodeId::parse("Dataset/495977132"), EdgeKind::HasAuthor, Direction::Out),
            std::vector<NodeId>{NodeId::parse("Author/franziska-tell")});
}

TEST(Ingest, FrozenStoreRejectsIngest) {
  GraphStore g;
  g.freeze();
  EXPECT_EQ(code_of([&] { ingest(g, {}, "pangaea"); }), ErrorCode::BuildPhaseError);
}

// Node and edge counts equal an independent count over the raw fixture.
TEST(Ingest, CountsMatchFixtureOracle) {
  auto docs = read_document_dir(kFixtures / "counting");
  ASSERT_EQ(docs.size(), 10u);

  auto identity = [](std::string s) {
    std::string out;
    bool space = false;
    for (char c : s) {
      if (c == ' ') {
        space = !out.empty();
        continue;
      }
      if (space) out += ' ';
      space = false;
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
  };
  std::set<std::string> keywords, authors;
  size_t keyword_edges = 0, author_edges = 0;
  for (const auto& [name, raw] : docs) {
    std::set<std::string> k, a;
    for (const auto& v : raw["keywords"]) k.insert(identity(v));
    for (const auto& v : raw["authors"]) a.insert(identity(v));
    keyword_edges += k.size();
    author_edges += a.size();
    keywords.insert(k.begin(), k.end());
    authors.insert(a.begin(), a.end());
  }
  ASSERT_EQ(keywords.size(), 14u);
  ASSERT_EQ(authors.size(), 7u);

  GraphStore g;
  IngestReport r = ingest(g, parse_documents({"pangaea", SourceKind::Pangaea}, docs), "pangaea");
  EXPECT_EQ(r.datasets_added, 10u);
  EXPECT_EQ(r.keywords_added, keywords.size());
  EXPECT_EQ(r.authors_added, authors.size());
  EXPECT_EQ(r.corpora_added, 1u);
  EXPECT_EQ(g.node_count(), 10 + keywords.size() + authors.size() + 1);
  EXPECT_EQ(r.edges_added, 10 + keyword_edges + author_edges);
  EXPECT_EQ(g.edge_count(), r.edges_added);
  EXPECT_EQ(g.nodes_of_kind(NodeKind::Author).size(), authors.size());
  for (const auto& [id, e] : g.edges()) EXPECT_EQ(e.attrs["provenance"], "direct") << id;
}

TEST(Ingest, PublicationsLinkToKnownDatasets) {
  GraphStore g;
  ingest(g, parse_documents({"pangaea", SourceKind::Pangaea}, read_document_dir(kForaminifera)), "pangaea");
  PublicationRecord p = parse_publication_record(
      {{"id", "p"}, {"title", "t"}, {"related_dataset_keys", {"495977132", "missing"}}});
  IngestReport r = ingest(g, {{}, {p}, {}}, "");
  EXPECT_EQ(r.publications_added, 1u);
  EXPECT_EQ(r.records_rejected, 0u);
  ASSERT_EQ(r.rejections.size(), 1u);
  EXPECT_EQ(g.neighbors(NodeId::parse("Dataset/495977132"), EdgeKind::HasPublication, Direction::Out),
            std::vector<NodeId>{NodeId::parse("Publication/p")});
}

TEST(Sources, ParseAndValidate) {
  auto sources = parse_sources(Attrs::parse(R"([{"name":"pangaea","kind":"pangaea","limit":5},
                                                {"name":"dlr_eo","kind":"stac","organization":"DLR"}])"));
  ASSERT_EQ(sources.size(), 2u);
  EXPECT_EQ(sources[0].limit, 5u);
  EXPECT_EQ(sources[1].kind, SourceKind::Stac);
  EXPECT_EQ(sources[1].organization, "DLR");
  for (const char* bad : {R"({})", R"([{"name":"x","kind":"ftp"}])", R"([{"name":"","kind":"stac"}])",
                          R"([{"name":"a","kind":"stac"},{"name":"a","kind":"stac"}])",
                          R"([{"name":"a","kind":"stac","limit":0}])"}) {
    EXPECT_EQ(code_of([&] { parse_sources(Attrs::parse(bad)); }), ErrorCode::ConfigError) << bad;
  }
  EXPECT_EQ(code_of([] { load_sources("/nonexistent/sources.json"); }), ErrorCode::IoError);
}

// Mutated documents either parse or are rejected; nothing else escapes.
TEST(ParserProperty, TotalOverMutatedFixtures) {
  std::mt19937_64 rng(99);
  std::vector<Attrs> seeds = {foraminifera_raw()};
  for (auto& [name, doc] : read_document_dir(kFixtures / "stac_three")) seeds.push_back(doc);

  size_t parsed = 0, rejected = 0;
  for (int i = 0; i < 3000; ++i) {
    Attrs doc = seeds[rng() % seeds.size()];
    for (int m = 0, n = 1 + static_cast<int>(rng() % 3); m < n; ++m) testing::mutate_document(doc, rng);
    for (SourceKind kind : {SourceKind::Pangaea, SourceKind::Stac}) {
      try {
        kind == SourceKind::Pangaea ? (void)parse_pangaea_record(doc) : (void)parse_stac_collection(doc);
        ++parsed;
      } catch (const Error& e) {
        ASSERT_TRUE(e.code() == ErrorCode::ParseError || e.code() == ErrorCode::FieldError) << doc.dump();
        ++rejected;
      } catch (const std::exception& e) {
        FAIL() << "escaped " << e.what() << " on " << doc.dump();
      }
      IngestBatch batch = parse_documents({"s", kind}, {{"doc.json", doc}});
      ASSERT_EQ(batch.datasets.size() + batch.rejections.size(), 1u);
      GraphStore g;
      ingest(g, batch, "s");
      ASSERT_TRUE(g.check_referential_integrity());
    }
  }
  EXPECT_GT(parsed, 0u);
  EXPECT_GT(rejected, 0u);
}

}  // namespace
}  // namespace vesa
