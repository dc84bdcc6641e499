#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "bilinrank/io.hpp"
#include "bilinrank/svg.hpp"

using namespace bilinrank;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("bilinrank_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

const DesignConfig kConfigA = DesignConfig::for_label(ConfigLabel::A);

}  // namespace

TEST(Io, FormatSciRoundTrips) {
  for (double x : {1e-16, 0.1, 1.0 / 3.0, 3.1622776601683794e-10, 1e-2}) {
    EXPECT_EQ(std::stod(io::format_sci(x)), x);
  }
  EXPECT_EQ(io::format_sci(1e-10), "1.0000000000000000e-10");
}

TEST(Io, BundleRoundTrip) {
  TempDir dir;
  for (const auto& bundle : {sample_generic(kConfigA, 1),
                             sample_block_perturbed(DesignConfig::for_label(ConfigLabel::B), BlockPartition::halves(4), 1e-6, 2),
                             sample_mixed_restriction(kConfigA, BlockPartition::parse("0/1,2,3"), 5, 3)}) {
    io::save_bundle(bundle, dir / "b.json");
    EXPECT_EQ(io::load_bundle(dir / "b.json"), bundle) << bundle.preset_label;
  }
  EXPECT_FALSE(fs::exists(dir / "b.json.tmp"));
}

TEST(Io, ReexportIsByteIdentical) {
  TempDir dir;
  const auto bundle = sample_block_restricted(kConfigA, BlockPartition::halves(4), 4);
  io::save_bundle(bundle, dir / "a.json");
  io::save_bundle(io::load_bundle(dir / "a.json"), dir / "b.json");
  EXPECT_EQ(io::read_file(dir / "a.json"), io::read_file(dir / "b.json"));
}

TEST(Io, TraceViolationRejectedWithFieldPath) {
  auto doc = io::bundle_to_json(sample_generic(kConfigA, 1));
  // Scale state 3 by 0.9 in the serialized document.
  for (auto& row : doc["states"][3]["matrix"])
    for (auto& entry : row) {
      entry[0] = entry[0].get<double>() * 0.9;
      entry[1] = entry[1].get<double>() * 0.9;
    }
  try {
    io::bundle_from_json(doc);
    FAIL() << "expected rejection";
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("states[3].trace"), std::string::npos) << msg;
    EXPECT_NE(msg.find("0.9"), std::string::npos) << msg;
  }
}

TEST(Io, MalformedDocuments) {
  const std::string text = io::bundle_to_text(sample_generic(kConfigA, 1));
  EXPECT_THROW(io::bundle_from_text(text.substr(0, text.size() / 2)), InvalidInput);
  EXPECT_THROW(io::bundle_from_text("[]"), InvalidInput);

  auto doc = io::bundle_to_json(sample_generic(kConfigA, 1));
  doc["version"] = 2;
  EXPECT_THROW(io::bundle_from_json(doc), InvalidInput);

  doc = io::bundle_to_json(sample_generic(kConfigA, 1));
  doc["operators"][0]["matrix"][1][2][0] = doc["operators"][0]["matrix"][1][2][0].get<double>() + 1.0;
  try {
    io::bundle_from_json(doc);
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("operators[0]"), std::string::npos) << e.what();
  }

  doc = io::bundle_to_json(sample_generic(kConfigA, 1));
  doc["partition"] = nlohmann::json::array({nlohmann::json::array({0, 1}), nlohmann::json::array({1, 2, 3})});
  EXPECT_THROW(io::bundle_from_json(doc), InvalidInput);

  doc = io::bundle_to_json(sample_generic(kConfigA, 1));
  doc.erase("states");
  EXPECT_THROW(io::bundle_from_json(doc), InvalidInput);
}

TEST(Io, MissingFileIsIoFailure) {
  EXPECT_THROW(io::load_bundle("/nonexistent/dir/bundle.json"), IoFailure);
  EXPECT_THROW(io::write_file_atomic("/nonexistent/dir/out.csv", "x"), IoFailure);
}

TEST(Io, ProfileCsvRoundTrip) {
  RankProfile p{ToleranceGrid::default_grid(), {}, {}, 256, "x"};
  for (std::size_t k = 0; k < 29; ++k) {
    p.ranks.push_back(k < 3 ? 256 - k : 64);
    p.nullities.push_back(256 - p.ranks.back());
  }
  const std::string csv = io::profile_to_csv(p);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "tolerance,rank,nullity");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 30);
  const auto back = io::profile_from_csv(csv);
  EXPECT_TRUE(back.same_values(p));
  EXPECT_EQ(io::profile_to_csv(back), csv);
}

TEST(Io, ProfileCsvRejectsBadRows) {
  EXPECT_THROW(io::profile_from_csv("tol,rank\n"), InvalidInput);
  EXPECT_THROW(io::profile_from_csv("tolerance,rank,nullity\n"), InvalidInput);
  EXPECT_THROW(io::profile_from_csv("tolerance,rank,nullity\n1e-3,x,3\n"), InvalidInput);
  EXPECT_THROW(io::profile_from_csv("tolerance,rank,nullity\n1e-3,4,3\n1e-4,4,3\n"), InvalidInput);
  EXPECT_THROW(io::profile_from_csv("tolerance,rank,nullity\n1e-4,4,3\n1e-3,4,4\n"), InvalidInput);
}

TEST(Io, SectorCsvUndefinedRow) {
  SectorWeights empty{{kBlockDiagonal, kBlockOffDiagonal}, {}, 1e-12, 0};
  const std::string csv = io::sectors_to_csv(empty);
  EXPECT_EQ(csv, "tolerance,nullspace_dim,sector,weight\n" + io::format_sci(1e-12) + ",0,undefined,undefined\n");
  const auto back = io::sectors_from_csv(csv);
  EXPECT_FALSE(back.defined());
  EXPECT_EQ(back.nullspace_dim, 0u);
}

TEST(Io, SectorCsvRoundTrip) {
  SectorWeights w{{"DD", "DO", "OD", "OO"}, {0.1, 0.2, 0.3, 0.4}, 1e-12, 64};
  const auto back = io::sectors_from_csv(io::sectors_to_csv(w));
  EXPECT_EQ(back.names, w.names);
  EXPECT_EQ(back.weights, w.weights);
  EXPECT_EQ(back.nullspace_dim, 64u);
  EXPECT_EQ(back.tolerance, 1e-12);
}

TEST(Io, ReportRoundTripAndPlots) {
  const auto bundle = sample_block_restricted(DesignConfig{3, 10, 10, ConfigLabel::Custom}, BlockPartition::parse("0/1,2"), 5);
  const auto report = compare(bundle, default_refinements(5), default_modifications(5));
  const std::string text = io::report_to_text(report);
  const auto back = io::report_from_text(text);
  EXPECT_EQ(io::report_to_text(back), text);
  EXPECT_TRUE(back.baseline_profile.same_values(report.baseline_profile));
  EXPECT_EQ(back.plateaus_preserved, report.plateaus_preserved);
  EXPECT_EQ(back.sector_summary.weights, report.sector_summary.weights);
  EXPECT_THROW(io::report_from_text("{\"format\": \"other\"}"), InvalidInput);

  const std::string svg1 = svg::comparison_bars(back, "t");
  EXPECT_EQ(svg1, svg::comparison_bars(report, "t"));
  EXPECT_NE(svg1.find("<svg"), std::string::npos);
  const std::string stairs = svg::rank_staircase({report.baseline_profile}, "s");
  EXPECT_NE(stairs.find("<polyline"), std::string::npos);
  EXPECT_EQ(stairs, svg::rank_staircase({back.baseline_profile}, "s"));
  EXPECT_NE(svg::sector_bars(SectorWeights{{"a"}, {}, 1e-12, 0}, "x").find("undefined"), std::string::npos);
}
