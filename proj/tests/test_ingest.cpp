#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "plof/config.hpp"
#include "plof/io.hpp"
#include "plof/synthetic.hpp"

using plof::DatasetSpec;
using plof::load_csv;
using plof::make_synthetic;
using plof::SyntheticSpec;

namespace {

const std::filesystem::path kFixtures = std::filesystem::path(PLOF_TEST_SOURCE_DIR) / "fixtures";

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST(LoadCsv, LabelMapping) {
    const auto path = write_temp("plof_labels.csv", "1.0,2.0,a\n3.0,4.0,b\n5.0,6.0,a\n");
    DatasetSpec spec;
    spec.path = path.string();
    spec.label_column = "2";
    spec.outlier_classes = {"b"};
    const auto ds = load_csv(spec);
    EXPECT_EQ(ds.points.size(), 3u);
    EXPECT_EQ(ds.points.dims(), 2u);
    EXPECT_EQ(ds.truth.labels(), (std::vector<std::uint8_t>{0, 1, 0}));
}

TEST(LoadCsv, RowOrderAndValuesExact) {
    const auto path = write_temp("plof_rows.csv", "0.5,-1.25,x\n3.125,7.75,x\n-9.0,2.0,y\n");
    DatasetSpec spec;
    spec.path = path.string();
    spec.label_column = "2";
    spec.outlier_classes = {"y"};
    const auto ds = load_csv(spec);
    EXPECT_EQ(ds.points.row(0)[0], 0.5);
    EXPECT_EQ(ds.points.row(0)[1], -1.25);
    EXPECT_EQ(ds.points.row(1)[0], 3.125);
    EXPECT_EQ(ds.points.row(1)[1], 7.75);
    EXPECT_EQ(ds.points.row(2)[0], -9.0);
}

TEST(LoadCsv, HeaderAndLabelByName) {
    const auto path = write_temp("plof_header.csv", "f0,f1,class\n1,2,pos\n3,4,neg\n");
    DatasetSpec spec;
    spec.path = path.string();
    spec.has_header = true;
    spec.label_column = "class";
    spec.outlier_classes = {"pos"};
    const auto ds = load_csv(spec);
    EXPECT_EQ(ds.truth.labels(), (std::vector<std::uint8_t>{1, 0}));
}

TEST(LoadCsv, QuotedFields) {
    const auto path = write_temp("plof_quoted.csv", "1.0,\"2.5\",\"label, with comma\"\n2.0,3.5,plain\n");
    DatasetSpec spec;
    spec.path = path.string();
    spec.label_column = "2";
    spec.outlier_classes = {"label, with comma"};
    const auto ds = load_csv(spec);
    EXPECT_EQ(ds.points.row(0)[1], 2.5);
    EXPECT_EQ(ds.truth.labels(), (std::vector<std::uint8_t>{1, 0}));
}

TEST(LoadCsv, ParseErrorNamesRowAndColumn) {
    const auto path = write_temp("plof_bad.csv", "1.0,2.0,a\n3.0,oops,b\n");
    DatasetSpec spec;
    spec.path = path.string();
    spec.label_column = "2";
    spec.outlier_classes = {"b"};
    try {
        (void)load_csv(spec);
        FAIL() << "expected parse error";
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
        EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
    }
}

TEST(LoadCsv, MissingLabelColumnThrows) {
    const auto path = write_temp("plof_nolabel.csv", "1.0,2.0\n3.0,4.0\n");
    DatasetSpec spec;
    spec.path = path.string();
    spec.label_column = "5";
    spec.outlier_classes = {"x"};
    EXPECT_THROW((void)load_csv(spec), std::invalid_argument);

    DatasetSpec by_name = spec;
    by_name.label_column = "class";  // no header -> cannot resolve by name
    EXPECT_THROW((void)load_csv(by_name), std::invalid_argument);
}

TEST(LoadCsv, NanRejectedAtLoad) {
    const auto path = write_temp("plof_nan.csv", "1.0,nan,a\n2.0,3.0,b\n");
    DatasetSpec spec;
    spec.path = path.string();
    spec.label_column = "2";
    spec.outlier_classes = {"b"};
    EXPECT_THROW((void)load_csv(spec), std::runtime_error);
}

TEST(Standardize, MeanZeroSdOne) {
    const auto path = write_temp("plof_std.csv", "1.0,5.0,a\n2.0,7.0,a\n3.0,9.0,b\n4.0,11.0,a\n");
    DatasetSpec spec;
    spec.path = path.string();
    spec.label_column = "2";
    spec.outlier_classes = {"b"};
    spec.standardize = true;
    const auto ds = load_csv(spec);
    for (std::size_t c = 0; c < 2; ++c) {
        double mean = 0.0, var = 0.0;
        for (std::size_t r = 0; r < 4; ++r)
            mean += ds.points.row(r)[c];
        mean /= 4.0;
        for (std::size_t r = 0; r < 4; ++r) {
            const double d = ds.points.row(r)[c] - mean;
            var += d * d;
        }
        EXPECT_LE(std::abs(mean), 1e-9);
        EXPECT_LE(std::abs(std::sqrt(var / 4.0) - 1.0), 1e-9);
    }
}

TEST(Standardize, ConstantColumnBecomesZeros) {
    const auto path = write_temp("plof_const.csv", "7.5,1.0,a\n7.5,2.0,a\n7.5,3.0,b\n");
    DatasetSpec spec;
    spec.path = path.string();
    spec.label_column = "2";
    spec.outlier_classes = {"b"};
    spec.standardize = true;
    const auto ds = load_csv(spec);
    for (std::size_t r = 0; r < 3; ++r) {
        EXPECT_EQ(ds.points.row(r)[0], 0.0);
        EXPECT_FALSE(std::isnan(ds.points.row(r)[1]));
    }
}

TEST(LoadCsv, CommittedFixtureRoundTrip) {
    DatasetSpec spec;
    spec.path = (kFixtures / "mini_labeled.csv").string();
    spec.has_header = true;
    spec.label_column = "class";
    spec.outlier_classes = {"anomaly"};
    const auto ds = load_csv(spec);
    EXPECT_EQ(ds.name, "mini_labeled");
    EXPECT_EQ(ds.points.size(), 12u);
    EXPECT_EQ(ds.points.dims(), 3u);
    EXPECT_EQ(ds.truth.outlier_count(), 1u);
    EXPECT_TRUE(ds.truth.is_outlier(10));
    EXPECT_EQ(ds.points.row(10)[0], 4.70);
}

TEST(LoadCsv, WineMatchesPublishedShapeWhenPresent) {
    // Real UCI-derived file, not vendored; see data/README.md.
    const auto path =
        std::filesystem::path(PLOF_PROJECT_SOURCE_DIR) / "data" / "wine.csv";
    if (!std::filesystem::exists(path))
        GTEST_SKIP() << "data/wine.csv not present";
    const auto spec_path =
        std::filesystem::path(PLOF_PROJECT_SOURCE_DIR) / "configs" / "datasets" / "wine.spec";
    auto spec = plof::parse_dataset_spec(spec_path.string());
    spec.path = path.string();
    const auto ds = load_csv(spec);
    EXPECT_EQ(ds.points.size(), 129u);
    EXPECT_EQ(ds.points.dims(), 13u);
    EXPECT_EQ(ds.truth.outlier_count(), 10u);
}

TEST(Synthetic, DeterministicForIdenticalSpecs) {
    SyntheticSpec spec;
    spec.n_inliers = 100;
    spec.n_outliers = 10;
    spec.dims = 4;
    spec.cluster_count = 2;
    spec.seed = 99;
    const auto a = make_synthetic(spec);
    const auto b = make_synthetic(spec);
    EXPECT_EQ(a.points.values(), b.points.values());
    EXPECT_EQ(a.truth.labels(), b.truth.labels());
}

TEST(Synthetic, RejectsZeroOutliers) {
    SyntheticSpec spec;
    spec.n_inliers = 50;
    spec.n_outliers = 0;
    spec.dims = 2;
    EXPECT_THROW((void)make_synthetic(spec), std::invalid_argument);
}

TEST(Synthetic, OutliersAreSparserThanInliers) {
    SyntheticSpec spec;
    spec.n_inliers = 200;
    spec.n_outliers = 10;
    spec.dims = 3;
    spec.cluster_count = 2;
    spec.seed = 5;
    const auto ds = make_synthetic(spec);

    // Mean nearest-neighbor distance per class.
    const plof::NeighborIndex index(ds.points, plof::Backend::brute_force);
    double inlier_nn = 0.0, outlier_nn = 0.0;
    for (std::size_t i = 0; i < 210; ++i) {
        const double d = index.query_knn(i, 1).front().dist;
        if (ds.truth.is_outlier(i))
            outlier_nn += d;
        else
            inlier_nn += d;
    }
    EXPECT_GT(outlier_nn / 10.0, inlier_nn / 200.0);
}

TEST(SpecFiles, ParseDatasetSpec) {
    const auto path = write_temp("plof_mini.spec",
                                 "name = mini\npath = mini.csv\ndelimiter = ,\n"
                                 "header = true\nlabel_column = class\n"
                                 "outlier_classes = bad, worse\nstandardize = true\n");
    const DatasetSpec spec = plof::parse_dataset_spec(path.string());
    EXPECT_EQ(spec.name, "mini");
    EXPECT_EQ(spec.path, "mini.csv");
    EXPECT_TRUE(spec.has_header);
    EXPECT_EQ(spec.label_column, "class");
    EXPECT_EQ(spec.outlier_classes, (std::vector<std::string>{"bad", "worse"}));
    EXPECT_TRUE(spec.standardize);
}

TEST(SpecFiles, ParseSyntheticSpecFixture) {
    const auto spec = plof::parse_synthetic_spec((kFixtures / "tiny_synth.spec").string());
    EXPECT_EQ(spec.name, "tiny");
    EXPECT_EQ(spec.n_inliers, 80u);
    EXPECT_EQ(spec.n_outliers, 8u);
    EXPECT_EQ(spec.dims, 3u);
    EXPECT_EQ(spec.seed, 11u);
}

TEST(SpecFiles, UnknownKeyRejected) {
    const auto path = write_temp("plof_badkey.spec", "path = x.csv\nlabel_column = 0\n"
                                                     "outlier_classes = a\nbanana = 7\n");
    EXPECT_THROW((void)plof::parse_dataset_spec(path.string()), std::invalid_argument);
}
