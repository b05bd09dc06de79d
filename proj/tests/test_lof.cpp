#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "plof/lof.hpp"
#include "support/naive_lof.hpp"
#include "support/random_data.hpp"

using plof::Backend;
using plof::KDistanceCache;
using plof::lof_all;
using plof::LrdCache;
using plof::NeighborIndex;
using plof::PointSet;
using testsupport::to_pointset;

namespace {

struct Fixture {
    PointSet data;
    NeighborIndex index;
    KDistanceCache cache;

    Fixture(const testsupport::Rows& rows, std::size_t k, Backend backend = Backend::brute_force)
        : data(to_pointset(rows)), index(data, backend), cache(index, k) {}
};

// Two tight unit clusters plus one far point; frozen scores below come from
// an independent transcription of the formulas (MinPts = 3).
const testsupport::Rows kClustersFar = {
    {0.0, 0.0},   {0.0, 1.0},   {1.0, 0.0},   {1.0, 1.0},   {0.5, 0.5},
    {10.0, 10.0}, {10.0, 11.0}, {11.0, 10.0}, {11.0, 11.0}, {10.5, 10.5},
    {30.0, 30.0},
};

// Literal 12-point set with frozen LRD/LOF values (MinPts = 3).
const testsupport::Rows kPts12 = {
    {0.62, 1.17},  {-0.41, 0.33}, {1.05, -0.22}, {0.13, -0.91},
    {-1.28, -0.55}, {0.97, 0.64}, {-0.73, 1.42}, {1.66, 1.03},
    {-1.94, 0.87}, {0.35, 0.48},  {4.70, 4.20},  {-0.06, -1.63},
};

const double kPts12Lrd[12] = {
    1.014147048792245,  0.8078630781478868, 0.9357041457408184, 0.6981662561988595,
    0.6952189885315191, 0.9331431035486835, 0.7087325976765783, 0.9279678996794678,
    0.6577018360352094, 0.9742067309468138, 0.20505303036508585, 0.6280977680709402,
};

const double kPts12Lof[12] = {
    0.9319219658699281, 0.9812546958687998, 0.9281837293530103, 1.13233057355712,
    1.0374338666786185, 1.0417557851266122, 1.1662658907391041, 1.0355941188186828,
    1.1209814453761977, 0.9426997176157647, 4.674007250549049,  1.2360545915351506,
};

testsupport::Rows grid_1d(std::size_t n) {
    testsupport::Rows rows;
    for (std::size_t i = 0; i < n; ++i)
        rows.push_back({static_cast<double>(i)});
    return rows;
}

}  // namespace

TEST(ReachDist, MaxOfPairCases) {
    const Fixture f({{0.0}, {1.0}, {2.0}, {9.0}}, 2);
    // point 0 has k-distance 2; the far point at 9 is outside its radius.
    EXPECT_EQ(plof::reach_dist(f.data, f.cache, 3, 0), 9.0);
    // point 1 is inside point 0's neighborhood: the k-distance wins.
    EXPECT_EQ(plof::reach_dist(f.data, f.cache, 1, 0), 2.0);
}

TEST(ReachDist, DuplicateBranch) {
    const Fixture f({{0.0}, {0.0}, {0.5}, {3.0}}, 2);
    // d(1,0) = 0, k_distance(0) = 0.5.
    EXPECT_EQ(plof::reach_dist(f.data, f.cache, 1, 0), 0.5);
}

TEST(ReachDist, SelfPairThrows) {
    const Fixture f({{0.0}, {1.0}, {2.0}}, 1);
    EXPECT_THROW((void)plof::reach_dist(f.data, f.cache, 1, 1), std::invalid_argument);
}

TEST(ReachDist, DominatesDistanceAndKDistance) {
    std::mt19937_64 rng(17);
    const auto rows = testsupport::uniform_rows(rng, 60, 3);
    const Fixture f(rows, 5);
    for (std::size_t p = 0; p < 60; ++p) {
        for (std::size_t o = 0; o < 60; ++o) {
            if (p == o)
                continue;
            const double rd = plof::reach_dist(f.data, f.cache, p, o);
            EXPECT_GE(rd, plof::euclidean(f.data.row(p), f.data.row(o)));
            EXPECT_GE(rd, f.cache.k_distance(o));
        }
    }
}

TEST(Lrd, UnitGridInteriorIsOne) {
    const Fixture f(grid_1d(10), 2);
    EXPECT_EQ(plof::lrd(f.data, f.cache, 4), 1.0);
    EXPECT_EQ(plof::lrd(f.data, f.cache, 5), 1.0);
}

TEST(Lrd, TripleDuplicateIsInfinite) {
    const Fixture f({{2.0, 2.0}, {2.0, 2.0}, {2.0, 2.0}}, 2);
    EXPECT_TRUE(std::isinf(plof::lrd(f.data, f.cache, 0)));
}

TEST(Lrd, TwelvePointFrozenValues) {
    const Fixture f(kPts12, 3);
    for (std::size_t i = 0; i < 12; ++i)
        EXPECT_NEAR(plof::lrd(f.data, f.cache, i), kPts12Lrd[i], 1e-12) << "point " << i;
}

TEST(Lrd, StrictlyPositiveOnFuzzedSets) {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 10; ++iter) {
        const auto rows = (iter % 2 == 0) ? testsupport::uniform_rows(rng, 50, 2)
                                          : testsupport::lattice_rows(rng, 50, 2, 3);
        const Fixture f(rows, 4);
        for (std::size_t i = 0; i < 50; ++i) {
            const double v = plof::lrd(f.data, f.cache, i);
            EXPECT_GT(v, 0.0);
            EXPECT_FALSE(std::isnan(v));
        }
    }
}

TEST(LofScore, TwelvePointFrozenValues) {
    const Fixture f(kPts12, 3);
    LrdCache lrds(12);
    for (std::size_t i = 0; i < 12; ++i)
        EXPECT_NEAR(plof::lof_score(f.data, f.cache, lrds, i), kPts12Lof[i], 1e-12) << "point " << i;
}

TEST(LofScore, UniformGridInteriorExactlyOne) {
    // "Interior" here means the whole two-hop neighborhood is interior:
    // boundary effects reach three grid cells in at MinPts = 2.
    const Fixture f(grid_1d(21), 2);
    LrdCache lrds(21);
    for (std::size_t i = 3; i <= 17; ++i)
        EXPECT_EQ(plof::lof_score(f.data, f.cache, lrds, i), 1.0);
}

TEST(LofScore, AllDuplicatesScoreOne) {
    const testsupport::Rows rows(6, {1.0, 1.0});
    const Fixture f(rows, 2);
    LrdCache lrds(6);
    for (std::size_t i = 0; i < 6; ++i)
        EXPECT_EQ(plof::lof_score(f.data, f.cache, lrds, i), 1.0);
}

TEST(LofScore, FarPointHasMaximumScore) {
    const Fixture f(kClustersFar, 3);
    LrdCache lrds(kClustersFar.size());
    std::vector<double> scores;
    for (std::size_t i = 0; i < kClustersFar.size(); ++i)
        scores.push_back(plof::lof_score(f.data, f.cache, lrds, i));
    const auto argmax = std::max_element(scores.begin(), scores.end()) - scores.begin();
    EXPECT_EQ(argmax, 10);
    EXPECT_GT(scores[10], 1.0);
    EXPECT_NEAR(scores[10], 29.6287095334548, 1e-9);
}

TEST(LofAll, GridTenWithinBand) {
    const plof::ScoreVector scores = lof_all(to_pointset(grid_1d(10)), 3, Backend::brute_force);
    for (double s : scores) {
        EXPECT_GE(s, 0.9);
        EXPECT_LE(s, 1.1);
    }
}

TEST(LofAll, PlantedOutlierIsArgmax) {
    std::mt19937_64 rng(404);
    auto rows = testsupport::gaussian_cluster_rows(rng, 50, 2, 1, 1.0, 5.0);
    rows.push_back({1000.0, 1000.0});
    const plof::ScoreVector scores = lof_all(to_pointset(rows), 5, Backend::brute_force);
    const auto argmax = std::max_element(scores.begin(), scores.end()) - scores.begin();
    EXPECT_EQ(argmax, 50);
}

TEST(LofAll, TwoPointsScoreOne) {
    const plof::ScoreVector scores = lof_all(to_pointset({{0.0}, {3.0}}), 1, Backend::brute_force);
    EXPECT_EQ(scores[0], 1.0);
    EXPECT_EQ(scores[1], 1.0);
}

TEST(LofAll, MinptsRangeValidated) {
    const PointSet ps = to_pointset({{0.0}, {1.0}, {2.0}});
    EXPECT_THROW((void)lof_all(ps, 0, Backend::brute_force), std::invalid_argument);
    EXPECT_THROW((void)lof_all(ps, 3, Backend::brute_force), std::invalid_argument);
}

TEST(LofAll, MatchesNaiveTranscription) {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 20; ++iter) {
        const std::size_t n = 20 + static_cast<std::size_t>(rng() % 100);
        const std::size_t m = 2 + static_cast<std::size_t>(rng() % 4);
        const auto rows = (iter % 3 == 2) ? testsupport::lattice_rows(rng, n, m)
                                          : testsupport::uniform_rows(rng, n, m);
        const std::size_t k = (iter % 2 == 0) ? 2 : 5;
        const Backend backend = (iter % 2 == 0) ? Backend::brute_force : Backend::kd_tree;
        const std::vector<double> expected = naive::lof_all(rows, k);
        const plof::ScoreVector actual = lof_all(to_pointset(rows), k, backend);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::isinf(expected[i]))
                EXPECT_TRUE(std::isinf(actual[i])) << "set " << iter << " point " << i;
            else
                EXPECT_NEAR(actual[i], expected[i], 1e-9) << "set " << iter << " point " << i;
        }
    }
}

TEST(LofAll, PermutationEquivariance) {
    std::mt19937_64 rng(31337);
    const auto rows = testsupport::uniform_rows(rng, 60, 3);
    const plof::ScoreVector base = lof_all(to_pointset(rows), 5, Backend::brute_force);

    std::vector<std::size_t> perm(rows.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    testsupport::Rows permuted(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        permuted[i] = rows[perm[i]];

    const plof::ScoreVector shuffled = lof_all(to_pointset(permuted), 5, Backend::brute_force);
    for (std::size_t i = 0; i < rows.size(); ++i)
        EXPECT_EQ(shuffled[i], base[perm[i]]);
}

TEST(LofAll, RigidMotionInvariance) {
    std::mt19937_64 rng(9090);
    const auto rows = testsupport::uniform_rows(rng, 80, 2);
    const plof::ScoreVector base = lof_all(to_pointset(rows), 5, Backend::brute_force);

    const double theta = 0.7342;
    const double c = std::cos(theta), s = std::sin(theta);
    testsupport::Rows moved(rows.size(), std::vector<double>(2));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        moved[i][0] = c * rows[i][0] - s * rows[i][1] + 13.25;
        moved[i][1] = s * rows[i][0] + c * rows[i][1] - 4.5;
    }
    const plof::ScoreVector rotated = lof_all(to_pointset(moved), 5, Backend::brute_force);
    for (std::size_t i = 0; i < rows.size(); ++i)
        EXPECT_NEAR(rotated[i], base[i], 1e-9);
}

TEST(LrdCacheTest, LazyPopulation) {
    const Fixture f(kPts12, 3);
    LrdCache lrds(12);
    EXPECT_EQ(lrds.computed_count(), 0u);
    (void)plof::lof_score(f.data, f.cache, lrds, 0);
    EXPECT_TRUE(lrds.known(0));
    EXPECT_GE(lrds.computed_count(), f.cache.profile(0).neighborhood_size());
    EXPECT_LE(lrds.computed_count(), 12u);
}
