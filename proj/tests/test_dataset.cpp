#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "fastron/dataset.hpp"

using namespace fastron;

TEST_SUITE_BEGIN("dataset");

TEST_CASE("gaussian kernel values") {
    const Configuration x{0.3, -1.2};
    CHECK(kernel(x, x, 10.0) == 1.0);
    CHECK(kernel(x, x, 0.5) == 1.0);

    // ||a-b|| = 0.1 with gamma = 10: exp(-10 * 0.01) = exp(-0.1).
    const Configuration a{0.0, 0.0};
    const Configuration b{0.1, 0.0};
    CHECK(kernel(a, b, 10.0) == doctest::Approx(0.9048374180359595).epsilon(1e-12));

    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        Configuration p{uniform_real(rng, -3, 3), uniform_real(rng, -3, 3)};
        Configuration q{uniform_real(rng, -3, 3), uniform_real(rng, -3, 3)};
        const double v = kernel(p, q, 10.0);
        CHECK(v == kernel(q, p, 10.0));
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }

    const Configuration short_vec{0.0};
    CHECK_THROWS_AS(kernel(a, short_vec, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel(a, b, 0.0), std::invalid_argument);
}

TEST_CASE("grid sampling lays a 25x25 lattice over the joint range") {
    SamplerSpec spec;
    spec.kind = SamplerSpec::Kind::kGrid;
    spec.n = 625;
    spec.dof = 2;
    const Dataset d = Dataset::build(spec, JointBounds::full_range(2), 10.0);
    REQUIRE(d.size() == 625);

    std::set<double> joint0;
    for (std::size_t i = 0; i < d.size(); ++i) joint0.insert(d.point(i)[0]);
    REQUIRE(joint0.size() == 25);

    // Evenly spaced values starting at -pi, step 2*pi/25.
    const double step = 2.0 * M_PI / 25.0;
    double expected = -M_PI;
    for (double v : joint0) {
        CHECK(v == doctest::Approx(expected).epsilon(1e-12));
        CHECK(v >= -M_PI);
        CHECK(v < M_PI);
        expected += step;
    }

    // Labels start out free, pending the first KCD sweep.
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d.label(i) == Label::kFree);

    SamplerSpec bad = spec;
    bad.n = 624;
    CHECK_THROWS_AS(Dataset::build(bad, JointBounds::full_range(2), 10.0), std::invalid_argument);
}

TEST_CASE("uniform sampling is seed-deterministic") {
    SamplerSpec spec;
    spec.kind = SamplerSpec::Kind::kUniformRandom;
    spec.n = 200;
    spec.dof = 3;
    spec.seed = 77;
    const Dataset d1 = Dataset::build(spec, JointBounds::full_range(3), 10.0);
    const Dataset d2 = Dataset::build(spec, JointBounds::full_range(3), 10.0);
    for (std::size_t i = 0; i < d1.size(); ++i)
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(d1.point(i)[k] == d2.point(i)[k]);
            CHECK(d1.point(i)[k] >= -M_PI);
            CHECK(d1.point(i)[k] < M_PI);
        }
}

TEST_CASE("gram matrix is consistent with direct kernel evaluation") {
    SamplerSpec spec;
    spec.kind = SamplerSpec::Kind::kUniformRandom;
    spec.n = 120;
    spec.dof = 2;
    spec.seed = 5;
    const Dataset d = Dataset::build(spec, JointBounds::full_range(2), 10.0);

    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d.gram(i, i) == 1.0);

    Rng rng(11);
    for (int check = 0; check < 100; ++check) {
        const auto i = static_cast<std::size_t>(uniform_index(rng, 0, d.size() - 1));
        const auto j = static_cast<std::size_t>(uniform_index(rng, 0, d.size() - 1));
        const double direct = kernel(d.config(i), d.config(j), d.gamma());
        CHECK(d.gram(i, j) == doctest::Approx(direct).epsilon(1e-12));
        CHECK(d.gram(i, j) == d.gram(j, i));
        CHECK(d.gram(i, j) > 0.0);
        CHECK(d.gram(i, j) <= 1.0);
    }
}

TEST_CASE("kth nearest non-support point via the gram row") {
    const std::vector<Configuration> points{{0.0}, {0.1}, {0.5}};
    const Dataset d = Dataset::from_points(points, 10.0);
    const std::vector<std::size_t> support{0};

    auto first = kth_nearest_nonsupport(d, support, 0, 1);
    REQUIRE(first.has_value());
    CHECK(*first == 1);

    auto second = kth_nearest_nonsupport(d, support, 0, 2);
    REQUIRE(second.has_value());
    CHECK(*second == 2);

    CHECK_FALSE(kth_nearest_nonsupport(d, support, 0, 3).has_value());

    // Coincident points: the tie breaks toward the lowest non-support index.
    const Dataset tied = Dataset::from_points({{0.4}, {0.4}, {0.4}, {0.4}}, 10.0);
    const std::vector<std::size_t> tied_support{2};
    auto t = kth_nearest_nonsupport(tied, tied_support, 2, 1);
    REQUIRE(t.has_value());
    CHECK(*t == 0);
}

TEST_CASE("gram-based neighbor order equals brute-force euclidean order") {
    SamplerSpec spec;
    spec.kind = SamplerSpec::Kind::kUniformRandom;
    spec.n = 40;
    spec.dof = 2;
    spec.seed = 9;
    const Dataset d = Dataset::build(spec, JointBounds::full_range(2), 10.0);
    const std::vector<std::size_t> support{3, 17, 24};

    for (std::size_t s : support) {
        // Brute force: sort non-support indices by squared distance, ties by index.
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (j == support[0] || j == support[1] || j == support[2]) continue;
            double dist2 = 0.0;
            for (std::size_t k = 0; k < d.dof(); ++k) {
                const double diff = d.point(s)[k] - d.point(j)[k];
                dist2 += diff * diff;
            }
            order.emplace_back(dist2, j);
        }
        std::sort(order.begin(), order.end());
        for (std::size_t k = 1; k <= order.size(); ++k) {
            const auto got = kth_nearest_nonsupport(d, support, s, k);
            REQUIRE(got.has_value());
            CHECK(*got == order[k - 1].second);
        }
    }
}

TEST_CASE("dataset dump/load round trip") {
    SamplerSpec spec;
    spec.kind = SamplerSpec::Kind::kUniformRandom;
    spec.n = 60;
    spec.dof = 3;
    spec.seed = 21;
    Dataset d = Dataset::build(spec, JointBounds::full_range(3), 7.5);
    Rng rng(2);
    for (std::size_t i = 0; i < d.size(); ++i)
        d.set_label(i, uniform_index(rng, 0, 1) ? Label::kCollision : Label::kFree);

    const std::string path = "dataset_roundtrip.bin";
    dataset_save(d, path);
    const Dataset loaded = dataset_load(path);
    std::remove(path.c_str());

    REQUIRE(loaded.size() == d.size());
    REQUIRE(loaded.dof() == d.dof());
    CHECK(loaded.gamma() == d.gamma());
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(loaded.label(i) == d.label(i));
        for (std::size_t k = 0; k < d.dof(); ++k) CHECK(loaded.point(i)[k] == d.point(i)[k]);
        CHECK(loaded.gram(i, (i * 7) % d.size()) == d.gram(i, (i * 7) % d.size()));
    }
}

TEST_SUITE_END();
