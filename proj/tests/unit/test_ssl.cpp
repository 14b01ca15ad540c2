#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dial/error.hpp"
#include "dial/ssl.hpp"

using namespace dial;

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

TEST_CASE("cross entropy of a prediction against its label") {
    CHECK(cross_entropy(std::vector<double>{1.0, 0.0}, 0) == 0.0);
    CHECK(cross_entropy(std::vector<double>{0.5, 0.5}, 0) ==
          doctest::Approx(kLn2).epsilon(1e-13));
    CHECK(cross_entropy(std::vector<double>{0.5, 0.5}, 1) ==
          doctest::Approx(kLn2).epsilon(1e-13));
    // mpmath: -ln 0.75 = 0.28768207245178092744
    CHECK(std::abs(cross_entropy(std::vector<double>{0.25, 0.75}, 1) - 0.2876820724517809) <
          1e-12);
    CHECK_THROWS_AS(cross_entropy(std::vector<double>{1.0, 0.0}, 2), InvalidInputError);
}

TEST_CASE("cross entropy stays between the extreme log bounds") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> pred(4);
        double sum = 0.0;
        for (auto& v : pred) sum += v = unit(rng);
        for (auto& v : pred) v /= sum;
        const std::size_t label = rng() % pred.size();
        const double ce = cross_entropy(pred, label);
        const double lo = -std::log(*std::max_element(pred.begin(), pred.end()));
        const double hi = -std::log(*std::min_element(pred.begin(), pred.end()));
        CHECK(ce >= lo - 1e-12);
        CHECK(ce <= hi + 1e-12);
    }
}

TEST_CASE("EMA teacher update") {
    SUBCASE("single step from zero") {
        const auto out = ema_update(std::vector<double>{0.0}, std::vector<double>{1.0}, 0.99);
        CHECK(out[0] == doctest::Approx(0.01).epsilon(1e-12));
    }
    SUBCASE("fixed point when teacher equals student") {
        const std::vector<double> c = {3.25, -1.5, 0.0};
        const auto out = ema_update(c, c, 0.42);
        CHECK(out == c);
    }
    SUBCASE("a hundred iterations match the geometric series in closed form") {
        std::vector<double> teacher = {0.0};
        const std::vector<double> student = {1.0};
        for (int k = 0; k < 100; ++k) teacher = ema_update(teacher, student, 0.99);
        // mpmath: 1 - 0.99^100 = 0.63396765872677049507
        CHECK(std::abs(teacher[0] - 0.6339676587267705) < 1e-12);
    }
    SUBCASE("contraction toward the student") {
        std::mt19937_64 rng(73);
        std::uniform_real_distribution<double> value(-5.0, 5.0);
        const double beta = 0.9;
        for (int trial = 0; trial < 50; ++trial) {
            const std::vector<double> teacher = {value(rng)};
            const std::vector<double> student = {value(rng)};
            const auto next = ema_update(teacher, student, beta);
            CHECK(std::abs(next[0] - student[0]) ==
                  doctest::Approx(beta * std::abs(teacher[0] - student[0])).epsilon(1e-12));
        }
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(ema_update(std::vector<double>{0.0}, std::vector<double>{1.0, 2.0}, 0.5),
                        InvalidInputError);
        CHECK_THROWS_AS(ema_update(std::vector<double>{0.0}, std::vector<double>{1.0}, 1.0),
                        InvalidInputError);
        CHECK_THROWS_AS(ema_update(std::vector<double>{0.0}, std::vector<double>{1.0}, -0.1),
                        InvalidInputError);
    }
}

TEST_CASE("KL consistency loss") {
    CHECK(kl_consistency(std::vector<double>{0.5, 0.5}, std::vector<double>{0.5, 0.5}) == 0.0);
    CHECK(kl_consistency(std::vector<double>{1.0, 0.0}, std::vector<double>{0.5, 0.5}) ==
          doctest::Approx(kLn2).epsilon(1e-13));
    // mpmath: 0.082282878505051846392
    CHECK(std::abs(kl_consistency(std::vector<double>{0.7, 0.3}, std::vector<double>{0.5, 0.5}) -
                   0.08228287850505185) < 1e-12);
    CHECK_THROWS_AS(kl_consistency(std::vector<double>{1.0}, std::vector<double>{0.5, 0.5}),
                    InvalidInputError);
}

TEST_CASE("KL is nonnegative and vanishes only at equality") {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> s(3), t(3);
        double ss = 0.0, ts = 0.0;
        for (auto& v : s) ss += v = unit(rng);
        for (auto& v : t) ts += v = unit(rng);
        for (auto& v : s) v /= ss;
        for (auto& v : t) v /= ts;
        const double kl = kl_consistency(s, t);
        CHECK(kl >= -1e-15);
        double max_diff = 0.0;
        for (std::size_t c = 0; c < 3; ++c) max_diff = std::max(max_diff, std::abs(s[c] - t[c]));
        if (max_diff < 1e-9) {
            CHECK(kl <= 1e-9);
        } else if (kl <= 1e-12) {
            CHECK(max_diff <= 1e-9);
        }
        CHECK(kl_consistency(s, s) <= 1e-15);
    }
}

TEST_CASE("total loss is the sum of its parts") {
    // two points, two classes; second point unlabeled
    const std::vector<double> student = {0.8, 0.2, 0.4, 0.6};
    const std::vector<double> teacher = {0.7, 0.3, 0.5, 0.5};
    const std::vector<std::int64_t> labels = {0, -1};
    const double ls = mean_cross_entropy(student, 2, labels);
    const double lu = mean_kl(student, teacher, 2);
    CHECK(ls == doctest::Approx(-std::log(0.8)).epsilon(1e-12));
    const double expected_lu =
        0.5 * (kl_consistency(std::vector<double>{0.8, 0.2}, std::vector<double>{0.7, 0.3}) +
               kl_consistency(std::vector<double>{0.4, 0.6}, std::vector<double>{0.5, 0.5}));
    CHECK(lu == doctest::Approx(expected_lu).epsilon(1e-12));
    CHECK(total_loss(student, teacher, 2, labels) == doctest::Approx(ls + lu).epsilon(1e-12));
    // no labeled points -> supervised part is zero
    const std::vector<std::int64_t> none = {-1, -1};
    CHECK(mean_cross_entropy(student, 2, none) == 0.0);
}

TEST_CASE("perturbation pipeline") {
    const std::vector<Vec3> points = {{1, 0, 0}, {0, 2, 0}, {0, 0, 3}, {1, 1, 1}};

    SUBCASE("zero magnitudes are the identity") {
        PerturbParams params;  // all zero, scale [1,1]
        const auto out = perturb(points, 12345, params);
        REQUIRE(out.size() == points.size());
        for (std::size_t k = 0; k < points.size(); ++k) {
            CHECK(out[k].x == doctest::Approx(points[k].x).epsilon(1e-12));
            CHECK(out[k].y == doctest::Approx(points[k].y).epsilon(1e-12));
            CHECK(out[k].z == doctest::Approx(points[k].z).epsilon(1e-12));
        }
    }
    SUBCASE("same seed, same output") {
        PerturbParams params;
        params.max_rotation_rad = 3.14;
        params.jitter_sigma = 0.05;
        params.translation_range = {1, 1, 0.2};
        params.scale_min = 0.9;
        params.scale_max = 1.1;
        const auto a = perturb(points, 777, params);
        const auto b = perturb(points, 777, params);
        CHECK(a == b);
        const auto c = perturb(points, 778, params);
        CHECK(a != c);
    }
    SUBCASE("rotation alone is rigid") {
        PerturbParams params;
        params.max_rotation_rad = 3.0;
        const auto out = perturb(points, 31, params);
        for (std::size_t a = 0; a < points.size(); ++a) {
            for (std::size_t b = a + 1; b < points.size(); ++b) {
                const double before = (points[a] - points[b]).norm();
                const double after = (out[a] - out[b]).norm();
                CHECK(std::abs(before - after) <= 1e-9);
            }
        }
    }
    SUBCASE("invalid parameters") {
        PerturbParams bad;
        bad.jitter_sigma = -1.0;
        CHECK_THROWS_AS(perturb(points, 1, bad), InvalidConfigError);
        PerturbParams empty_scale;
        empty_scale.scale_min = 1.2;
        empty_scale.scale_max = 0.8;
        CHECK_THROWS_AS(perturb(points, 1, empty_scale), InvalidConfigError);
    }
}
