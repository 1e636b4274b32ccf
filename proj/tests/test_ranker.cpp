#include "doctest.h"

#include <random>

#include "gridsheet/ranker.hpp"

using namespace gridsheet;

namespace {

ScoreReport uniform_report(double v, double overlap = 0.0) {
    ScoreReport r;
    r.fullness = v;
    r.compat_h = v;
    r.compat_v = v;
    r.align_h = r.align_v = v;
    r.t_align_h = r.t_align_v = v;
    r.r_align_h = r.r_align_v = v;
    r.balance_h = r.balance_v = v;
    r.overlap = overlap;
    return r;
}

}  // namespace

TEST_CASE("weighted_total applies aspect weights") {
    CHECK(weighted_total(uniform_report(1.0)) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(weighted_total(uniform_report(0.5)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(weighted_total(uniform_report(0.5, -1.0)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("absent compatibility contributes nothing") {
    ScoreReport r = uniform_report(1.0);
    r.compat_h.reset();
    r.compat_v.reset();
    CHECK(weighted_total(r) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("doubling the weights doubles the total") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        ScoreReport r = uniform_report(d(rng), -d(rng));
        r.align_h = d(rng);
        r.balance_v = d(rng);
        WeightProfile w2;
        w2.fullness *= 2;
        w2.compat_h *= 2;
        w2.compat_v *= 2;
        w2.align_h *= 2;
        w2.align_v *= 2;
        w2.t_align_h *= 2;
        w2.t_align_v *= 2;
        w2.r_align_h *= 2;
        w2.r_align_v *= 2;
        w2.balance_h *= 2;
        w2.balance_v *= 2;
        w2.overlap *= 2;
        CHECK(weighted_total(r, w2) == doctest::Approx(2.0 * weighted_total(r)).epsilon(1e-9));
    }
}

TEST_CASE("rank picks the best total and keeps the lowest index on ties") {
    CHECK(rank({uniform_report(0.3), uniform_report(0.9), uniform_report(0.9)}) == 1);
    CHECK(rank({uniform_report(0.7), uniform_report(0.7), uniform_report(0.7)}) == 0);
    CHECK(rank({uniform_report(0.2)}) == 0);
    CHECK_THROWS_AS(rank({}), ValidationError);
}

TEST_CASE("adding a strictly worse candidate never changes the choice") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> d(0.1, 1.0);
    for (int i = 0; i < 200; ++i) {
        std::vector<ScoreReport> reports;
        for (int k = 0; k < 4; ++k) reports.push_back(uniform_report(d(rng)));
        const size_t before = rank(reports);
        double worst = 1e9;
        for (const auto& r : reports) worst = std::min(worst, weighted_total(r));
        reports.push_back(uniform_report(0.0, -(std::abs(worst) + 1.0)));
        CHECK(rank(reports) == before);
    }
}
