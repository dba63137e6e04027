#include <cmath>
#include <limits>

#include <stdexcept>

#include "doctest.h"
#include "gridclass/bandit.hpp"
#include "oracle_values.h"
#include "test_util.h"

using namespace gridclass;

TEST_CASE("confidence radius matches the arbitrary-precision oracle") {
    for (const auto& p : oracle::kRadiusPoints) {
        double got = confidence_radius(p.samples, p.n_candidates, p.delta);
        CHECK(std::fabs(got - p.expected) <= 1e-12 * p.expected);
    }
    CHECK(std::isinf(confidence_radius(0, 20, 0.1)));
}

TEST_CASE("confidence radius shrinks with more samples") {
    double prev = confidence_radius(1, 36, 0.1);
    for (int64_t n = 2; n < 4000; n *= 2) {
        double u = confidence_radius(n, 36, 0.1);
        CHECK(u < prev);
        prev = u;
    }
    // Wider with more candidates or a tighter failure budget.
    CHECK(confidence_radius(10, 72, 0.1) > confidence_radius(10, 36, 0.1));
    CHECK(confidence_radius(10, 36, 0.01) > confidence_radius(10, 36, 0.1));
}

TEST_CASE("goal selection ranks by optimistic score") {
    Scenario s = testutil::line3();
    BanditState state = make_bandit_state(s);
    CHECK(state.stats.size() == 3);

    // Unsampled cells have infinite score; ties break by ascending index.
    CHECK(select_epoch_goals(state, 2, 3, s.delta) == std::vector<CellIndex>{0, 1});

    record_samples(state, 0, std::vector<uint8_t>(10, 1));
    record_samples(state, 1, std::vector<uint8_t>(10, 0));
    CHECK(select_epoch_goals(state, 2, 3, s.delta) == std::vector<CellIndex>{2, 0});

    // Classified cells never reappear as goals.
    state.keep.insert(0);
    CHECK(select_epoch_goals(state, 3, 3, s.delta) == std::vector<CellIndex>{2, 1});

    CHECK_THROWS_AS(select_epoch_goals(state, 0, 3, s.delta), std::domain_error);
    CHECK_THROWS_AS(record_samples(state, 7, {1}), std::domain_error);
}

TEST_CASE("set updates follow the confidence rules and keep wins ties") {
    Scenario s = testutil::line3();
    BanditState state = make_bandit_state(s);

    // Cell 0: certain hit, enough samples that mean - U clears theta - eps.
    state.stats[0] = CellStats{200, 200};
    // Cell 1: certain miss.
    state.stats[1] = CellStats{200, 0};
    // Cell 2: no samples; must stay unclassified.
    update_sets(state, 3, s.theta, s.epsilon, s.delta);
    CHECK(state.keep == std::set<CellIndex>{0});
    CHECK(state.reject == std::set<CellIndex>{1});
    CHECK(state.epoch == 1);
    CHECK_FALSE(is_terminated(state));

    // Mean pinned at theta with a tiny radius satisfies both rules; the
    // keep rule takes precedence.
    state.stats[2] = CellStats{4000000000LL, 2000000000LL};
    update_sets(state, 3, s.theta, s.epsilon, s.delta);
    CHECK(state.keep == std::set<CellIndex>{0, 2});
    CHECK(is_terminated(state));
}

TEST_CASE("keep and reject sets are monotone") {
    Scenario s = testutil::line3();
    BanditState state = make_bandit_state(s);
    state.stats[0] = CellStats{200, 200};
    update_sets(state, 3, s.theta, s.epsilon, s.delta);
    CHECK(state.keep.count(0));

    // Contradictory later evidence cannot expel a classified cell.
    state.stats[0] = CellStats{400, 200};
    update_sets(state, 3, s.theta, s.epsilon, s.delta);
    CHECK(state.keep.count(0));
    CHECK_FALSE(state.reject.count(0));
}

TEST_CASE("borderline means stay unclassified until the radius is small") {
    Scenario s = testutil::line3();
    BanditState state = make_bandit_state(s);
    // mean 0.5 with a radius around 0.3: neither rule fires.
    state.stats[0] = CellStats{100, 50};
    update_sets(state, 3, s.theta, s.epsilon, s.delta);
    CHECK_FALSE(state.classified(0));
}

TEST_CASE("bandit snapshot serializes sufficient statistics") {
    Scenario s = testutil::line3();
    BanditState state = make_bandit_state(s);
    record_samples(state, 1, {1, 0, 1});
    state.keep.insert(0);
    std::string j = bandit_state_to_json(state);
    CHECK(j.find("\"gridclass-bandit-v1\"") != std::string::npos);
    CHECK(j.find("\"samples\": 3") != std::string::npos);
    CHECK(j.find("\"successes\": 2") != std::string::npos);
}
