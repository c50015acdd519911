#include "ceut/corpus.hpp"
#include "ceut/policy.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace ceut;

TEST(Corpus, ListsSevenFixtures) {
    EXPECT_EQ(fixture_ids(), (std::vector<std::string>{"F1", "F2", "F3", "F4", "F5", "F6", "F7"}));
}

TEST(Corpus, LoadsFixtureWithExplicitTolerances) {
    const auto f1 = load_fixture("F1");
    ASSERT_EQ(f1.decisions.size(), 1u);
    EXPECT_EQ(f1.decisions[0].expected[0].ceu.printed, 2600);
    EXPECT_EQ(f1.decisions[0].expected[1].ceu.printed, 3000);

    const auto f5 = load_fixture("F5");
    const auto& b = f5.decisions[0].expected[1];
    EXPECT_EQ(b.ceu.printed, 67);
    EXPECT_EQ(b.ceu.tol, 0.5);
    EXPECT_NEAR(*b.ceu.exact, 200.0 / 3.0, 1e-12);
    EXPECT_NEAR(f5.decisions[0].problem.prospects[1].outcomes[0].probability, 1.0 / 3.0, 1e-15);

    const auto f4 = load_fixture("F4");
    const auto& s2 = f4.decisions[1].expected[0];
    EXPECT_EQ(s2.ceu.printed, 0.766);
    EXPECT_EQ(s2.ceu.tol, 0.01);
    EXPECT_EQ(*s2.ceu.exact, 0.765);
    EXPECT_FALSE(s2.note.empty());
}

TEST(Corpus, UnknownFixture) {
    EXPECT_THROW(load_fixture("F9"), UnknownFixture);
    EXPECT_THROW(load_fixture("../CMakeLists"), UnknownFixture);
    EXPECT_THROW(load_fixture(""), UnknownFixture);
}

TEST(Corpus, MissingToleranceIsAnError) {
    auto doc = to_json(load_fixture("F1"));
    doc["decisions"][0]["expected"][0]["ceu"].erase("tol");
    EXPECT_THROW(fixture_from_json(doc), FormatError);
    auto uncovered = to_json(load_fixture("F1"));
    uncovered["decisions"][0]["expected"].erase(1);
    EXPECT_THROW(fixture_from_json(uncovered), FormatError);
}

TEST(Corpus, ReplicatesVerbatimMarkings) {
    EXPECT_EQ(replicate_fixture_marking("F2"), (Marking{{"A", {true}}, {"B", {true, false}}}));
    EXPECT_EQ(replicate_fixture_marking("F6"), (Marking{{"A", {false, true}}, {"B", {true}}}));
    EXPECT_EQ(replicate_fixture_marking("F7"), (Marking{{"C", {true, false}}, {"D", {false}}}));
    EXPECT_EQ(replicate_fixture_marking("F4").size(), 4u);
    EXPECT_THROW(replicate_fixture_marking("nope"), UnknownFixture);
}

TEST(Corpus, StoredProfileReproducesEveryMarking) {
    for (const auto& id : fixture_ids()) {
        const auto f = load_fixture(id);
        ASSERT_TRUE(f.profile) << id;
        EXPECT_EQ(f.profile->policy, Policy::Tolerant) << id;
        for (const auto& d : f.decisions) EXPECT_EQ(apply_policy(d.problem, *f.profile), d.marking) << id;
    }
}

TEST(Replay, EveryFixturePasses) {
    for (const auto& id : fixture_ids()) {
        const auto r = replay(load_fixture(id));
        EXPECT_TRUE(r.pass()) << id << ": " << (r.failures.empty() ? "" : r.failures.front());
        EXPECT_FALSE(r.checks.empty());
    }
}

TEST(Replay, LossAndRareEventValues) {
    const auto f2 = replay(load_fixture("F2"));
    EXPECT_NEAR(f2.evaluations[0].rows[1].ceu, -1312.5, 1e-9);
    const auto f6 = replay(load_fixture("F6"));
    EXPECT_NEAR(f6.evaluations[0].rows[0].ceu, 0.005, 1e-9);
    const auto f7 = replay(load_fixture("F7"));
    EXPECT_NEAR(f7.evaluations[0].rows[0].ceu, -5.005, 1e-9);
}

TEST(Replay, MismatchIsReportedNotThrown) {
    auto f = load_fixture("F1");
    f.decisions[0].expected[0].ceu.printed = 2601;
    f.decisions[0].recommend = "A";
    const auto r = replay(f);
    EXPECT_FALSE(r.pass());
    EXPECT_EQ(r.failures.size(), 2u);
}

TEST(Replay, ExactValueOutsidePrintedToleranceWouldFail) {
    // the printed 0.766 only passes because its tolerance is 0.01
    auto f = load_fixture("F4");
    f.decisions[1].expected[0].ceu.tol = 1e-9;
    EXPECT_FALSE(replay(f).pass());
}

TEST(Corpus, RoundTrip) {
    for (const auto& id : fixture_ids()) {
        const auto f = load_fixture(id);
        const auto once = to_json(f);
        const auto again = to_json(fixture_from_json(Json::parse(once.dump())));
        EXPECT_EQ(once, again) << id;
    }
}

TEST(Corpus, EnvironmentOverridesDirectory) {
    const auto dir = std::filesystem::temp_directory_path() / "ceut_corpus_env_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "X1.json") << to_json(load_fixture("F1")).dump();
    ::setenv("CEUT_CORPUS_DIR", dir.c_str(), 1);
    EXPECT_EQ(fixture_ids(), std::vector<std::string>{"X1"});
    EXPECT_THROW(load_fixture("X1"), FormatError);  // id inside does not match file name
    ::unsetenv("CEUT_CORPUS_DIR");
    std::filesystem::remove_all(dir);
    EXPECT_EQ(fixture_ids().size(), 7u);
}
