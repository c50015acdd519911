#include "ceut/service.hpp"
#include "problems.hpp"

#include <gtest/gtest.h>

#include <thread>

using namespace ceut;

namespace {

std::string table1_doc() { return to_json(testdata::gamble_4000_vs_3000()).dump(); }

const Json& row(const Json& session, const std::string& name) {
    for (const auto& r : session.at("evaluation").at("rows"))
        if (r.at("prospect") == name) return r;
    throw std::out_of_range(name);
}

}  // namespace

TEST(Service, CreateSessionStartsUnmarked) {
    Service svc;
    const auto r = svc.create_session(table1_doc());
    ASSERT_EQ(r.status, 201) << r.body.dump();
    for (const auto& rw : r.body.at("evaluation").at("rows")) EXPECT_EQ(rw.at("ceu"), rw.at("ex"));
    EXPECT_EQ(r.body.at("marking").dump(), R"({"A":[false,false],"B":[false]})");
}

TEST(Service, CreateSessionThreeGambles) {
    Service svc;
    const auto r = svc.create_session(to_json(testdata::three_gambles()).dump());
    ASSERT_EQ(r.status, 201);
    EXPECT_EQ(r.body.at("evaluation").at("rows").size(), 3u);
    EXPECT_EQ(row(r.body, "A").at("best_alt"), "C");
}

TEST(Service, CreateSessionValidationErrors) {
    Service svc;
    const auto bad = svc.create_session(
        R"({"prospects":[{"name":"A","outcomes":[{"value":4000,"p":0.8},{"value":0,"p":0.1}]},{"name":"B","outcomes":[{"value":3000,"p":1}]}]})");
    EXPECT_EQ(bad.status, 400);
    EXPECT_EQ(bad.body.at("errors").size(), 1u);
    EXPECT_EQ(svc.create_session("not json").status, 400);
    EXPECT_EQ(svc.session_count(), 0u);
}

TEST(Service, MarkToggleRecomputes) {
    Service svc;
    const auto id = svc.create_session(table1_doc()).body.at("id").get<std::string>();
    auto r = svc.set_mark(id, "A", "1", R"({"flag":true})");
    ASSERT_EQ(r.status, 200);
    EXPECT_NEAR(row(r.body, "A").at("ceu").get<double>(), 2600, 1e-9);
    EXPECT_EQ(r.body.at("evaluation").at("recommend"), "B");

    r = svc.set_mark(id, "A", "1", R"({"flag":false})");
    EXPECT_NEAR(row(r.body, "A").at("ceu").get<double>(), 3200, 1e-9);

    r = svc.set_mark(id, "B", "0", R"({"flag":true})");
    EXPECT_NEAR(row(r.body, "B").at("ceu").get<double>(), -200, 1e-9);
    EXPECT_EQ(r.body.at("evaluation").at("recommend"), "A");
}

TEST(Service, MarkErrors) {
    Service svc;
    const auto id = svc.create_session(table1_doc()).body.at("id").get<std::string>();
    EXPECT_EQ(svc.set_mark("nope", "A", "0", "").status, 404);
    EXPECT_EQ(svc.set_mark(id, "A", "2", "").status, 422);
    EXPECT_EQ(svc.set_mark(id, "A", "x", "").status, 422);
    EXPECT_EQ(svc.set_mark(id, "Z", "0", "").status, 422);
    EXPECT_EQ(svc.set_mark(id, "A", "0", R"({"flag":1})").status, 422);
}

TEST(Service, ApplyProfile) {
    Service svc;
    const auto id = svc.create_session(table1_doc()).body.at("id").get<std::string>();
    auto r = svc.apply_profile(id, R"({"policy":"strict_comparison"})");
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.body.at("marking").dump(), R"({"A":[false,true],"B":[true]})");
    r = svc.apply_profile(id, R"({"policy":"tolerant","aspiration_gain":1000})");
    EXPECT_EQ(r.body.at("marking").at("B").dump(), "[false]");
    EXPECT_EQ(r.body.at("profile").at("policy"), "tolerant");
    EXPECT_EQ(svc.apply_profile(id, R"({"policy":42})").status, 400);
    EXPECT_EQ(svc.apply_profile(id, R"({"policy":"manual"})").status, 400);
    EXPECT_EQ(svc.apply_profile("nope", R"({"policy":"strict"})").status, 404);
}

TEST(Service, Fixtures) {
    Service svc;
    const auto list = svc.list_fixtures();
    ASSERT_EQ(list.status, 200);
    EXPECT_EQ(list.body.at("fixtures").size(), 7u);
    EXPECT_EQ(list.body.at("fixtures")[0].at("source"), "Table 2");

    const auto s = svc.fixture_session("F1");
    ASSERT_EQ(s.status, 201);
    EXPECT_NEAR(row(s.body, "A").at("ceu").get<double>(), 2600, 1e-9);
    EXPECT_NEAR(row(s.body, "B").at("ceu").get<double>(), 3000, 1e-9);
    EXPECT_EQ(svc.fixture_session("F9").status, 404);
    EXPECT_EQ(svc.fixture_session("F1", 3).status, 404);
}

TEST(Service, Audits) {
    Service svc;
    const auto f5 = svc.fixture_session("F5").body.at("id").get<std::string>();
    auto r = svc.run_audit(f5, "invariance", R"({"offset":-600})");
    ASSERT_EQ(r.status, 200) << r.body.dump();
    EXPECT_EQ(r.body.at("verdict"), "holds-on-input");
    EXPECT_EQ(svc.run_audit(f5, "invariance", "{}").status, 422);
    EXPECT_EQ(svc.run_audit(f5, "invariance", R"({"offset":1,"variant":"policy"})").status, 422);

    const auto three = svc.create_session(to_json(testdata::three_gambles()).dump()).body.at("id").get<std::string>();
    EXPECT_EQ(svc.run_audit(three, "independence", "{}").status, 422);
    r = svc.run_audit(three, "transitivity", "");
    EXPECT_EQ(r.body.at("verdict"), "holds-on-input");
    EXPECT_EQ(r.body.at("metrics").at("cycles"), 0.0);
    EXPECT_EQ(svc.run_audit(three, "continuity", "").status, 404);
    EXPECT_EQ(svc.run_audit("nope", "transitivity", "").status, 404);

    const auto f4 = svc.fixture_session("F4").body.at("id").get<std::string>();
    Json params{{"branch", {{"value", 100}, {"p", 0.89}}},
                {"other", to_json(testdata::allais_second())},
                {"other_branch", {{"value", 0}, {"p", 0.89}}},
                {"other_marking", {{"s2", {false, true}}, {"r2", {false, true}}}}};
    r = svc.run_audit(f4, "independence", params.dump());
    ASSERT_EQ(r.status, 200) << r.body.dump();
    EXPECT_EQ(r.body.at("verdict"), "violated-on-input");
    params["other_branch"]["p"] = 0.5;
    EXPECT_EQ(svc.run_audit(f4, "independence", params.dump()).status, 422);
}

TEST(Service, SessionsExpireWhenIdle) {
    ServiceOptions opts;
    opts.idle_ttl = std::chrono::seconds(60);
    Service svc(opts);
    auto now = Service::Clock::now();
    svc.set_clock([&] { return now; });
    const auto id = svc.create_session(table1_doc()).body.at("id").get<std::string>();
    now += std::chrono::seconds(30);
    EXPECT_EQ(svc.set_mark(id, "A", "1", "").status, 200);  // refreshes idle timer
    now += std::chrono::seconds(45);
    EXPECT_EQ(svc.get_session(id).status, 200);
    now += std::chrono::seconds(61);
    EXPECT_EQ(svc.get_session(id).status, 404);
}

TEST(Service, PersistsSessionDocuments) {
    ServiceOptions opts;
    opts.persist_dir = std::filesystem::temp_directory_path() / "ceut_service_persist_test";
    std::filesystem::remove_all(*opts.persist_dir);
    Service svc(opts);
    const auto id = svc.create_session(table1_doc()).body.at("id").get<std::string>();
    svc.set_mark(id, "A", "1", "");
    std::ifstream in(*opts.persist_dir / (id + ".json"));
    ASSERT_TRUE(in);
    const auto doc = Json::parse(in);
    EXPECT_EQ(doc.at("marking").at("A").dump(), "[false,true]");
    std::filesystem::remove_all(*opts.persist_dir);
}

TEST(Service, ConcurrentSessionsStayIsolated) {
    Service svc;
    std::vector<std::string> ids;
    for (int i = 0; i < 4; ++i) ids.push_back(svc.create_session(table1_doc()).body.at("id").get<std::string>());
    std::vector<std::thread> workers;
    for (int i = 0; i < 4; ++i) {
        workers.emplace_back([&, i] {
            for (int k = 0; k < 200; ++k) svc.set_mark(ids[i], "A", "1", k % 2 ? R"({"flag":false})" : R"({"flag":true})");
            if (i % 2) svc.set_mark(ids[i], "A", "1", R"({"flag":true})");
        });
    }
    for (auto& w : workers) w.join();
    for (int i = 0; i < 4; ++i) {
        const auto s = svc.get_session(ids[i]).body;
        EXPECT_EQ(s.at("marking").at("A")[1].get<bool>(), i % 2 == 1);
    }
}

TEST(ServiceHttp, RoutesOverLoopback) {
    Service svc;
    httplib::Server server;
    svc.register_routes(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client cli("127.0.0.1", port);
    auto res = cli.Get("/v1/fixtures");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(Json::parse(res->body).at("fixtures").size(), 7u);
    EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");

    res = cli.Post("/v1/sessions", table1_doc(), "application/json");
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 201);
    const auto id = Json::parse(res->body).at("id").get<std::string>();

    res = cli.Put("/v1/sessions/" + id + "/marks/A/1", R"({"flag":true})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_NEAR(row(Json::parse(res->body), "A").at("ceu").get<double>(), 2600, 1e-9);

    res = cli.Get("/v1/sessions/" + id);
    ASSERT_TRUE(res);
    // the service's evaluation is the same document the CLI prints
    const auto body = Json::parse(res->body);
    EXPECT_EQ(body.at("evaluation").dump(),
              to_json(evaluate(testdata::gamble_4000_vs_3000(), {{"A", {false, true}}, {"B", {false}}})).dump());

    res = cli.Post("/v1/sessions/" + id + "/profile", R"({"policy":"strict"})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    res = cli.Post("/v1/sessions/" + id + "/audit/transitivity", R"({"mode":"pairwise"})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    res = cli.Post("/v1/fixtures/F4/session?decision=1", "", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    EXPECT_EQ(Json::parse(res->body).at("evaluation").at("recommend"), "r2");
    res = cli.Post("/v1/fixtures/F9/session", "", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);
    res = cli.Get("/v1/sessions/missing");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);

    server.stop();
    t.join();
}
