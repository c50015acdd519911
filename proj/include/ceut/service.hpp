// service.hpp - HTTP/JSON session API for interactive what-if analysis.
//
//   POST /v1/sessions                           problem document -> session
//   GET  /v1/sessions/{id}                      session + evaluation
//   PUT  /v1/sessions/{id}/marks/{prospect}/{i} {"flag":bool} -> evaluation
//   POST /v1/sessions/{id}/profile              profile document -> marking + evaluation
//   POST /v1/sessions/{id}/audit/{axiom}        audit parameters -> audit report
//   GET  /v1/fixtures                           fixture metadata
//   POST /v1/fixtures/{id}/session[?decision=k] session seeded from a fixture
//
// Every mutating call answers with the full recomputed evaluation. Handlers
// are plain member functions returning (status, body) so they can be driven
// without a socket; register_routes() binds them to an httplib::Server.

#pragma once

#include "ceut/audit.hpp"
#include "ceut/corpus.hpp"
#include "ceut/evaluator.hpp"
#include "ceut/json_io.hpp"
#include "ceut/policy.hpp"
#include "ceut/prospect.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>

namespace ceut {

struct ServiceOptions final {
    std::filesystem::path corpus_dir = ceut::corpus_dir();
    std::chrono::seconds idle_ttl{3600};
    std::optional<std::filesystem::path> persist_dir;  // write-through of session documents
    std::string cors_origin = "*";
};

struct Response final {
    int status = 200;
    Json body;
};

class Service {
public:
    using Clock = std::chrono::steady_clock;

    explicit Service(ServiceOptions options = {}) : options_(std::move(options)), now_([] { return Clock::now(); }) {}

    /// Test hook for session expiry.
    void set_clock(std::function<Clock::time_point()> now) { now_ = std::move(now); }

    Response create_session(const std::string& body) {
        DecisionProblem problem;
        try {
            problem = problem_from_json(Json::parse(body));
        } catch (const std::exception& e) {
            return error(400, e.what());
        }
        auto report = validate_problem(problem);
        if (!report.ok()) return {400, to_json(report)};
        auto marking = empty_marking(problem);
        return {201, describe(*store(std::move(problem), std::move(marking)))};
    }

    Response get_session(const std::string& id) {
        auto s = find(id);
        if (!s) return error(404, "unknown session '" + id + "'");
        std::lock_guard lock(s->mu);
        return {200, describe(*s)};
    }

    Response set_mark(const std::string& id, const std::string& prospect, const std::string& index,
                      const std::string& body) {
        auto s = find(id);
        if (!s) return error(404, "unknown session '" + id + "'");
        bool flag = true;
        if (!body.empty()) {
            try {
                const auto doc = Json::parse(body);
                if (!doc.contains("flag") || !doc.at("flag").is_boolean()) return error(422, "body needs a boolean \"flag\"");
                flag = doc.at("flag").get<bool>();
            } catch (const Json::parse_error& e) {
                return error(400, e.what());
            }
        }
        std::lock_guard lock(s->mu);
        const auto it = s->marking.find(prospect);
        if (it == s->marking.end()) return error(422, "unknown prospect '" + prospect + "'");
        std::size_t i = 0;
        try {
            std::size_t used = 0;
            const auto parsed = std::stoul(index, &used);
            if (used != index.size()) throw std::invalid_argument(index);
            i = parsed;
        } catch (const std::exception&) {
            return error(422, "bad outcome index '" + index + "'");
        }
        if (i >= it->second.size()) return error(422, "outcome index " + index + " out of range for '" + prospect + "'");
        it->second[i] = flag;
        touch(*s);
        return {200, describe(*s)};
    }

    Response apply_profile(const std::string& id, const std::string& body) {
        auto s = find(id);
        if (!s) return error(404, "unknown session '" + id + "'");
        Profile profile;
        try {
            profile = profile_from_json(Json::parse(body));
            if (profile.policy == Policy::Manual) return error(400, "manual profiles carry no rule; set marks directly");
        } catch (const std::exception& e) {
            return error(400, e.what());
        }
        std::lock_guard lock(s->mu);
        s->marking = ceut::apply_policy(s->problem, profile);
        s->profile = profile;
        touch(*s);
        return {200, describe(*s)};
    }

    Response run_audit(const std::string& id, const std::string& axiom, const std::string& body) {
        auto s = find(id);
        if (!s) return error(404, "unknown session '" + id + "'");
        if (axiom != "transitivity" && axiom != "invariance" && axiom != "independence")
            return error(404, "unknown axiom '" + axiom + "'");
        Json params = Json::object();
        try {
            if (!body.empty()) params = Json::parse(body);
        } catch (const Json::parse_error& e) {
            return error(400, e.what());
        }
        if (!params.is_object()) return error(422, "audit parameters must be an object");

        DecisionProblem problem;
        Marking marking;
        std::optional<Profile> profile;
        {
            std::lock_guard lock(s->mu);
            problem = s->problem;
            marking = s->marking;
            profile = s->profile;
        }
        try {
            if (axiom == "transitivity") {
                const auto mode = mode_from_string(params.value("mode", "joint"));
                return {200, to_json(audit_transitivity(problem, marking, mode))};
            }
            if (axiom == "invariance") {
                if (!params.contains("offset") || !params.at("offset").is_number())
                    return error(422, "invariance audit needs a numeric \"offset\"");
                const double offset = params.at("offset").get<double>();
                if (params.value("variant", "index") == "policy") {
                    if (!profile) return error(422, "policy variant needs a profile applied to the session");
                    return {200, to_json(audit_invariance_policy(problem, offset, *profile))};
                }
                return {200, to_json(audit_invariance(problem, offset, marking))};
            }
            // independence: the session is pair one; the second pair arrives in the body
            if (problem.size() != 2) return error(422, "independence audit needs a two-prospect session");
            if (!params.contains("branch") || !params.contains("other") || !params.contains("other_branch"))
                return error(422, "independence audit needs \"branch\", \"other\" and \"other_branch\"");
            auto branch = [](const Json& j) {
                return Outcome{detail::number(detail::member(j, "value", "branch"), "branch.value"),
                               detail::probability(detail::member(j, "p", "branch"), "branch.p")};
            };
            const auto other = problem_from_json(params.at("other"));
            MarkingSource other_source;
            if (params.contains("other_marking")) other_source = marking_from_json(params.at("other_marking"));
            else if (profile) other_source = *profile;
            else return error(422, "independence audit needs \"other_marking\" or a session profile");
            return {200, to_json(audit_independence(problem, other, branch(params.at("branch")),
                                                    branch(params.at("other_branch")), marking, other_source))};
        } catch (const ValidationError& e) {
            return {422, to_json(e.report())};
        } catch (const std::exception& e) {
            return error(422, e.what());
        }
    }

    Response list_fixtures() {
        Json list = Json::array();
        for (const auto& id : fixture_ids(options_.corpus_dir)) {
            try {
                const auto f = load_fixture(id, options_.corpus_dir);
                list.push_back({{"id", f.id}, {"source", f.source}, {"note", f.note},
                                {"decisions", f.decisions.size()}});
            } catch (const std::exception& e) {
                list.push_back({{"id", id}, {"error", e.what()}});
            }
        }
        return {200, {{"fixtures", std::move(list)}}};
    }

    Response fixture_session(const std::string& fixture_id, std::size_t decision = 0) {
        Fixture f;
        try {
            f = load_fixture(fixture_id, options_.corpus_dir);
        } catch (const UnknownFixture& e) {
            return error(404, e.what());
        } catch (const std::exception& e) {
            return error(500, e.what());
        }
        if (decision >= f.decisions.size()) return error(404, "fixture " + fixture_id + " has no decision " + std::to_string(decision));
        auto& d = f.decisions[decision];
        auto session = store(std::move(d.problem), std::move(d.marking));
        std::lock_guard lock(session->mu);
        auto body = describe(*session);
        body["fixture"] = f.id;
        body["decision"] = decision;
        return {201, std::move(body)};
    }

    [[nodiscard]] std::size_t session_count() {
        std::lock_guard lock(mu_);
        purge();
        return sessions_.size();
    }

    void register_routes(httplib::Server& server) {
        auto send = [this](httplib::Response& res, const Response& r) {
            res.status = r.status;
            res.set_header("Access-Control-Allow-Origin", options_.cors_origin);
            res.set_content(r.body.dump(), "application/json");
        };
        server.Options(R"(/v1/.*)", [this](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Origin", options_.cors_origin);
            res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
            res.status = 204;
        });
        server.Post("/v1/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, create_session(req.body));
        });
        server.Get(R"(/v1/sessions/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, get_session(req.matches[1]));
        });
        server.Put(R"(/v1/sessions/([^/]+)/marks/([^/]+)/([^/]+))",
                   [this, send](const httplib::Request& req, httplib::Response& res) {
                       send(res, set_mark(req.matches[1], req.matches[2], req.matches[3], req.body));
                   });
        server.Post(R"(/v1/sessions/([^/]+)/profile)", [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, apply_profile(req.matches[1], req.body));
        });
        server.Post(R"(/v1/sessions/([^/]+)/audit/([^/]+))",
                    [this, send](const httplib::Request& req, httplib::Response& res) {
                        send(res, run_audit(req.matches[1], req.matches[2], req.body));
                    });
        server.Get("/v1/fixtures", [this, send](const httplib::Request&, httplib::Response& res) {
            send(res, list_fixtures());
        });
        server.Post(R"(/v1/fixtures/([^/]+)/session)", [this, send](const httplib::Request& req, httplib::Response& res) {
            std::size_t decision = 0;
            if (req.has_param("decision")) {
                try {
                    decision = std::stoul(req.get_param_value("decision"));
                } catch (const std::exception&) {
                    send(res, error(422, "bad decision index"));
                    return;
                }
            }
            send(res, fixture_session(req.matches[1], decision));
        });
    }

private:
    struct Session {
        std::string id;
        DecisionProblem problem;
        Marking marking;
        std::optional<Profile> profile;
        Clock::time_point created, updated;
        std::mutex mu;
    };

    static Response error(int status, const std::string& message) { return {status, {{"error", message}}}; }

    std::shared_ptr<Session> store(DecisionProblem problem, Marking marking) {
        auto s = std::make_shared<Session>();
        s->problem = std::move(problem);
        s->marking = std::move(marking);
        s->created = s->updated = now_();
        {
            std::lock_guard lock(mu_);
            purge();
            s->id = new_id();
            sessions_[s->id] = s;
        }
        std::lock_guard lock(s->mu);
        persist(*s);
        return s;
    }

    std::shared_ptr<Session> find(const std::string& id) {
        std::lock_guard lock(mu_);
        purge();
        const auto it = sessions_.find(id);
        return it == sessions_.end() ? nullptr : it->second;
    }

    // Caller holds s.mu.
    void touch(Session& s) {
        s.updated = now_();
        persist(s);
    }

    // Caller holds mu_. A session is idle when it has not been created or mutated within the ttl.
    void purge() {
        const auto now = now_();
        for (auto it = sessions_.begin(); it != sessions_.end();) {
            std::unique_lock slock(it->second->mu, std::try_to_lock);
            if (slock.owns_lock() && now - it->second->updated > options_.idle_ttl) it = sessions_.erase(it);
            else ++it;
        }
    }

    std::string new_id() {
        static constexpr char kHex[] = "0123456789abcdef";
        std::string id;
        do {
            id.clear();
            for (int i = 0; i < 2; ++i) {
                auto v = rng_();
                for (int k = 0; k < 16; ++k, v >>= 4) id += kHex[v & 0xf];
            }
        } while (sessions_.count(id));
        return id;
    }

    // Caller holds s.mu.
    Json describe(const Session& s) const {
        Json j{{"id", s.id},
               {"problem", to_json(s.problem)},
               {"marking", to_json(s.marking)},
               {"evaluation", to_json(evaluate(s.problem, s.marking))}};
        j["profile"] = s.profile ? to_json(*s.profile) : Json(nullptr);
        return j;
    }

    // Caller holds s.mu.
    void persist(const Session& s) const {
        if (!options_.persist_dir) return;
        std::error_code ec;
        std::filesystem::create_directories(*options_.persist_dir, ec);
        std::ofstream out(*options_.persist_dir / (s.id + ".json"));
        Json doc{{"id", s.id}, {"problem", to_json(s.problem)}, {"marking", to_json(s.marking)}};
        doc["profile"] = s.profile ? to_json(*s.profile) : Json(nullptr);
        out << doc.dump(2) << '\n';
    }

    ServiceOptions options_;
    std::function<Clock::time_point()> now_;
    std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mt19937_64 rng_{std::random_device{}()};
};

}  // namespace ceut
