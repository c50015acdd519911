// ceut - command-line front end: evaluate, audit, replay fixtures, serve the API.
//
// Exit codes:
//   0  success / audit holds / all fixtures match
//   1  audit violated on input / fixture mismatch
//   2  bad input (parse, validation, unknown fixture, bind failure)
//   3  both a marking and a profile were supplied

#include "ceut/ceut.hpp"
#include "ceut/service.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

namespace {

enum ExitCode : int { kOk = 0, kViolated = 1, kBadInput = 2, kConflict = 3 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_source(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ceut::Json read_json(const std::string& path) {
    try {
        return ceut::Json::parse(read_source(path));
    } catch (const ceut::Json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

ceut::DecisionProblem read_problem(const std::string& path) {
    auto problem = ceut::problem_from_json(read_json(path));
    ceut::require_valid(problem);
    return problem;
}

ceut::Outcome parse_branch(const std::string& text) {
    // value:probability
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InputError("branch '" + text + "' must be value:probability");
    try {
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw InputError("branch '" + text + "' must be value:probability");
    }
}

std::string fmt3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s = buf;
    if (s == "-0.000") s = "0.000";
    return s;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

void print_rows(std::ostream& os, const std::vector<ceut::EvaluationRow>& rows, const std::string& context_header = {},
                const std::vector<std::string>& contexts = {}) {
    const std::vector<std::string> head{"prospect", "ex", "best_alt", "best_alt_ex", "ccc_mass", "|ccc|", "ceu"};
    std::vector<std::vector<std::string>> cells;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::vector<std::string> line{r.prospect, fmt3(r.ex), r.best_alt, fmt3(r.best_alt_ex),
                                      fmt3(r.ccc_prob_mass), fmt3(std::fabs(r.ccc)), fmt3(r.ceu)};
        if (!context_header.empty()) line.insert(line.begin(), contexts.at(i));
        cells.push_back(std::move(line));
    }
    auto header = head;
    if (!context_header.empty()) header.insert(header.begin(), context_header);
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& line : cells) width[c] = std::max(width[c], line[c].size());
    }
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "  " : "") << pad(header[c], width[c]);
    os << '\n';
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) os << (c ? "  " : "") << pad(line[c], width[c]);
        os << '\n';
    }
}

void print_evaluation(std::ostream& os, const ceut::Evaluation& ev) {
    const auto ranking = ceut::rank(ev);
    os << "mode: " << ceut::to_string(ev.mode) << '\n';
    print_rows(os, ev.rows);
    for (const auto& w : ev.warnings) os << "warning: " << w << '\n';
    for (const auto& t : ranking.tie_breaks) os << "tie-break: " << t << '\n';
    os << "ranking:";
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) os << (i ? " > " : " ") << ranking.entries[i].prospect;
    os << '\n' << "recommend: " << ranking.top() << '\n';
}

void print_report(std::ostream& os, const ceut::AuditReport& r) {
    os << "axiom: " << r.axiom << '\n' << "verdict: " << ceut::to_string(r.verdict) << '\n';
    if (!r.witness.empty()) os << "witness: " << r.witness << '\n';
    for (const auto& [k, v] : r.metrics) os << k << ": " << v << '\n';
    if (r.evidence.empty()) return;
    std::vector<ceut::EvaluationRow> rows;
    std::vector<std::string> contexts;
    for (const auto& e : r.evidence) {
        rows.push_back(e.row);
        contexts.push_back(e.context);
    }
    print_rows(os, rows, "context", contexts);
}

struct Format {
    std::string value = "table";
    [[nodiscard]] bool json() const { return value == "json"; }
};

int emit_report(const ceut::AuditReport& r, const Format& f) {
    if (f.json()) std::cout << ceut::to_json(r).dump() << '\n';
    else print_report(std::cout, r);
    return r.holds() ? kOk : kViolated;
}

// marking file, profile file, or neither (all-false marking)
ceut::MarkingSource marking_source(const ceut::DecisionProblem& problem, const std::string& marking_path,
                                   const std::string& profile_path) {
    if (!profile_path.empty()) return ceut::profile_from_json(read_json(profile_path));
    if (!marking_path.empty()) {
        auto m = ceut::marking_from_json(read_json(marking_path));
        ceut::require_marking(problem, m);
        return m;
    }
    return ceut::empty_marking(problem);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Comparative expected utility toolkit"};
    app.require_subcommand(1);
    Format format;

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a problem with a marking or a profile");
    std::string problem_path, marking_path, profile_path, mode_name = "joint";
    eval->add_option("problem", problem_path, "Problem JSON file, or - for stdin")->required();
    eval->add_option("--marking", marking_path, "Marking JSON file");
    eval->add_option("--profile", profile_path, "Profile JSON file");
    eval->add_option("--mode", mode_name, "joint | pairwise")->check(CLI::IsMember({"joint", "pairwise"}));
    eval->add_option("--format", format.value, "table | json")->check(CLI::IsMember({"table", "json"}));

    // audit
    auto* audit = app.add_subcommand("audit", "Audit an axiom on concrete inputs or a random ensemble");
    audit->require_subcommand(1);
    std::size_t ensemble = 0, prospects = 3, decision = 0;
    std::optional<std::uint64_t> seed;
    std::string fixture_id;
    double offset = 0.0;
    std::string variant = "index";

    auto* trans = audit->add_subcommand("transitivity", "Look for preference cycles");
    trans->add_option("problem", problem_path, "Problem JSON file");
    trans->add_option("--marking", marking_path);
    trans->add_option("--profile", profile_path);
    trans->add_option("--fixture", fixture_id, "Use a corpus fixture's decision");
    trans->add_option("--decision", decision);
    trans->add_option("--mode", mode_name)->check(CLI::IsMember({"joint", "pairwise"}));
    trans->add_option("--ensemble", ensemble, "Number of random problems");
    trans->add_option("--seed", seed);
    trans->add_option("--prospects", prospects, "Prospects per random problem")->check(CLI::Range(2, 26));
    trans->add_option("--format", format.value)->check(CLI::IsMember({"table", "json"}));

    std::string pair_one, pair_two, branch_one, branch_two, marking_one, marking_two;
    auto* indep = audit->add_subcommand("independence", "Cancel a common branch from two pairs and compare");
    indep->add_option("--fixture", fixture_id, "Fixture with two decisions carrying cancel branches");
    indep->add_option("--pair-one", pair_one);
    indep->add_option("--pair-two", pair_two);
    indep->add_option("--branch-one", branch_one, "value:probability");
    indep->add_option("--branch-two", branch_two, "value:probability");
    indep->add_option("--marking-one", marking_one);
    indep->add_option("--marking-two", marking_two);
    indep->add_option("--profile", profile_path);
    indep->add_option("--format", format.value)->check(CLI::IsMember({"table", "json"}));

    auto* inv = audit->add_subcommand("invariance", "Shift every outcome and compare rankings");
    inv->add_option("problem", problem_path);
    inv->add_option("--fixture", fixture_id);
    inv->add_option("--decision", decision);
    inv->add_option("--marking", marking_path);
    inv->add_option("--profile", profile_path);
    auto* offset_opt = inv->add_option("--offset", offset, "Added to every outcome value");
    inv->add_option("--variant", variant, "index (reuse marks) | policy (re-run profile)")
        ->check(CLI::IsMember({"index", "policy"}));
    inv->add_option("--ensemble", ensemble);
    inv->add_option("--seed", seed);
    inv->add_option("--prospects", prospects)->check(CLI::Range(2, 26));
    inv->add_option("--format", format.value)->check(CLI::IsMember({"table", "json"}));

    // replay
    auto* rep = app.add_subcommand("replay", "Replay corpus fixtures against their printed values");
    bool replay_all = false;
    rep->add_option("fixture", fixture_id);
    rep->add_flag("--all", replay_all);
    rep->add_option("--format", format.value)->check(CLI::IsMember({"table", "json"}));

    // fixtures
    auto* fixtures = app.add_subcommand("fixtures", "List corpus fixtures");

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    int port = 8080;
    std::string host = "127.0.0.1", corpus, persist;
    long idle_ttl = 3600;
    serve->add_option("--port", port)->check(CLI::Range(0, 65535));
    serve->add_option("--host", host);
    serve->add_option("--corpus-dir", corpus);
    serve->add_option("--idle-ttl", idle_ttl, "Session idle expiry in seconds");
    serve->add_option("--persist-dir", persist, "Write session documents here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (*eval) {
            if (!marking_path.empty() && !profile_path.empty()) {
                std::cerr << "error: supply either --marking or --profile, not both\n";
                return kConflict;
            }
            const auto problem = read_problem(problem_path);
            const auto source = marking_source(problem, marking_path, profile_path);
            const auto mode = ceut::mode_from_string(mode_name);
            const auto marking = ceut::detail::resolve_marking(problem, source);
            const auto ev = ceut::evaluate(problem, marking, mode);
            if (format.json()) {
                auto doc = ceut::to_json(ev);
                doc["marking"] = ceut::to_json(marking);
                std::cout << doc.dump() << '\n';
            } else {
                print_evaluation(std::cout, ev);
            }
            return kOk;
        }

        if (*trans) {
            if (!marking_path.empty() && !profile_path.empty()) {
                std::cerr << "error: supply either --marking or --profile, not both\n";
                return kConflict;
            }
            const auto mode = ceut::mode_from_string(mode_name);
            if (ensemble > 0) {
                if (!seed) throw InputError("--ensemble requires --seed");
                ceut::EnsembleOptions opts;
                opts.problems = ensemble;
                opts.seed = *seed;
                opts.prospects = prospects;
                opts.mode = mode;
                if (!profile_path.empty()) opts.profile = ceut::profile_from_json(read_json(profile_path));
                if (opts.profile.policy == ceut::Policy::Manual) throw InputError("ensemble audits need an automatic policy");
                return emit_report(ceut::transitivity_ensemble(opts), format);
            }
            ceut::DecisionProblem problem;
            ceut::MarkingSource source;
            if (!fixture_id.empty()) {
                const auto f = ceut::load_fixture(fixture_id);
                if (decision >= f.decisions.size()) throw InputError("fixture has no decision " + std::to_string(decision));
                problem = f.decisions[decision].problem;
                source = f.decisions[decision].marking;
                if (!profile_path.empty()) source = ceut::profile_from_json(read_json(profile_path));
            } else {
                if (problem_path.empty()) throw InputError("transitivity audit needs a problem, --fixture or --ensemble");
                problem = read_problem(problem_path);
                source = marking_source(problem, marking_path, profile_path);
            }
            return emit_report(ceut::audit_transitivity(problem, source, mode), format);
        }

        if (*indep) {
            ceut::DecisionProblem one, two;
            ceut::Outcome b1, b2;
            ceut::MarkingSource s1, s2;
            if (!fixture_id.empty()) {
                const auto f = ceut::load_fixture(fixture_id);
                if (f.decisions.size() != 2 || !f.decisions[0].cancel || !f.decisions[1].cancel)
                    throw InputError("fixture " + fixture_id + " does not describe two cancellable pairs");
                one = f.decisions[0].problem;
                two = f.decisions[1].problem;
                b1 = *f.decisions[0].cancel;
                b2 = *f.decisions[1].cancel;
                s1 = f.decisions[0].marking;
                s2 = f.decisions[1].marking;
            } else {
                if (pair_one.empty() || pair_two.empty() || branch_one.empty() || branch_two.empty())
                    throw InputError("independence audit needs --fixture or --pair-one/--pair-two/--branch-one/--branch-two");
                one = read_problem(pair_one);
                two = read_problem(pair_two);
                b1 = parse_branch(branch_one);
                b2 = parse_branch(branch_two);
                if (!profile_path.empty() && (!marking_one.empty() || !marking_two.empty())) {
                    std::cerr << "error: supply either markings or --profile, not both\n";
                    return kConflict;
                }
                s1 = marking_source(one, marking_one, profile_path);
                s2 = marking_source(two, marking_two, profile_path);
            }
            return emit_report(ceut::audit_independence(one, two, b1, b2, s1, s2), format);
        }

        if (*inv) {
            if (!marking_path.empty() && !profile_path.empty()) {
                std::cerr << "error: supply either --marking or --profile, not both\n";
                return kConflict;
            }
            if (ensemble > 0) {
                if (!seed) throw InputError("--ensemble requires --seed");
                ceut::EnsembleOptions opts;
                opts.problems = ensemble;
                opts.seed = *seed;
                opts.prospects = prospects;
                if (!profile_path.empty()) opts.profile = ceut::profile_from_json(read_json(profile_path));
                if (opts.profile.policy == ceut::Policy::Manual) throw InputError("ensemble audits need an automatic policy");
                return emit_report(ceut::invariance_ensemble(opts), format);
            }
            if (offset_opt->count() == 0) throw InputError("invariance audit needs --offset");
            ceut::DecisionProblem problem;
            ceut::Marking marking;
            std::optional<ceut::Profile> profile;
            if (!profile_path.empty()) profile = ceut::profile_from_json(read_json(profile_path));
            if (!fixture_id.empty()) {
                const auto f = ceut::load_fixture(fixture_id);
                if (decision >= f.decisions.size()) throw InputError("fixture has no decision " + std::to_string(decision));
                problem = f.decisions[decision].problem;
                marking = f.decisions[decision].marking;
            } else {
                if (problem_path.empty()) throw InputError("invariance audit needs a problem or --fixture");
                problem = read_problem(problem_path);
                const auto source = marking_source(problem, marking_path, profile_path);
                marking = ceut::detail::resolve_marking(problem, source);
            }
            if (variant == "policy") {
                if (!profile) throw InputError("--variant policy needs --profile");
                return emit_report(ceut::audit_invariance_policy(problem, offset, *profile), format);
            }
            return emit_report(ceut::audit_invariance(problem, offset, marking), format);
        }

        if (*rep) {
            if (replay_all == !fixture_id.empty()) throw InputError("replay needs exactly one of a fixture id or --all");
            const auto ids = replay_all ? ceut::fixture_ids() : std::vector<std::string>{fixture_id};
            if (ids.empty()) throw InputError("no fixtures found in " + ceut::corpus_dir().string());
            std::size_t passed = 0;
            ceut::Json out = ceut::Json::array();
            for (const auto& id : ids) {
                const auto report = ceut::replay(ceut::load_fixture(id));
                passed += report.pass();
                if (format.json()) {
                    ceut::Json checks = ceut::Json::array();
                    for (const auto& c : report.checks)
                        checks.push_back({{"label", c.label}, {"computed", c.computed}, {"expected", c.expected},
                                          {"tol", c.tol}, {"pass", c.pass}});
                    out.push_back({{"fixture", id}, {"pass", report.pass()}, {"checks", checks}, {"failures", report.failures}});
                    continue;
                }
                std::cout << (report.pass() ? "PASS " : "FAIL ") << id << " (" << report.checks.size() << " checks)\n";
                for (const auto& f : report.failures) std::cout << "  " << f << '\n';
            }
            if (format.json()) std::cout << out.dump() << '\n';
            else std::cout << passed << "/" << ids.size() << " pass\n";
            return passed == ids.size() ? kOk : kViolated;
        }

        if (*fixtures) {
            for (const auto& id : ceut::fixture_ids()) {
                const auto f = ceut::load_fixture(id);
                std::cout << f.id << "  " << f.source << "  " << f.note << '\n';
            }
            return kOk;
        }

        if (*serve) {
            ceut::ServiceOptions opts;
            if (!corpus.empty()) opts.corpus_dir = corpus;
            if (!persist.empty()) opts.persist_dir = persist;
            opts.idle_ttl = std::chrono::seconds(idle_ttl);
            ceut::Service service(opts);
            httplib::Server server;
            service.register_routes(server);
            if (!server.bind_to_port(host, port)) {
                std::cerr << "error: cannot bind " << host << ":" << port << '\n';
                return kBadInput;
            }
            std::cerr << "listening on " << host << ":" << port << '\n';
            server.listen_after_bind();
            return kOk;
        }
    } catch (const ceut::ValidationError& e) {
        if (format.json()) std::cerr << ceut::to_json(e.report()).dump() << '\n';
        else std::cerr << e.what();
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return kOk;
}
