#include "fairdiv/io.hpp"

#include "fairdiv/error.hpp"

#include <fstream>

namespace fairdiv {

using nlohmann::json;

namespace {

std::vector<std::string> ids_or_default(std::vector<std::string> ids, const char* prefix,
                                        int count) {
    if (!ids.empty()) return ids;
    for (int i = 1; i <= count; ++i) ids.push_back(prefix + std::to_string(i));
    return ids;
}

json witness_to_json(const Instance& inst, const FairnessWitness& w) {
    json j;
    j["i"] = inst.agent_ids[w.i];
    j["j"] = inst.agent_ids[w.j];
    if (w.good >= 0) j["good"] = inst.good_ids[w.good];
    j["lhs"] = w.lhs.str();
    j["rhs"] = w.rhs.str();
    return j;
}

json allocation_to_json(const Instance& inst, const Allocation& alloc) {
    json j = json::object();
    for (int i = 0; i < inst.n; ++i) j[inst.agent_ids[i]] = json::array();
    for (int e = 0; e < inst.m; ++e) j[inst.agent_ids[alloc.owner[e]]].push_back(inst.good_ids[e]);
    return j;
}

json prices_to_json(const Instance& inst, const std::vector<Rational>& price) {
    json j = json::object();
    for (int e = 0; e < inst.m; ++e) j[inst.good_ids[e]] = price[e].str();
    return j;
}

int good_index(const Instance& inst, const std::string& id) {
    for (int e = 0; e < inst.m; ++e)
        if (inst.good_ids[e] == id) return e;
    fail(Errc::parse_error, "unknown good id '" + id + "'");
}

int agent_index(const Instance& inst, const std::string& id) {
    for (int i = 0; i < inst.n; ++i)
        if (inst.agent_ids[i] == id) return i;
    fail(Errc::parse_error, "unknown agent id '" + id + "'");
}

} // namespace

json raw_instance_to_json(const RawInstance& raw) {
    const int n = static_cast<int>(raw.values.size());
    const int m = n > 0 ? static_cast<int>(raw.values.front().size()) : 0;
    const auto agent_ids = ids_or_default(raw.agent_ids, "a", n);
    const auto good_ids = ids_or_default(raw.good_ids, "e", m);

    json j;
    j["goods"] = good_ids;
    j["agents"] = json::array();
    for (int i = 0; i < n; ++i) {
        json a;
        a["id"] = agent_ids[i];
        a["weight"] = raw.weights[i].str();
        a["values"] = json::array();
        for (const auto& v : raw.values[i]) a["values"].push_back(v.str());
        j["agents"].push_back(std::move(a));
    }
    if (raw.k_hint) j["meta"] = json{{"k", raw.k_hint->str()}};
    return j;
}

RawInstance raw_instance_from_json(const json& j) {
    try {
        RawInstance raw;
        for (const auto& g : j.at("goods")) raw.good_ids.push_back(g.get<std::string>());
        for (const auto& a : j.at("agents")) {
            raw.agent_ids.push_back(a.at("id").get<std::string>());
            raw.weights.push_back(Rational::parse(a.at("weight").get<std::string>()));
            std::vector<Rational> row;
            for (const auto& v : a.at("values")) row.push_back(Rational::parse(v.get<std::string>()));
            raw.values.push_back(std::move(row));
        }
        if (j.contains("meta") && j["meta"].contains("k"))
            raw.k_hint = Rational::parse(j["meta"]["k"].get<std::string>());
        return raw;
    } catch (const json::exception& e) {
        fail(Errc::parse_error, std::string("malformed instance file: ") + e.what());
    }
}

json instance_to_json(const Instance& inst) {
    RawInstance raw;
    raw.agent_ids = inst.agent_ids;
    raw.good_ids = inst.good_ids;
    raw.values = inst.values;
    raw.weights = inst.weights;
    raw.k_hint = inst.k;
    return raw_instance_to_json(raw);
}

RawInstance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::parse_error, "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(Errc::parse_error, std::string("invalid JSON in '") + path + "': " + e.what());
    }
    return raw_instance_from_json(j);
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) fail(Errc::parse_error, "cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

json report_to_json(const VerifyReport& report) {
    json j;
    j["criteria"] = json::array();
    for (const auto& r : report.results) {
        json c;
        c["criterion"] = r.criterion;
        c["verdict"] = verdict_name(r.verdict);
        if (!r.note.empty()) c["note"] = r.note;
        j["criteria"].push_back(std::move(c));
    }
    j["all_pass"] = report.all_pass();
    return j;
}

namespace {

json round_to_json(const Instance& inst, const RoundRecord& row) {
    json j;
    j["t"] = row.t;
    if (row.kind == RoundRecord::Kind::price_rise) {
        j["kind"] = "price-rise";
        j["group"] = row.group + 1; // groups are reported 1-based
        j["goods"] = json::array();
        for (int e : row.raised_goods) j["goods"].push_back(inst.good_ids[e]);
    } else {
        j["kind"] = "transfer";
        j["from"] = inst.agent_ids[row.from];
        j["to"] = inst.agent_ids[row.to];
        j["good"] = inst.good_ids[row.good];
        j["from_unraised"] = row.from_unraised;
    }
    j["least"] = inst.agent_ids[row.least];
    j["big"] = inst.agent_ids[row.big];
    j["least_metric"] = row.least_metric.str();
    j["big_hat"] = row.big_hat.str();
    j["satisfied"] = json::array();
    for (int i : row.satisfied) j["satisfied"].push_back(inst.agent_ids[i]);
    return j;
}

} // namespace

json result_to_json(const Instance& inst, const SolveResult& result, const std::string& mode,
                    const VerifyReport& certificates, bool include_trace,
                    const std::map<int, int>& owner_override) {
    json j;
    j["mode"] = mode;
    j["agents"] = inst.agent_ids;
    j["goods"] = inst.good_ids;
    j["allocation"] = allocation_to_json(inst, result.state.alloc);
    j["prices"] = prices_to_json(inst, result.state.price);

    json certs = json::array();
    for (const auto& r : certificates.results) {
        json c;
        c["criterion"] = r.criterion;
        c["verdict"] = verdict_name(r.verdict);
        if (r.witness) c["witness"] = witness_to_json(inst, *r.witness);
        if (!r.note.empty()) c["note"] = r.note;
        certs.push_back(std::move(c));
    }
    j["certificates"] = std::move(certs);

    j["round_counts"] = {
        {"init_transfer_rounds", result.init_transfer_rounds},
        {"price_rise_rounds", result.price_rise_rounds},
        {"transfer_rounds", result.transfer_rounds},
        {"init_round_budget", init_round_budget(inst)},
        {"realloc_round_budget", realloc_round_budget(inst)},
    };
    j["terminated_at"] = result.terminated_at == Termination::early_return ? "early-return"
                                                                           : "groups-exhausted";
    json groups = json::array();
    for (int g = 0; g < result.groups.count(); ++g) {
        json members = json::array();
        for (int i : result.groups.members[g]) members.push_back(inst.agent_ids[i]);
        groups.push_back(json{{"members", std::move(members)},
                              {"representative", inst.agent_ids[result.groups.representative[g]]}});
    }
    j["groups"] = std::move(groups);

    json tie;
    tie["welfare_max"] = "lowest-index high valuer; consistently small goods to the first agent";
    tie["path"] = "ascending BFS from the lowest-metric start";
    tie["good"] = "minimum price, then lowest good index";
    tie["agent"] = "lowest index";
    json overrides = json::object();
    for (const auto& [good, agent] : owner_override)
        overrides[inst.good_ids[good]] = inst.agent_ids[agent];
    tie["owner_override"] = std::move(overrides);
    j["tie_break"] = std::move(tie);

    if (include_trace) {
        json trace = json::array();
        for (const auto& row : result.trace.rounds) trace.push_back(round_to_json(inst, row));
        j["trace"] = std::move(trace);
        j["initial_prices"] = prices_to_json(inst, result.trace.p0);
        j["initial_allocation"] = allocation_to_json(inst, result.trace.x0);
    }
    return j;
}

LoadedResult result_from_json(const Instance& inst, const json& j) {
    try {
        LoadedResult out;
        out.mode = j.at("mode").get<std::string>();

        std::vector<int> owner(inst.m, -1);
        for (const auto& [agent_id, goods] : j.at("allocation").items()) {
            const int i = agent_index(inst, agent_id);
            for (const auto& g : goods) {
                const int e = good_index(inst, g.get<std::string>());
                if (owner[e] != -1) fail(Errc::parse_error, "good allocated twice in result");
                owner[e] = i;
            }
        }
        for (int e = 0; e < inst.m; ++e)
            if (owner[e] < 0)
                fail(Errc::parse_error, "good '" + inst.good_ids[e] + "' missing from result");
        out.alloc = Allocation(std::move(owner));

        out.price.assign(inst.m, Rational(1));
        const auto& prices = j.at("prices");
        if (static_cast<int>(prices.size()) != inst.m)
            fail(Errc::parse_error, "price map does not match the goods");
        for (const auto& [good_id, p] : prices.items())
            out.price[good_index(inst, good_id)] = Rational::parse(p.get<std::string>());
        return out;
    } catch (const json::exception& e) {
        fail(Errc::parse_error, std::string("malformed result file: ") + e.what());
    }
}

json gm_run_to_json(const Instance& inst, const GmRun& run) {
    json j;
    switch (run.outcome) {
    case GmRun::Outcome::terminated: j["outcome"] = "terminated"; break;
    case GmRun::Outcome::cycle_detected: j["outcome"] = "cycle-detected"; break;
    case GmRun::Outcome::budget_exhausted: j["outcome"] = "budget-exhausted"; break;
    }
    j["steps"] = run.steps;
    if (run.cycle)
        j["cycle"] = {{"t1", run.cycle->t1}, {"t2", run.cycle->t2}, {"scale", run.cycle->scale.str()}};
    json states = json::array();
    for (size_t t = 0; t < run.states.size(); ++t)
        states.push_back(json{{"t", t},
                              {"allocation", allocation_to_json(inst, run.states[t].alloc)},
                              {"prices", prices_to_json(inst, run.states[t].price)}});
    j["states"] = std::move(states);
    json log = json::array();
    for (const auto& entry : run.log) {
        json s;
        s["step"] = entry.step;
        s["least_spender"] =
            entry.least_spender >= 0 ? json(inst.agent_ids[entry.least_spender]) : json();
        s["returned"] = entry.returned;
        s["transfers"] = json::array();
        for (const auto& tr : entry.transfers)
            s["transfers"].push_back(json{{"from", inst.agent_ids[tr.from]},
                                          {"to", inst.agent_ids[tr.to]},
                                          {"good", inst.good_ids[tr.good]}});
        s["raised_goods"] = json::array();
        for (int e : entry.raised_goods) s["raised_goods"].push_back(inst.good_ids[e]);
        log.push_back(std::move(s));
    }
    j["log"] = std::move(log);
    return j;
}

} // namespace fairdiv
