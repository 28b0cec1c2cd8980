#pragma once

#include "longhot/env.hpp"

#include "json.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace longhot {

struct InvalidTrace : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One record per executed step. Serialized as JSONL with sorted keys so
// replay diffs are stable byte-for-byte.
struct TraceRecord {
    int t = 0;
    Action action = Action::Forward;
    Pose pose;                 // after the action
    bool holds_container = false;
    std::vector<int> held;      // sorted target ids
    std::vector<int> delivered; // sorted target ids
    double reward_explore = 0.0;
    double reward_nav = 0.0;
    bool collided = false;
    bool done = false;
    Termination reason = Termination::None;
    std::string subtask; // active high-level subtask tag, e.g. "explore#3"
};

inline TraceRecord make_trace_record(int t, Action action, const EnvState& state, bool done,
                                     Termination reason) {
    TraceRecord r;
    r.t = t;
    r.action = action;
    r.pose = state.pose;
    r.holds_container = state.hand.holds_container;
    r.held.assign(state.hand.held_targets.begin(), state.hand.held_targets.end());
    r.delivered.assign(state.goal_state.delivered.begin(), state.goal_state.delivered.end());
    r.collided = state.collided_last;
    r.done = done;
    r.reason = reason;
    return r;
}

inline nlohmann::json trace_record_to_json(const TraceRecord& r) {
    return {
        {"action", to_string(r.action)},
        {"collided", r.collided},
        {"delivered", r.delivered},
        {"done", r.done},
        {"heading", r.pose.heading_deg},
        {"held", r.held},
        {"holds_container", r.holds_container},
        {"r_explore", r.reward_explore},
        {"r_nav", r.reward_nav},
        {"reason", to_string(r.reason)},
        {"subtask", r.subtask},
        {"t", r.t},
        {"x", r.pose.position.x},
        {"y", r.pose.position.y},
    };
}

inline TraceRecord trace_record_from_json(const nlohmann::json& j) {
    TraceRecord r;
    r.t = j.at("t").get<int>();
    r.action = action_from_string(j.at("action").get<std::string>());
    r.pose.position = {j.at("x").get<double>(), j.at("y").get<double>()};
    r.pose.heading_deg = j.at("heading").get<int>();
    r.holds_container = j.at("holds_container").get<bool>();
    r.held = j.at("held").get<std::vector<int>>();
    r.delivered = j.at("delivered").get<std::vector<int>>();
    r.reward_explore = j.at("r_explore").get<double>();
    r.reward_nav = j.at("r_nav").get<double>();
    r.collided = j.at("collided").get<bool>();
    r.done = j.at("done").get<bool>();
    r.reason = termination_from_string(j.at("reason").get<std::string>());
    r.subtask = j.value("subtask", "");
    return r;
}

inline std::string trace_to_jsonl(const std::vector<TraceRecord>& trace) {
    std::string out;
    for (const auto& r : trace) {
        out += trace_record_to_json(r).dump();
        out += '\n';
    }
    return out;
}

inline std::vector<TraceRecord> trace_from_jsonl(const std::string& text) {
    std::vector<TraceRecord> trace;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        try {
            trace.push_back(trace_record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw InvalidTrace(std::string("trace parse error: ") + e.what());
        }
    }
    return trace;
}

inline void save_trace(const std::vector<TraceRecord>& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidTrace("cannot open for write: " + path);
    out << trace_to_jsonl(trace);
}

inline std::vector<TraceRecord> load_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidTrace("cannot open trace file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return trace_from_jsonl(text);
}

} // namespace longhot
