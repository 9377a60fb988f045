#include "vdtp/scenario.hpp"

#include <algorithm>
#include <utility>

#include <json.hpp>

namespace vdtp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ScenarioError("scenario: " + msg); }

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* k) { return item.key() == k; });
        if (!known) fail("unknown key '" + item.key() + "' in " + where);
    }
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where + " must be a number");
    return v.get<double>();
}

uint64_t as_count(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<uint64_t>();
    if (v.is_number_integer() && v.get<int64_t>() >= 0) {
        return static_cast<uint64_t>(v.get<int64_t>());
    }
    fail(where + " must be a non-negative integer");
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where + " must be a string");
    return v.get<std::string>();
}

const json& as_object(const json& v, const std::string& where) {
    if (!v.is_object()) fail(where + " must be an object");
    return v;
}

const json& as_array(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where + " must be an array");
    return v;
}

ProtocolConfig parse_config(const json& v, const std::string& where) {
    as_object(v, where);
    check_keys(v, where, {"name", "chunk_size", "retransmission_time", "max_attempts"});
    if (!v.contains("name")) fail(where + " needs a name");
    ProtocolConfig c;
    c.name = as_string(v.at("name"), where + ".name");
    if (v.contains("chunk_size")) {
        c.chunk_size = static_cast<uint32_t>(as_count(v.at("chunk_size"), where + ".chunk_size"));
    }
    if (v.contains("retransmission_time")) {
        c.retransmission_time = as_number(v.at("retransmission_time"),
                                          where + ".retransmission_time");
    }
    if (v.contains("max_attempts")) {
        c.max_attempts = static_cast<uint32_t>(as_count(v.at("max_attempts"),
                                                        where + ".max_attempts"));
    }
    return c;
}

MobilityProfile parse_regime(const json& v, const std::string& where) {
    as_object(v, where);
    check_keys(v, where,
               {"name", "speed_min", "speed_max", "mean_distance", "distance_bounds",
                "reversion_rate", "noise_coefficient"});
    if (!v.contains("name")) fail(where + " needs a name");
    MobilityProfile m;
    m.name = as_string(v.at("name"), where + ".name");
    if (v.contains("speed_min")) m.speed_min = as_number(v.at("speed_min"), where + ".speed_min");
    if (v.contains("speed_max")) m.speed_max = as_number(v.at("speed_max"), where + ".speed_max");
    if (v.contains("mean_distance")) {
        m.mean_distance = as_number(v.at("mean_distance"), where + ".mean_distance");
    }
    if (v.contains("distance_bounds")) {
        const json& b = as_array(v.at("distance_bounds"), where + ".distance_bounds");
        if (b.size() != 2) fail(where + ".distance_bounds must be [min, max]");
        m.distance_min = as_number(b[0], where + ".distance_bounds[0]");
        m.distance_max = as_number(b[1], where + ".distance_bounds[1]");
    }
    if (v.contains("reversion_rate")) {
        m.reversion_rate = as_number(v.at("reversion_rate"), where + ".reversion_rate");
    }
    if (v.contains("noise_coefficient")) {
        m.noise_coefficient = as_number(v.at("noise_coefficient"), where + ".noise_coefficient");
    }
    return m;
}

ChannelParams parse_channel(const json& v) {
    as_object(v, "channel");
    check_keys(v, "channel",
               {"capacity", "radio_range", "base_loss", "loss_exponent", "processing_delay",
                "rng_seed"});
    ChannelParams c;
    if (v.contains("capacity")) c.capacity = as_number(v.at("capacity"), "channel.capacity");
    if (v.contains("radio_range")) {
        c.radio_range = as_number(v.at("radio_range"), "channel.radio_range");
    }
    if (v.contains("base_loss")) c.base_loss = as_number(v.at("base_loss"), "channel.base_loss");
    if (v.contains("loss_exponent")) {
        c.loss_exponent = as_number(v.at("loss_exponent"), "channel.loss_exponent");
    }
    if (v.contains("processing_delay")) {
        c.processing_delay = as_number(v.at("processing_delay"), "channel.processing_delay");
    }
    if (v.contains("rng_seed")) c.rng_seed = as_count(v.at("rng_seed"), "channel.rng_seed");
    return c;
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1;
    int col = 1;
    std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

ExperimentSpec parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        std::string msg = e.what();
        // Strip nlohmann's "[json.exception...]" prefix; the rest already
        // reads "parse error at line L, column C: ...".
        if (auto cut = msg.find("] "); cut != std::string::npos) msg = msg.substr(cut + 2);
        auto [line, col] = line_col(json_text, e.byte);
        throw ScenarioError("scenario: " + msg, line, col);
    }

    if (!doc.is_object()) fail("root must be an object");
    check_keys(doc, "scenario",
               {"configs", "file_sizes", "repetitions", "regimes", "channel", "master_seed"});

    ExperimentSpec spec;
    if (doc.contains("configs")) {
        const json& arr = as_array(doc.at("configs"), "configs");
        spec.configs.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            spec.configs.push_back(parse_config(arr[i], "configs[" + std::to_string(i) + "]"));
        }
    }
    if (doc.contains("file_sizes")) {
        const json& arr = as_array(doc.at("file_sizes"), "file_sizes");
        spec.file_sizes.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            spec.file_sizes.push_back(as_count(arr[i], "file_sizes[" + std::to_string(i) + "]"));
        }
    }
    if (doc.contains("repetitions")) {
        spec.repetitions = static_cast<int>(as_count(doc.at("repetitions"), "repetitions"));
    }
    if (doc.contains("regimes")) {
        const json& arr = as_array(doc.at("regimes"), "regimes");
        spec.regimes.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            spec.regimes.push_back(parse_regime(arr[i], "regimes[" + std::to_string(i) + "]"));
        }
    }
    if (doc.contains("channel")) spec.channel = parse_channel(doc.at("channel"));
    if (doc.contains("master_seed")) spec.master_seed = as_count(doc.at("master_seed"), "master_seed");

    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    return spec;
}

std::string default_scenario_json() {
    ExperimentSpec d;
    nlohmann::ordered_json doc;
    doc["master_seed"] = d.master_seed;
    doc["repetitions"] = d.repetitions;
    doc["file_sizes"] = d.file_sizes;
    doc["configs"] = nlohmann::ordered_json::array();
    for (const auto& c : d.configs) {
        doc["configs"].push_back({{"name", c.name},
                                  {"chunk_size", c.chunk_size},
                                  {"retransmission_time", c.retransmission_time},
                                  {"max_attempts", c.max_attempts}});
    }
    doc["regimes"] = nlohmann::ordered_json::array();
    for (const auto& m : d.regimes) {
        doc["regimes"].push_back({{"name", m.name},
                                  {"speed_min", m.speed_min},
                                  {"speed_max", m.speed_max},
                                  {"mean_distance", m.mean_distance},
                                  {"distance_bounds", {m.distance_min, m.distance_max}},
                                  {"reversion_rate", m.reversion_rate},
                                  {"noise_coefficient", m.noise_coefficient}});
    }
    doc["channel"] = {{"capacity", d.channel.capacity},
                      {"radio_range", d.channel.radio_range},
                      {"base_loss", d.channel.base_loss},
                      {"loss_exponent", d.channel.loss_exponent},
                      {"processing_delay", d.channel.processing_delay},
                      {"rng_seed", d.channel.rng_seed}};
    return doc.dump(2) + "\n";
}

}  // namespace vdtp
