#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace ofqn_cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
}

void reject_unknown_keys(const json& obj, const std::string& section, const std::set<std::string>& known) {
    for (const auto& item : obj.items())
        if (!known.count(item.key())) bad(section + "." + item.key(), "unknown key");
}

const json& object_at(const json& doc, const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_object()) bad(key, "expected an object");
    return v;
}

double number_at(const json& obj, const std::string& key, const std::string& field) {
    const json& v = obj.at(key);
    if (!v.is_number()) bad(field, "expected a number");
    return v.get<double>();
}

template <class Int>
Int unsigned_at(const json& obj, const std::string& key, const std::string& field) {
    const json& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        bad(field, "expected a non-negative integer");
    return v.get<Int>();
}

// Exactly one of `<name>` (per second) or `<name>_us` (service time in us),
// where `alias` is an accepted short spelling of `name`.
std::optional<ServiceRate> rate_at(const json& obj, const std::string& name, const std::string& alias,
                                   const std::string& section) {
    std::vector<std::string> given;
    for (const auto& key : {name, alias, name + "_us", alias + "_us"})
        if (obj.contains(key)) given.push_back(key);
    if (given.empty()) return std::nullopt;
    if (given.size() > 1)
        bad(section + "." + given[1], "conflicts with " + given[0] + "; give exactly one rate or service time");
    const std::string& key = given.front();
    const double v = number_at(obj, key, section + "." + key);
    if (!(v > 0.0)) bad(section + "." + key, "must be positive");
    const bool service_time = key.size() > 3 && key.compare(key.size() - 3, 3, "_us") == 0;
    return service_time ? ServiceRate::service_time_us(v) : ServiceRate::per_second(v);
}

void put_rate(json& obj, const std::string& name, const ServiceRate& r) {
    if (r.unit == ServiceRate::Unit::PerSecond)
        obj[name] = r.value;
    else
        obj[name + "_us"] = r.value;
}

NodeConfig node_from_json(const json& obj, const std::string& section) {
    if (!obj.is_object()) bad(section, "expected an object");
    reject_unknown_keys(obj, section, {"lambda", "q_nf", "mu_switch", "mu_switch_us", "mu_l", "mu_l_us"});
    NodeConfig n;
    if (obj.contains("lambda")) {
        n.lambda = number_at(obj, "lambda", section + ".lambda");
        if (!(*n.lambda > 0.0)) bad(section + ".lambda", "must be positive");
    }
    if (obj.contains("q_nf")) {
        n.q_nf = number_at(obj, "q_nf", section + ".q_nf");
        if (!(n.q_nf >= 0.0 && n.q_nf <= 1.0)) bad(section + ".q_nf", "must lie in [0, 1]");
    }
    if (auto r = rate_at(obj, "mu_switch", "mu_l", section)) n.mu_switch = *r;
    return n;
}

json node_to_json(const NodeConfig& n) {
    json obj = json::object();
    if (n.lambda) obj["lambda"] = *n.lambda;
    obj["q_nf"] = n.q_nf;
    put_rate(obj, "mu_switch", n.mu_switch);
    return obj;
}

} // namespace

std::uint64_t default_seed() {
    const char* env = std::getenv("OFQN_SEED");
    if (env == nullptr || *env == '\0') return 1;
    std::uint64_t seed = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, seed);
    if (res.ec != std::errc() || res.ptr != end) throw ConfigError("OFQN_SEED must be an unsigned integer");
    return seed;
}

RunConfig default_config() {
    RunConfig cfg;
    cfg.sim.seed = default_seed();
    return cfg;
}

RunConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown_keys(doc, "config", {"node", "chain", "controller", "sim", "sweep", "output"});
    if (doc.contains("node") && doc.contains("chain")) bad("chain", "give either node or chain, not both");

    RunConfig cfg = default_config();
    try {
        if (doc.contains("node")) cfg.node = node_from_json(doc.at("node"), "node");
        if (doc.contains("chain")) {
            const json& chain = doc.at("chain");
            if (!chain.is_array() || chain.empty()) bad("chain", "expected a non-empty array of nodes");
            for (std::size_t i = 0; i < chain.size(); ++i)
                cfg.chain.push_back(node_from_json(chain[i], "chain[" + std::to_string(i) + "]"));
        }
        if (doc.contains("controller")) {
            const json& c = object_at(doc, "controller");
            reject_unknown_keys(c, "controller", {"mu_controller", "mu_controller_us", "mu_c", "mu_c_us"});
            if (auto r = rate_at(c, "mu_controller", "mu_c", "controller")) cfg.controller.mu_controller = *r;
        }
        if (doc.contains("sim")) {
            const json& s = object_at(doc, "sim");
            reject_unknown_keys(s, "sim",
                                {"seed", "packets_per_replication", "replications", "warmup_fraction", "sample_cap"});
            if (s.contains("seed")) cfg.sim.seed = unsigned_at<std::uint64_t>(s, "seed", "sim.seed");
            if (s.contains("packets_per_replication"))
                cfg.sim.packets_per_replication =
                    unsigned_at<std::uint64_t>(s, "packets_per_replication", "sim.packets_per_replication");
            if (s.contains("replications"))
                cfg.sim.replications = unsigned_at<std::uint32_t>(s, "replications", "sim.replications");
            if (s.contains("warmup_fraction"))
                cfg.sim.warmup_fraction = number_at(s, "warmup_fraction", "sim.warmup_fraction");
            if (s.contains("sample_cap"))
                cfg.sim.sample_cap = unsigned_at<std::uint64_t>(s, "sample_cap", "sim.sample_cap");
        }
        if (doc.contains("sweep")) {
            const json& s = object_at(doc, "sweep");
            reject_unknown_keys(s, "sweep", {"variable", "grid", "outputs", "delay_bound", "deadline"});
            if (s.contains("variable")) {
                if (!s.at("variable").is_string()) bad("sweep.variable", "expected a string");
                cfg.sweep.variable = s.at("variable").get<std::string>();
            }
            if (s.contains("grid")) {
                const json& g = s.at("grid");
                if (g.is_array()) {
                    cfg.sweep.grid.clear();
                    for (const auto& v : g) {
                        if (!v.is_number()) bad("sweep.grid", "expected numbers");
                        cfg.sweep.grid.push_back(v.get<double>());
                    }
                } else if (g.is_object()) {
                    reject_unknown_keys(g, "sweep.grid", {"from", "to", "step"});
                    cfg.sweep.grid = expand_range(number_at(g, "from", "sweep.grid.from"),
                                                  number_at(g, "to", "sweep.grid.to"),
                                                  number_at(g, "step", "sweep.grid.step"), "sweep.grid");
                } else {
                    bad("sweep.grid", "expected an array or {from, to, step}");
                }
            }
            if (s.contains("outputs")) {
                const json& o = s.at("outputs");
                if (!o.is_array()) bad("sweep.outputs", "expected an array of names");
                cfg.sweep.outputs.clear();
                for (const auto& v : o) {
                    if (!v.is_string()) bad("sweep.outputs", "expected strings");
                    cfg.sweep.outputs.push_back(v.get<std::string>());
                }
            }
            if (s.contains("delay_bound")) cfg.sweep.delay_bound = number_at(s, "delay_bound", "sweep.delay_bound");
            if (s.contains("deadline")) cfg.sweep.deadline = number_at(s, "deadline", "sweep.deadline");
        }
        if (doc.contains("output")) {
            const json& o = object_at(doc, "output");
            reject_unknown_keys(o, "output", {"path", "format"});
            if (o.contains("path")) {
                if (!o.at("path").is_string()) bad("output.path", "expected a string");
                cfg.output.path = o.at("path").get<std::string>();
            }
            if (o.contains("format")) {
                if (!o.at("format").is_string()) bad("output.format", "expected a string");
                cfg.output.format = o.at("format").get<std::string>();
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (cfg.output.format != "csv" && cfg.output.format != "json")
        bad("output.format", "expected csv or json");
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json doc = json::object();
    if (cfg.chain.empty()) {
        doc["node"] = node_to_json(cfg.node);
    } else {
        doc["chain"] = json::array();
        for (const auto& n : cfg.chain) doc["chain"].push_back(node_to_json(n));
    }
    doc["controller"] = json::object();
    put_rate(doc["controller"], "mu_controller", cfg.controller.mu_controller);
    doc["sim"] = {{"seed", cfg.sim.seed},
                  {"packets_per_replication", cfg.sim.packets_per_replication},
                  {"replications", cfg.sim.replications},
                  {"warmup_fraction", cfg.sim.warmup_fraction},
                  {"sample_cap", cfg.sim.sample_cap}};
    json sweep = {{"variable", cfg.sweep.variable},
                  {"grid", cfg.sweep.grid},
                  {"outputs", cfg.sweep.outputs},
                  {"deadline", cfg.sweep.deadline}};
    if (cfg.sweep.delay_bound) sweep["delay_bound"] = *cfg.sweep.delay_bound;
    doc["sweep"] = std::move(sweep);
    doc["output"] = {{"path", cfg.output.path}, {"format", cfg.output.format}};
    return doc;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(doc);
}

std::vector<double> parse_number_list(const std::string& text, const std::string& field) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first == std::string::npos) bad(field, "empty list entry");
        item = item.substr(first, last - first + 1);
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc() || res.ptr != item.data() + item.size()) bad(field, "'" + item + "' is not a number");
        values.push_back(v);
    }
    if (values.empty()) bad(field, "empty list");
    return values;
}

std::vector<double> expand_range(double from, double to, double step, const std::string& field) {
    if (!(step > 0.0)) bad(field, "step must be positive");
    if (to < from) bad(field, "to must not be below from");
    std::vector<double> g;
    for (int i = 0;; ++i) {
        const double raw = from + step * i;
        if (raw > to + 1e-9 * std::max(1.0, std::abs(to))) break;
        // Drop accumulated binary noise so 0.1:0.9:0.1 yields 0.3, not 0.30000000000000004.
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", raw);
        g.push_back(std::strtod(buf, nullptr));
    }
    return g;
}

} // namespace ofqn_cli
