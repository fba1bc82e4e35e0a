#include "saddlenode/config.hpp"
#include "saddlenode/pspace.hpp"

#include <set>
#include <stdexcept>

namespace saddlenode::config {

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("signal: unknown key '" + it.key() + "' in a '" +
                                        j.value("type", "?") + "' node");
}

double num(const json& j, const std::string& key, double dflt, bool required = false) {
    if (!j.contains(key)) {
        if (required) throw std::invalid_argument("signal: missing key '" + key + "'");
        return dflt;
    }
    if (!j[key].is_number()) throw std::invalid_argument("signal: key '" + key + "' must be a number");
    return j[key].get<double>();
}

std::vector<TimeSignal> children(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_array() || j[key].empty())
        throw std::invalid_argument("signal: '" + key + "' must be a nonempty array");
    std::vector<TimeSignal> out;
    for (const auto& c : j[key]) out.push_back(signal_from_json(c));
    return out;
}

}  // namespace

TimeSignal signal_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw std::invalid_argument("signal: expected an object with a 'type' string");
    const std::string type = j["type"].get<std::string>();

    if (type == "constant") {
        require_keys(j, {"type", "value"});
        return constant(num(j, "value", 0, true));
    }
    if (type == "sin" || type == "cos") {
        require_keys(j, {"type", "amplitude", "omega", "phase"});
        return harmonic(num(j, "amplitude", 1), num(j, "omega", 1, true), num(j, "phase", 0),
                        type == "sin" ? Waveform::sine : Waveform::cosine);
    }
    if (type == "sum" || type == "product") {
        require_keys(j, {"type", type == "sum" ? "terms" : "factors"});
        auto cs = children(j, type == "sum" ? "terms" : "factors");
        TimeSignal acc = cs[0];
        for (std::size_t i = 1; i < cs.size(); ++i)
            acc = type == "sum" ? sum(acc, cs[i]) : product(acc, cs[i]);
        return acc;
    }
    if (type == "scale_add") {
        require_keys(j, {"type", "signal", "scale", "offset"});
        if (!j.contains("signal")) throw std::invalid_argument("signal: scale_add needs 'signal'");
        return scale_add(signal_from_json(j["signal"]), num(j, "scale", 1), num(j, "offset", 0));
    }
    if (type == "spline_bump") {
        require_keys(j, {"type"});
        return spline_bump();
    }
    if (type == "bump_train") {
        require_keys(j, {"type", "first"});
        return bump_train((int)num(j, "first", 2));
    }
    if (type == "plateau_hat") {
        require_keys(j, {"type", "k"});
        return plateau_hat(num(j, "k", 0, true));
    }
    if (type == "arctan_blend") {
        require_keys(j, {"type", "base", "target", "steepness"});
        if (!j.contains("base")) throw std::invalid_argument("signal: arctan_blend needs 'base'");
        return arctan_blend(signal_from_json(j["base"]), num(j, "target", 0, true),
                            num(j, "steepness", 0, true));
    }
    if (type == "shift") {
        require_keys(j, {"type", "signal", "by"});
        if (!j.contains("signal")) throw std::invalid_argument("signal: shift needs 'signal'");
        return shift(signal_from_json(j["signal"]), num(j, "by", 0, true));
    }
    if (type == "gaussian_factor") {
        require_keys(j, {"type", "a", "c"});
        return gaussian_factor(num(j, "a", 0, true), num(j, "c", 0, true));
    }
    if (type == "dense_orbit") {
        require_keys(j, {"type", "seeds", "k1", "k2"});
        PSpaceParams params{num(j, "k1", 1), num(j, "k2", 1)};
        return dense_orbit(children(j, "seeds"), params);
    }
    throw std::invalid_argument("signal: unknown type '" + type + "'");
}

json signal_to_json(const TimeSignal& s) {
    const SignalInfo info = describe(s);
    json j;
    j["type"] = info.kind;
    for (const auto& [name, value] : info.params) j[name] = value;
    if (!info.children.empty()) {
        std::string key = "children";
        if (info.kind == "sum") key = "terms";
        else if (info.kind == "product") key = "factors";
        else if (info.kind == "scale_add" || info.kind == "shift") key = "signal";
        else if (info.kind == "arctan_blend") key = "base";
        else if (info.kind == "dense_orbit") key = "seeds";
        if (key == "signal" || key == "base") {
            j[key] = signal_to_json(info.children[0]);
        } else {
            j[key] = json::array();
            for (const auto& c : info.children) j[key].push_back(signal_to_json(c));
        }
    }
    return j;
}

}  // namespace saddlenode::config
