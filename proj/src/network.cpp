#include "timesym/network.hpp"

#include <cmath>
#include <numbers>

#include "timesym/error.hpp"

namespace timesym {

using nlohmann::json;

std::string_view to_string(ElementKind kind) {
    switch (kind) {
    case ElementKind::Source:
        return "source";
    case ElementKind::BeamSplitter:
        return "beamsplitter";
    case ElementKind::Mirror:
        return "mirror";
    case ElementKind::Detector:
        return "detector";
    }
    return "?";
}

Element Element::beamsplitter(Label u, Label v, Label x, Label y, std::string label) {
    return {ElementKind::BeamSplitter, {std::move(u), std::move(v)}, {std::move(x), std::move(y)},
            std::move(label)};
}

Element Element::mirror(Label in, Label out, std::string label) {
    return {ElementKind::Mirror, {std::move(in)}, {std::move(out)}, std::move(label)};
}

Element Element::source(Label mode) { return {ElementKind::Source, {}, {std::move(mode)}, {}}; }

Element Element::detector(Label mode) { return {ElementKind::Detector, {mode}, {mode}, {}}; }

// ---------------------------------------------------------------------------
// Config parsing

namespace {

void reject_unknown_keys(const json &obj, std::initializer_list<std::string_view> allowed,
                         const std::string &where) {
    for (const auto &[key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed)
            known = known || key == a;
        if (!known)
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

const json &require(const json &obj, const char *key, const std::string &where) {
    if (!obj.contains(key))
        throw ConfigError("missing key '" + std::string(key) + "' in " + where);
    return obj.at(key);
}

Label string_of(const json &value, const std::string &where) {
    if (!value.is_string())
        throw ConfigError("expected a string in " + where);
    return value.get<std::string>();
}

std::vector<Label> string_pair(const json &value, const std::string &where) {
    if (!value.is_array() || value.size() != 2)
        throw ConfigError("expected a two-element list in " + where);
    return {string_of(value[0], where), string_of(value[1], where)};
}

Element parse_element(const json &obj, const std::string &where,
                      std::map<Label, std::string> &detector_names) {
    if (!obj.is_object())
        throw ConfigError("element must be an object in " + where);
    const std::string type = string_of(require(obj, "type", where), where + ".type");
    if (type == "beamsplitter") {
        reject_unknown_keys(obj, {"type", "in", "out", "label"}, where);
        auto in = string_pair(require(obj, "in", where), where + ".in");
        auto out = string_pair(require(obj, "out", where), where + ".out");
        std::string label = obj.contains("label") ? string_of(obj["label"], where) : "";
        return Element::beamsplitter(in[0], in[1], out[0], out[1], label);
    }
    if (type == "mirror") {
        reject_unknown_keys(obj, {"type", "in", "out", "label"}, where);
        std::string label = obj.contains("label") ? string_of(obj["label"], where) : "";
        return Element::mirror(string_of(require(obj, "in", where), where + ".in"),
                               string_of(require(obj, "out", where), where + ".out"), label);
    }
    if (type == "source") {
        reject_unknown_keys(obj, {"type", "mode"}, where);
        return Element::source(string_of(require(obj, "mode", where), where + ".mode"));
    }
    if (type == "detector") {
        reject_unknown_keys(obj, {"type", "mode", "name"}, where);
        Label mode = string_of(require(obj, "mode", where), where + ".mode");
        if (obj.contains("name")) {
            std::string name = string_of(obj["name"], where + ".name");
            auto [it, inserted] = detector_names.emplace(mode, name);
            if (!inserted && it->second != name)
                throw ConfigError("detector on mode '" + mode + "' named both '" + it->second +
                                  "' and '" + name + "'");
        }
        return Element::detector(mode);
    }
    throw ConfigError("unknown element type '" + type + "' in " + where);
}

} // namespace

NetworkConfig parse_network_config(const json &doc) {
    if (!doc.is_object())
        throw ConfigError("network config must be a JSON object");
    reject_unknown_keys(doc, {"modes", "stages", "detectors"}, "network config");

    NetworkConfig config;
    const json &modes = require(doc, "modes", "network config");
    if (!modes.is_array())
        throw ConfigError("'modes' must be a list");
    for (const auto &m : modes)
        config.modes.push_back(string_of(m, "modes"));

    if (doc.contains("detectors")) {
        const json &dets = doc["detectors"];
        if (!dets.is_object())
            throw ConfigError("'detectors' must be a map from mode to name");
        for (const auto &[mode, name] : dets.items())
            config.detectors[mode] = string_of(name, "detectors." + mode);
    }

    const json &stages = require(doc, "stages", "network config");
    if (!stages.is_array())
        throw ConfigError("'stages' must be a list");
    for (std::size_t k = 0; k < stages.size(); ++k) {
        const std::string where = "stages[" + std::to_string(k) + "]";
        const json &stage = stages[k];
        if (!stage.is_object())
            throw ConfigError(where + " must be an object");
        reject_unknown_keys(stage, {"elements", "label"}, where);
        Stage parsed;
        if (stage.contains("label"))
            parsed.label = string_of(stage["label"], where + ".label");
        const json &elements = require(stage, "elements", where);
        if (!elements.is_array())
            throw ConfigError(where + ".elements must be a list");
        for (std::size_t e = 0; e < elements.size(); ++e)
            parsed.elements.push_back(parse_element(
                elements[e], where + ".elements[" + std::to_string(e) + "]", config.detectors));
        config.stages.push_back(std::move(parsed));
    }
    return config;
}

NetworkConfig parse_network_config_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("network config is not valid JSON: ") + e.what());
    }
    return parse_network_config(doc);
}

json network_config_to_json(const NetworkConfig &config) {
    json stages = json::array();
    for (const auto &stage : config.stages) {
        json elements = json::array();
        for (const auto &el : stage.elements) {
            json obj{{"type", std::string(to_string(el.kind))}};
            switch (el.kind) {
            case ElementKind::BeamSplitter:
                obj["in"] = el.inputs;
                obj["out"] = el.outputs;
                break;
            case ElementKind::Mirror:
                obj["in"] = el.inputs[0];
                obj["out"] = el.outputs[0];
                break;
            case ElementKind::Source:
                obj["mode"] = el.outputs[0];
                break;
            case ElementKind::Detector:
                obj["mode"] = el.inputs[0];
                break;
            }
            if (!el.label.empty())
                obj["label"] = el.label;
            elements.push_back(std::move(obj));
        }
        json s{{"elements", std::move(elements)}};
        if (!stage.label.empty())
            s["label"] = stage.label;
        stages.push_back(std::move(s));
    }
    json out{{"modes", config.modes}, {"stages", std::move(stages)}};
    if (!config.detectors.empty())
        out["detectors"] = config.detectors;
    return out;
}

// ---------------------------------------------------------------------------
// Validation and compilation

namespace {

std::string stage_name(std::size_t k, const Stage &stage) {
    std::string out = "stage " + std::to_string(k);
    if (!stage.label.empty())
        out += " (" + stage.label + ")";
    return out;
}

LinearOp compile_stage(const Stage &stage, const Basis &before, const Basis &after) {
    const double h = 1.0 / std::numbers::sqrt2;
    const Amplitude ih{0.0, h};
    LinearOp op(before, after);
    Basis touched;
    for (const auto &el : stage.elements) {
        for (const auto &m : el.inputs)
            touched.insert(m);
        switch (el.kind) {
        case ElementKind::BeamSplitter: {
            const auto &u = el.inputs[0];
            const auto &v = el.inputs[1];
            const auto &x = el.outputs[0];
            const auto &y = el.outputs[1];
            op.set(x, u, h);
            op.set(y, u, ih);
            op.set(x, v, ih);
            op.set(y, v, h);
            break;
        }
        case ElementKind::Mirror:
        case ElementKind::Detector:
            op.set(el.outputs[0], el.inputs[0], 1.0);
            break;
        case ElementKind::Source:
            // New mode enters empty.
            break;
        }
    }
    for (const auto &m : before)
        if (!touched.contains(m))
            op.set(m, m, 1.0);
    return op;
}

} // namespace

Network build_network(const NetworkConfig &config) {
    Network net;
    net.config_ = config;

    for (const auto &m : config.modes) {
        if (m.empty())
            throw ConfigError("empty mode label");
        if (!net.modes_.insert(m).second)
            throw ConfigError("mode '" + m + "' declared twice");
    }
    for (const auto &[mode, name] : config.detectors)
        if (!net.modes_.contains(mode))
            throw ConfigError("detector on undeclared mode '" + mode + "'");

    // Live modes at cut 0 are the inputs of the first stage: those are the
    // implicit sources. Later stages may only consume live modes.
    Basis live;
    if (!config.stages.empty())
        for (const auto &el : config.stages.front().elements)
            for (const auto &m : el.inputs)
                live.insert(m);

    // Number of elements traversed by the packet currently in each mode.
    std::map<Label, int> depth;
    for (const auto &m : live)
        depth[m] = 0;

    net.live_.push_back(live);
    for (std::size_t k = 0; k < config.stages.size(); ++k) {
        const Stage &stage = config.stages[k];
        const std::string where = stage_name(k, stage);

        Basis seen;
        Basis consumed;
        Basis produced;
        for (const auto &el : stage.elements) {
            Basis ports;
            for (const auto &m : el.inputs)
                ports.insert(m);
            for (const auto &m : el.outputs)
                ports.insert(m);
            if (el.kind == ElementKind::BeamSplitter && ports.size() != 4)
                throw ConfigError("beamsplitter ports are not pairwise distinct in " + where);
            for (const auto &m : ports) {
                if (!net.modes_.contains(m))
                    throw ConfigError("undeclared mode '" + m + "' in " + where);
                if (!seen.insert(m).second)
                    throw ConfigError("duplicate mode '" + m + "' in " + where);
            }
            for (const auto &m : el.inputs) {
                if (!live.contains(m))
                    throw ConfigError("mode consumed but never produced: '" + m + "' in " + where);
                consumed.insert(m);
            }
            for (const auto &m : el.outputs)
                produced.insert(m);
        }

        Basis next;
        for (const auto &m : live)
            if (!consumed.contains(m))
                next.insert(m);
        for (const auto &m : produced)
            if (!next.insert(m).second)
                throw ConfigError("mode '" + m + "' produced in " + where + " is already live");

        for (const auto &el : stage.elements) {
            switch (el.kind) {
            case ElementKind::BeamSplitter: {
                const int du = depth.at(el.inputs[0]);
                const int dv = depth.at(el.inputs[1]);
                if (du != dv)
                    throw ConfigError("unbalanced arms: '" + el.inputs[0] + "' (depth " +
                                      std::to_string(du) + ") and '" + el.inputs[1] + "' (depth " +
                                      std::to_string(dv) + ") merge in " + where);
                for (const auto &m : el.inputs)
                    depth.erase(m);
                for (const auto &m : el.outputs)
                    depth[m] = du + 1;
                break;
            }
            case ElementKind::Mirror:
            case ElementKind::Detector: {
                const int d = depth.at(el.inputs[0]);
                depth.erase(el.inputs[0]);
                depth[el.outputs[0]] = d + 1;
                break;
            }
            case ElementKind::Source:
                depth[el.outputs[0]] = 0;
                break;
            }
        }

        net.unitaries_.push_back(compile_stage(stage, live, next));
        live = std::move(next);
        net.live_.push_back(live);
    }

    for (const auto &[mode, name] : config.detectors)
        if (!live.contains(mode))
            throw ConfigError("detector mode '" + mode + "' is not live at the final cut");

    net.stages_ = config.stages;
    net.detectors_ = config.detectors;
    return net;
}

Network build_network(const json &doc) { return build_network(parse_network_config(doc)); }

// ---------------------------------------------------------------------------
// Queries and evolution

void Network::check_cut(Cut cut) const {
    if (cut.index > stages_.size())
        throw DomainError("cut " + std::to_string(cut.index) + " out of range [0, " +
                          std::to_string(stages_.size()) + "]");
}

const Basis &Network::live_modes(Cut cut) const {
    check_cut(cut);
    return live_[cut.index];
}

const LinearOp &Network::stage_unitary(std::size_t stage) const {
    if (stage >= unitaries_.size())
        throw DomainError("stage " + std::to_string(stage) + " out of range");
    return unitaries_[stage];
}

namespace {

template <class Tag> void require_live(const LabeledVector<Tag> &state, const Basis &live, Cut cut) {
    for (const auto &[label, amp] : state.entries())
        if (!live.contains(label))
            throw DimensionError("state component '" + label + "' is not live at cut " +
                                 std::to_string(cut.index));
}

} // namespace

Ket Network::evolve(const Ket &state, Cut from, Cut to) const {
    check_cut(from);
    check_cut(to);
    if (from > to)
        throw DomainError("kets evolve forward: from cut must not exceed to cut");
    require_live(state, live_[from.index], from);
    Ket out = state;
    for (std::size_t k = from.index; k < to.index; ++k)
        out = apply(unitaries_[k], out);
    return out;
}

Bra Network::evolve(const Bra &state, Cut from, Cut to) const {
    check_cut(from);
    check_cut(to);
    if (from < to)
        throw DomainError("bras evolve backward: from cut must not be below to cut");
    require_live(state, live_[from.index], from);
    Bra out = state;
    for (std::size_t k = from.index; k > to.index; --k)
        out = apply_dual(out, unitaries_[k - 1]);
    return out;
}

std::vector<Ket> Network::forward_history(const Ket &initial) const {
    require_live(initial, live_.front(), Cut{0});
    std::vector<Ket> out{initial};
    for (const auto &u : unitaries_)
        out.push_back(apply(u, out.back()));
    return out;
}

std::vector<Bra> Network::backward_history(const Bra &final_state) const {
    require_live(final_state, live_.back(), final_cut());
    std::vector<Bra> out(live_.size());
    out.back() = final_state;
    for (std::size_t k = unitaries_.size(); k > 0; --k)
        out[k - 1] = apply_dual(out[k], unitaries_[k - 1]);
    return out;
}

std::optional<std::size_t> Network::element_consuming(std::size_t stage, const Label &mode) const {
    const auto &elements = stages_.at(stage).elements;
    for (std::size_t e = 0; e < elements.size(); ++e)
        for (const auto &m : elements[e].inputs)
            if (m == mode)
                return e;
    return std::nullopt;
}

std::optional<std::size_t> Network::element_producing(std::size_t stage, const Label &mode) const {
    const auto &elements = stages_.at(stage).elements;
    for (std::size_t e = 0; e < elements.size(); ++e)
        for (const auto &m : elements[e].outputs)
            if (m == mode)
                return e;
    return std::nullopt;
}

std::vector<Cut> Network::interior_cuts() const {
    std::optional<std::size_t> first;
    std::optional<std::size_t> last;
    for (std::size_t k = 0; k < stages_.size(); ++k)
        for (const auto &el : stages_[k].elements)
            if (el.kind == ElementKind::BeamSplitter) {
                if (!first)
                    first = k;
                last = k;
            }
    std::vector<Cut> out;
    if (!first)
        return out;
    for (std::size_t c = *first + 1; c <= *last; ++c)
        out.push_back(Cut{c});
    return out;
}

std::string Network::terminal_name(const Label &mode) const {
    auto it = detectors_.find(mode);
    return it == detectors_.end() ? mode : it->second;
}

// ---------------------------------------------------------------------------
// Preset

std::string_view preset_double_mz_text() {
    return R"({
  "modes": ["a", "b", "c", "d", "e", "f", "g", "h"],
  "stages": [
    {"label": "BS1", "elements": [
      {"type": "beamsplitter", "in": ["a", "b"], "out": ["c", "d"], "label": "BS1"}]},
    {"label": "mirrors c,d", "elements": [
      {"type": "mirror", "in": "c", "out": "c"},
      {"type": "mirror", "in": "d", "out": "d"}]},
    {"label": "BS2", "elements": [
      {"type": "beamsplitter", "in": ["d", "c"], "out": ["e", "f"], "label": "BS2"}]},
    {"label": "mirrors e,f", "elements": [
      {"type": "mirror", "in": "e", "out": "e"},
      {"type": "mirror", "in": "f", "out": "f"}]},
    {"label": "BS3", "elements": [
      {"type": "beamsplitter", "in": ["f", "e"], "out": ["g", "h"], "label": "BS3"}]},
    {"label": "detectors", "elements": [
      {"type": "detector", "mode": "g"},
      {"type": "detector", "mode": "h"}]}
  ],
  "detectors": {"g": "G", "h": "H"}
}
)";
}

const Network &preset_double_mz() {
    static const Network net = build_network(parse_network_config_text(preset_double_mz_text()));
    return net;
}

} // namespace timesym
