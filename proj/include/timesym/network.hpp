#pragma once

/**
 * @file
 * Staged beamsplitter networks.
 *
 * A network is an ordered list of stages; each stage is a set of optical
 * elements acting on disjoint modes. Stage k maps the live modes at cut k to
 * the live modes at cut k + 1, so a network with N stages has cuts 0..N.
 * Kets evolve forward (increasing cut), bras evolve backward by right
 * multiplication with the stage unitaries.
 */

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "timesym/hilbert.hpp"

namespace timesym {

/// Time slice between stage index - 1 and stage index.
struct Cut {
    std::size_t index = 0;
    friend auto operator<=>(const Cut &, const Cut &) = default;
};

enum class ElementKind { Source, BeamSplitter, Mirror, Detector };

std::string_view to_string(ElementKind kind);

/**
 * One optical element. Port layout by kind:
 *   BeamSplitter  inputs {u, v}, outputs {x, y}
 *   Mirror        inputs {in},   outputs {out}  (in == out allowed)
 *   Source        inputs {},     outputs {mode}
 *   Detector      inputs {mode}, outputs {mode}
 *
 * A beamsplitter maps |u> -> (|x> + i|y>)/sqrt2 and |v> -> (i|x> + |y>)/sqrt2,
 * so u->x and v->y are the transmitted routes, u->y and v->x the reflected
 * ones.
 */
struct Element {
    ElementKind kind = ElementKind::Mirror;
    std::vector<Label> inputs;
    std::vector<Label> outputs;
    std::string label;

    static Element beamsplitter(Label u, Label v, Label x, Label y, std::string label = {});
    static Element mirror(Label in, Label out, std::string label = {});
    static Element source(Label mode);
    static Element detector(Label mode);
};

struct Stage {
    std::string label;
    std::vector<Element> elements;
};

/// Unvalidated network description, as read from a config file.
struct NetworkConfig {
    std::vector<Label> modes;
    std::vector<Stage> stages;
    std::map<Label, std::string> detectors;
};

/// Parses the JSON config schema. Unknown keys are rejected.
NetworkConfig parse_network_config(const nlohmann::json &doc);
NetworkConfig parse_network_config_text(std::string_view text);

nlohmann::json network_config_to_json(const NetworkConfig &config);

class Network {
  public:
    const Basis &modes() const noexcept { return modes_; }
    const std::vector<Stage> &stages() const noexcept { return stages_; }
    const std::map<Label, std::string> &detectors() const noexcept { return detectors_; }
    std::size_t stage_count() const noexcept { return stages_.size(); }
    Cut final_cut() const noexcept { return Cut{stages_.size()}; }

    /// Modes that may carry amplitude at the cut.
    const Basis &live_modes(Cut cut) const;

    /// Block unitary of one stage, from live_modes(k) to live_modes(k + 1).
    const LinearOp &stage_unitary(std::size_t stage) const;

    /// Forward evolution; requires from <= to and support within
    /// live_modes(from).
    Ket evolve(const Ket &state, Cut from, Cut to) const;

    /// Backward evolution; requires from >= to and support within
    /// live_modes(from).
    Bra evolve(const Bra &state, Cut from, Cut to) const;

    /// Kets at every cut from 0 to final_cut().
    std::vector<Ket> forward_history(const Ket &initial) const;
    /// Bras at every cut from 0 to final_cut(), given the bra at the final cut.
    std::vector<Bra> backward_history(const Bra &final_state) const;

    /// Index of the element of `stage` that consumes `mode`, if any.
    std::optional<std::size_t> element_consuming(std::size_t stage, const Label &mode) const;
    /// Index of the element of `stage` that produces `mode`, if any.
    std::optional<std::size_t> element_producing(std::size_t stage, const Label &mode) const;

    /// Cuts that lie strictly inside the interferometer: at least one
    /// beamsplitter stage before and one at or after the cut.
    std::vector<Cut> interior_cuts() const;

    /// Detector display name for a mode, or the mode label itself.
    std::string terminal_name(const Label &mode) const;

    void check_cut(Cut cut) const;

    const NetworkConfig &config() const noexcept { return config_; }

  private:
    friend Network build_network(const NetworkConfig &config);
    Network() = default;

    NetworkConfig config_;
    Basis modes_;
    std::vector<Stage> stages_;
    std::map<Label, std::string> detectors_;
    std::vector<Basis> live_;
    std::vector<LinearOp> unitaries_;
};

/// Validates a config and compiles stage unitaries. Throws ConfigError with
/// a diagnostic naming the violated rule.
Network build_network(const NetworkConfig &config);
Network build_network(const nlohmann::json &doc);

/// Config text of the three-beamsplitter double Mach-Zehnder preset.
std::string_view preset_double_mz_text();

/// Two balanced Mach-Zehnder interferometers in series: BS1 (a,b -> c,d),
/// mirrors on c and d, BS2 (d,c -> e,f), mirrors on e and f,
/// BS3 (f,e -> g,h), detectors G on g and H on h.
const Network &preset_double_mz();

} // namespace timesym
