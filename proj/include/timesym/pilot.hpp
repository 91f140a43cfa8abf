#pragma once

/**
 * @file
 * Rule-based de Broglie-Bohm trajectories through a staged network.
 *
 * A particle is a (mode, quantile) pair. The quantile is its cumulative
 * probability position inside the wave packet of its mode, measured from
 * the leading edge (0 = front). Packets keep their shape between elements,
 * so the quantile only changes at elements:
 *
 *   mirror                      q -> 1 - q (order reversed)
 *   beamsplitter, one input     leading half (q < 1/2) transmitted, q' = 2q;
 *                               trailing half reflected, q' = 2(1 - q)
 *   beamsplitter, two balanced  reflected input fills the leading half,
 *   inputs merging into one     q' = (1 - q)/2; transmitted input fills the
 *   output                      trailing half, q' = (1 + q)/2
 *
 * q = 1/2 belongs to the trailing half. Which rule applies is read off the
 * exact amplitudes of the guiding state on both sides of the element. The
 * same table drives time-reversed runs with the roles of element inputs and
 * outputs exchanged; a packet seen in reverse time has its front and back
 * swapped, so the reversed-time quantile of a particle is 1 - q.
 */

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "timesym/hilbert.hpp"
#include "timesym/network.hpp"

namespace timesym {

enum class Direction { Forward, Reversed };

std::string_view to_string(Direction direction);

/// Whether reflection at a beamsplitter reverses the particle order inside
/// the reflected sub-packet. Mirrors always reverse.
enum class ReflectionOrder { Reverse, Preserve };

/// Quantile of the same particle seen in the opposite time direction.
inline double time_reversed_quantile(double q) { return 1.0 - q; }

struct ModeQuantile {
    Label mode;
    double quantile = 0.0;
};

/// Amplitudes of the guiding state on the ports of one element, in
/// traversal order: `incoming` on the ports the packet enters through,
/// `outgoing` on the ports it leaves through.
struct PortContext {
    std::vector<Amplitude> incoming;
    std::vector<Amplitude> outgoing;
};

/// Moves a particle across one element. Throws DomainError if the mode is
/// not an incoming port of the element or carries no amplitude, and
/// UnsupportedMerge for amplitude patterns outside the rule table.
ModeQuantile element_transfer(const Element &element, const ModeQuantile &in,
                              const PortContext &context, Direction direction,
                              ReflectionOrder order = ReflectionOrder::Reverse);

struct ParticleState {
    Label mode;
    double quantile = 0.0;
    Cut cut;
};

struct TrajectoryRecord {
    Direction direction = Direction::Forward;
    double quantile0 = 0.0;
    /// One state per cut, in traversal order.
    std::vector<ParticleState> states;
    /// Detector name (forward) or source mode (reversed) where the run ends.
    std::string terminal;
    std::vector<std::string> diagnostics;

    /// Modes visited, consecutive repeats collapsed.
    std::vector<Label> mode_sequence() const;
    /// mode_sequence() without the terminal mode.
    std::vector<Label> path() const;
    std::vector<double> quantiles() const;
};

using GuidingState = std::variant<Ket, Bra>;

/**
 * Precomputes the guiding state at every cut once, then transports any
 * number of particles. Forward runs take a ket at cut 0, reversed runs a bra
 * at the final cut.
 */
class PilotRunner {
  public:
    PilotRunner(const Network &net, Direction direction, GuidingState state,
                ReflectionOrder order = ReflectionOrder::Reverse);

    /// Starts from a global quantile q0 in [0, 1): the starting mode is
    /// chosen by cumulative |amplitude|^2 over modes in label order and q0 is
    /// rescaled into that mode's packet.
    TrajectoryRecord run(double q0) const;

    /// Starts from an explicit mode and local quantile at the starting cut.
    TrajectoryRecord run_from(const Label &mode, double local_quantile) const;

    Direction direction() const noexcept { return direction_; }
    const std::vector<std::string> &diagnostics() const noexcept { return diagnostics_; }

  private:
    TrajectoryRecord transport(Label mode, double q, double q0) const;
    PortContext context(std::size_t stage, const Element &element) const;
    Amplitude amplitude(std::size_t cut, const Label &mode) const;

    const Network *net_;
    Direction direction_;
    ReflectionOrder order_;
    std::vector<Ket::Entries> history_;
    std::vector<std::string> diagnostics_;
};

TrajectoryRecord run_trajectory(const Network &net, double q0, Direction direction,
                                const GuidingState &state,
                                ReflectionOrder order = ReflectionOrder::Reverse);

struct EnsembleStats {
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    Direction direction = Direction::Forward;
    std::map<std::string, std::size_t> detector_counts;
    /// terminal -> comma-joined path -> count
    std::map<std::string, std::map<std::string, std::size_t>> conditional_paths;
    std::vector<std::string> diagnostics;
};

/// Quantile of sample i is the first uniform draw of the stream
/// derive_seed(seed, i).
EnsembleStats run_ensemble(const Network &net, std::size_t samples, std::uint64_t seed,
                           Direction direction, const GuidingState &state,
                           ReflectionOrder order = ReflectionOrder::Reverse);

std::string join_path(const std::vector<Label> &path);

nlohmann::json trajectory_to_json(const TrajectoryRecord &record);
nlohmann::json ensemble_to_json(const EnsembleStats &stats);

} // namespace timesym
