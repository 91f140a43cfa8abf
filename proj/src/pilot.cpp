#include "timesym/pilot.hpp"

#include <algorithm>
#include <cmath>

#include "timesym/error.hpp"
#include "timesym/rng.hpp"

namespace timesym {

namespace {

// Amplitudes below this are treated as empty ports.
constexpr double kOccupied = 1e-10;
// Relative tolerance for the balanced-merge weight comparison.
constexpr double kBalance = 1e-9;

} // namespace

std::string_view to_string(Direction direction) {
    return direction == Direction::Forward ? "forward" : "reversed";
}

ModeQuantile element_transfer(const Element &element, const ModeQuantile &in,
                              const PortContext &context, Direction direction,
                              ReflectionOrder order) {
    const bool forward = direction == Direction::Forward;
    const auto &ports_in = forward ? element.inputs : element.outputs;
    const auto &ports_out = forward ? element.outputs : element.inputs;

    std::size_t idx = ports_in.size();
    for (std::size_t i = 0; i < ports_in.size(); ++i)
        if (ports_in[i] == in.mode)
            idx = i;
    if (idx == ports_in.size())
        throw DomainError("mode '" + in.mode + "' is not an incoming port of this " +
                          std::string(to_string(element.kind)));
    if (context.incoming.size() != ports_in.size() || context.outgoing.size() != ports_out.size())
        throw DomainError("port context does not match the element");
    if (std::abs(context.incoming[idx]) <= kOccupied)
        throw DomainError("particle in mode '" + in.mode + "' which carries no amplitude");

    const double q = in.quantile;
    switch (element.kind) {
    case ElementKind::Mirror:
        return {ports_out[0], 1.0 - q};
    case ElementKind::Detector:
        return {ports_out[0], q};
    case ElementKind::Source:
        // Reversed runs end at the source.
        return in;
    case ElementKind::BeamSplitter:
        break;
    }

    const std::size_t other = 1 - idx;
    const bool both = std::abs(context.incoming[other]) > kOccupied;
    if (!both) {
        if (q < 0.5)
            return {ports_out[idx], 2.0 * q};
        return {ports_out[other], order == ReflectionOrder::Reverse ? 2.0 * (1.0 - q) : 2.0 * q - 1.0};
    }

    const double w0 = std::norm(context.incoming[0]);
    const double w1 = std::norm(context.incoming[1]);
    if (std::abs(w0 - w1) > kBalance * std::max(w0, w1))
        throw UnsupportedMerge("beamsplitter inputs '" + ports_in[0] + "' and '" + ports_in[1] +
                               "' carry unequal weights");
    const bool out0 = std::abs(context.outgoing[0]) > kOccupied;
    const bool out1 = std::abs(context.outgoing[1]) > kOccupied;
    if (out0 == out1)
        throw UnsupportedMerge("beamsplitter inputs '" + ports_in[0] + "' and '" + ports_in[1] +
                               "' interfere only partially");
    const std::size_t merged = out0 ? 0 : 1;
    if (idx == merged)
        return {ports_out[merged], 0.5 * (1.0 + q)};
    return {ports_out[merged], order == ReflectionOrder::Reverse ? 0.5 * (1.0 - q) : 0.5 * q};
}

// ---------------------------------------------------------------------------
// TrajectoryRecord

std::vector<Label> TrajectoryRecord::mode_sequence() const {
    std::vector<Label> out;
    for (const auto &s : states)
        if (out.empty() || out.back() != s.mode)
            out.push_back(s.mode);
    return out;
}

std::vector<Label> TrajectoryRecord::path() const {
    auto out = mode_sequence();
    if (!out.empty())
        out.pop_back();
    return out;
}

std::vector<double> TrajectoryRecord::quantiles() const {
    std::vector<double> out;
    for (const auto &s : states)
        out.push_back(s.quantile);
    return out;
}

// ---------------------------------------------------------------------------
// PilotRunner

PilotRunner::PilotRunner(const Network &net, Direction direction, GuidingState state,
                         ReflectionOrder order)
    : net_(&net), direction_(direction), order_(order) {
    if (direction == Direction::Forward) {
        const Ket *ket = std::get_if<Ket>(&state);
        if (!ket)
            throw DomainError("forward runs are guided by a ket at the first cut");
        if (ket->empty())
            throw DomainError("guiding ket is zero");
        for (const auto &k : net.forward_history(*ket))
            history_.push_back(k.entries());
    } else {
        const Bra *bra = std::get_if<Bra>(&state);
        if (!bra)
            throw DomainError("reversed runs are guided by a bra at the final cut");
        if (bra->empty())
            throw DomainError("guiding bra is zero");
        for (const auto &b : net.backward_history(*bra))
            history_.push_back(b.entries());
        std::string missing;
        for (const auto &[mode, name] : net.detectors())
            if (!bra->entries().contains(mode))
                missing += (missing.empty() ? "" : ",") + mode;
        if (!missing.empty())
            diagnostics_.push_back("empty-wave component absent: no amplitude on detector mode(s) " +
                                   missing);
    }
}

Amplitude PilotRunner::amplitude(std::size_t cut, const Label &mode) const {
    const auto &entries = history_[cut];
    auto it = entries.find(mode);
    return it == entries.end() ? Amplitude{} : it->second;
}

PortContext PilotRunner::context(std::size_t stage, const Element &element) const {
    PortContext ctx;
    const bool forward = direction_ == Direction::Forward;
    // Forward: enter at cut `stage` through inputs, leave at stage + 1.
    // Reversed: enter at cut stage + 1 through outputs, leave at `stage`.
    const std::size_t enter = forward ? stage : stage + 1;
    const std::size_t leave = forward ? stage + 1 : stage;
    for (const auto &m : forward ? element.inputs : element.outputs)
        ctx.incoming.push_back(amplitude(enter, m));
    for (const auto &m : forward ? element.outputs : element.inputs)
        ctx.outgoing.push_back(amplitude(leave, m));
    return ctx;
}

TrajectoryRecord PilotRunner::run(double q0) const {
    if (!(q0 >= 0.0 && q0 < 1.0))
        throw DomainError("initial quantile must lie in [0, 1)");
    const std::size_t start = direction_ == Direction::Forward ? 0 : history_.size() - 1;
    const auto &entries = history_[start];
    double total = 0.0;
    for (const auto &[mode, amp] : entries)
        total += std::norm(amp);
    double cumulative = 0.0;
    for (const auto &[mode, amp] : entries) {
        const double w = std::norm(amp) / total;
        if (q0 < cumulative + w || &mode == &entries.rbegin()->first) {
            const double local = std::clamp((q0 - cumulative) / w, 0.0, 1.0);
            return transport(mode, local, q0);
        }
        cumulative += w;
    }
    throw DomainError("guiding state is empty");
}

TrajectoryRecord PilotRunner::run_from(const Label &mode, double local_quantile) const {
    if (!(local_quantile >= 0.0 && local_quantile <= 1.0))
        throw DomainError("quantile must lie in [0, 1]");
    return transport(mode, local_quantile, local_quantile);
}

TrajectoryRecord PilotRunner::transport(Label mode, double q, double q0) const {
    const std::size_t n = net_->stage_count();
    const bool forward = direction_ == Direction::Forward;
    TrajectoryRecord rec;
    rec.direction = direction_;
    rec.quantile0 = q0;
    rec.diagnostics = diagnostics_;

    std::size_t cut = forward ? 0 : n;
    if (std::abs(amplitude(cut, mode)) <= kOccupied)
        throw DomainError("starting mode '" + mode + "' carries no amplitude");
    rec.states.push_back({mode, q, Cut{cut}});

    bool absorbed = false;
    for (std::size_t step = 0; step < n && !absorbed; ++step) {
        const std::size_t stage = forward ? step : n - 1 - step;
        const auto element_index =
            forward ? net_->element_consuming(stage, mode) : net_->element_producing(stage, mode);
        if (element_index) {
            const Element &el = net_->stages()[stage].elements[*element_index];
            absorbed = !forward && el.kind == ElementKind::Source;
            if (!absorbed) {
                ModeQuantile next =
                    element_transfer(el, {mode, q}, context(stage, el), direction_, order_);
                mode = std::move(next.mode);
                q = next.quantile;
            }
        }
        if (!absorbed) {
            cut = forward ? stage + 1 : stage;
            rec.states.push_back({mode, q, Cut{cut}});
        }
    }
    rec.terminal = forward ? net_->terminal_name(mode) : mode;
    return rec;
}

TrajectoryRecord run_trajectory(const Network &net, double q0, Direction direction,
                                const GuidingState &state, ReflectionOrder order) {
    return PilotRunner(net, direction, state, order).run(q0);
}

// ---------------------------------------------------------------------------
// Ensembles

std::string join_path(const std::vector<Label> &path) {
    std::string out;
    for (const auto &m : path) {
        if (!out.empty())
            out += ",";
        out += m;
    }
    return out;
}

EnsembleStats run_ensemble(const Network &net, std::size_t samples, std::uint64_t seed,
                           Direction direction, const GuidingState &state, ReflectionOrder order) {
    if (samples == 0)
        throw DomainError("ensemble needs at least one sample");
    const PilotRunner runner(net, direction, state, order);
    EnsembleStats stats;
    stats.samples = samples;
    stats.seed = seed;
    stats.direction = direction;
    stats.diagnostics = runner.diagnostics();
    for (std::size_t i = 0; i < samples; ++i) {
        Rng rng(derive_seed(seed, i));
        const TrajectoryRecord rec = runner.run(rng.uniform());
        ++stats.detector_counts[rec.terminal];
        ++stats.conditional_paths[rec.terminal][join_path(rec.path())];
    }
    return stats;
}

nlohmann::json trajectory_to_json(const TrajectoryRecord &record) {
    nlohmann::json quantiles = nlohmann::json::array();
    for (double q : record.quantiles())
        quantiles.push_back(round_sig12(q));
    nlohmann::json out{
        {"direction", std::string(to_string(record.direction))},
        {"quantile0", round_sig12(record.quantile0)},
        {"path", record.path()},
        {"quantiles", std::move(quantiles)},
        {"diagnostics", record.diagnostics},
    };
    out[record.direction == Direction::Forward ? "detector" : "source"] = record.terminal;
    return out;
}

nlohmann::json ensemble_to_json(const EnsembleStats &stats) {
    return {
        {"direction", std::string(to_string(stats.direction))},
        {"samples", stats.samples},
        {"seed", stats.seed},
        {"terminal_counts", stats.detector_counts},
        {"conditional_paths", stats.conditional_paths},
        {"diagnostics", stats.diagnostics},
    };
}

} // namespace timesym
