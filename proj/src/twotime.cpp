#include "timesym/twotime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "timesym/error.hpp"

namespace timesym {

namespace {

constexpr double kVanishingDenominator = 1e-24;

void require_normalized(double squared_norm, const char *what, double tol) {
    if (std::abs(squared_norm - 1.0) > tol)
        throw DomainError(std::string(what) + " is not normalized (squared norm " +
                          std::to_string(squared_norm) + ")");
}

void require_consistent(const Bra &post, const Ket &pre, double tol) {
    if (std::abs(pair(post, pre)) <= tol)
        throw InconsistentSelection(
            "postselected state is orthogonal to the evolved preselected state");
}

} // namespace

TwoStateVector two_state_at_cut(const Network &net, const Ket &pre, const Bra &post, Cut cut,
                                double tol) {
    net.check_cut(cut);
    require_normalized(pre.squared_norm(), "preselected ket", tol);
    require_normalized(post.squared_norm(), "postselected bra", tol);
    TwoStateVector tsv{net.evolve(post, net.final_cut(), cut), net.evolve(pre, Cut{0}, cut), cut,
                       net.live_modes(cut)};
    require_consistent(tsv.post, tsv.pre, tol);
    return tsv;
}

TwoStateVector two_state(const Bra &post, const Ket &pre, const Basis &space, double tol) {
    require_normalized(pre.squared_norm(), "preselected ket", tol);
    require_normalized(post.squared_norm(), "postselected bra", tol);
    for (const auto &label : pre.support())
        if (!space.contains(label))
            throw DimensionError("preselected component '" + label + "' outside space");
    for (const auto &label : post.support())
        if (!space.contains(label))
            throw DimensionError("postselected component '" + label + "' outside space");
    require_consistent(post, pre, tol);
    return {post, pre, Cut{0}, space};
}

TwoStateDisplay display_form(const TwoStateVector &tsv) {
    TwoStateDisplay out;
    if (tsv.post.empty() || tsv.pre.empty()) {
        out.bra = tsv.post;
        out.ket = tsv.pre;
        return out;
    }
    const Amplitude lead = tsv.post.entries().begin()->second;
    out.bra = (1.0 / lead) * tsv.post;
    Ket ket = lead * tsv.pre;
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto &[label, amp] : ket.entries())
        smallest = std::min(smallest, std::abs(amp));
    out.scale = smallest;
    out.ket = (1.0 / smallest) * ket;
    return out;
}

std::string format_two_state(const TwoStateVector &tsv) {
    const TwoStateDisplay d = display_form(tsv);
    std::ostringstream os;
    const std::string scale = format_coefficient(d.scale);
    if (!scale.empty())
        os << scale << " ";
    os << "(" << format_bra(d.bra) << ")(" << format_ket(d.ket) << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// Projector sets

std::size_t ProjectorSet::index_of(const std::string &label) const {
    for (std::size_t i = 0; i < outcomes_.size(); ++i)
        if (outcomes_[i].label == label)
            return i;
    throw DomainError("no outcome labeled '" + label + "'");
}

ProjectorSet make_projector_set(std::vector<ProjectorSet::Outcome> outcomes, double tol) {
    if (outcomes.empty())
        throw CompletenessError("projector set is empty");
    const Basis space = outcomes.front().projector.space();
    std::set<std::string> labels;
    for (const auto &o : outcomes) {
        if (!labels.insert(o.label).second)
            throw DomainError("duplicate outcome label '" + o.label + "'");
        if (o.projector.space() != space)
            throw DimensionError("projectors of one set act on different spaces");
    }
    LinearOp zero(space, space);
    LinearOp sum(space, space);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        sum += outcomes[i].projector.op();
        for (std::size_t j = i + 1; j < outcomes.size(); ++j)
            if (max_abs_diff(compose(outcomes[i].projector.op(), outcomes[j].projector.op()), zero) >
                tol)
                throw DomainError("outcomes '" + outcomes[i].label + "' and '" + outcomes[j].label +
                                  "' are not orthogonal");
    }
    if (max_abs_diff(sum, LinearOp::identity(space)) > tol)
        throw CompletenessError("projectors do not sum to the identity");
    return ProjectorSet(std::move(outcomes), space);
}

ProjectorSet which_path(const Basis &space) {
    std::vector<ProjectorSet::Outcome> outcomes;
    for (const auto &mode : space)
        outcomes.push_back({mode, make_projector(Basis{mode}, space)});
    return make_projector_set(std::move(outcomes));
}

// ---------------------------------------------------------------------------
// ABL rule

std::vector<double> abl_weights(const TwoStateVector &tsv, const ProjectorSet &outcomes) {
    if (outcomes.space() != tsv.space)
        throw CompletenessError("projector set does not resolve the identity on the live space");
    std::vector<double> weights;
    weights.reserve(outcomes.size());
    for (const auto &o : outcomes.outcomes())
        weights.push_back(std::norm(pair(tsv.post, apply(o.projector.op(), tsv.pre))));
    return weights;
}

std::vector<double> abl_distribution(const TwoStateVector &tsv, const ProjectorSet &outcomes) {
    std::vector<double> weights = abl_weights(tsv, outcomes);
    double total = 0.0;
    for (double w : weights)
        total += w;
    if (total <= kVanishingDenominator)
        throw UndefinedConditional("every ABL numerator vanishes; conditional probability undefined");
    for (double &w : weights)
        w /= total;
    return weights;
}

double abl_probability(const TwoStateVector &tsv, const ProjectorSet &outcomes,
                       const std::string &which) {
    const std::size_t n = outcomes.index_of(which);
    return abl_distribution(tsv, outcomes)[n];
}

std::vector<double> measured_intermediate_distribution(const Network &net, const Ket &pre,
                                                       const Bra &post, Cut cut,
                                                       const ProjectorSet &outcomes) {
    const Ket at_cut = net.evolve(pre, Cut{0}, cut);
    if (outcomes.space() != net.live_modes(cut))
        throw CompletenessError("projector set does not resolve the identity on the live space");
    const double post_norm2 = post.squared_norm();
    std::vector<double> joint;
    double total = 0.0;
    for (const auto &o : outcomes.outcomes()) {
        const Ket branch = apply(o.projector.op(), at_cut);
        const double p_outcome = branch.squared_norm();
        double p_post = 0.0;
        if (p_outcome > 0.0) {
            const Ket final_state = net.evolve(branch.normalized(), cut, net.final_cut());
            p_post = std::norm(pair(post, final_state)) / post_norm2;
        }
        joint.push_back(p_outcome * p_post);
        total += joint.back();
    }
    if (total <= kVanishingDenominator)
        throw UndefinedConditional("postselection never succeeds after the intermediate measurement");
    for (double &j : joint)
        j /= total;
    return joint;
}

std::vector<CertaintyEntry> certainty_report(const Network &net, const Ket &pre, const Bra &post) {
    std::vector<CertaintyEntry> report;
    for (const Cut cut : net.interior_cuts()) {
        const TwoStateVector tsv = two_state_at_cut(net, pre, post, cut);
        const ProjectorSet paths = which_path(tsv.space);
        const std::vector<double> probs = abl_distribution(tsv, paths);
        for (std::size_t i = 0; i < probs.size(); ++i)
            if (probs[i] >= kCertaintyThreshold)
                report.push_back({cut, paths.outcomes()[i].label, probs[i]});
    }
    return report;
}

nlohmann::json certainty_report_to_json(const std::vector<CertaintyEntry> &report) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &e : report)
        out.push_back({{"cut", e.cut.index}, {"mode", e.mode}, {"probability", round_sig12(e.probability)}});
    return out;
}

// ---------------------------------------------------------------------------
// Spin-1/2

SpinDirection::SpinDirection(std::array<double, 3> n, double tol) : n_(n) {
    const double len2 = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
    if (!std::isfinite(len2) || std::abs(std::sqrt(len2) - 1.0) > tol)
        throw DomainError("spin direction is not a unit vector");
}

Basis spin_basis() { return {kSpinUp, kSpinDown}; }

ProjectorSet spin_observable(const SpinDirection &dir) {
    const auto [nx, ny, nz] = dir.components();
    const Basis space = spin_basis();
    auto half = [&](double sign) {
        // (1 + sign n.sigma) / 2
        LinearOp op(space, space);
        op.set(kSpinUp, kSpinUp, 0.5 * (1.0 + sign * nz));
        op.set(kSpinDown, kSpinDown, 0.5 * (1.0 - sign * nz));
        op.set(kSpinUp, kSpinDown, 0.5 * sign * Amplitude(nx, -ny));
        op.set(kSpinDown, kSpinUp, 0.5 * sign * Amplitude(nx, ny));
        return make_projector_from(op);
    };
    return make_projector_set({{kSpinPlus, half(+1.0)}, {kSpinMinus, half(-1.0)}});
}

Ket spin_eigenket(const SpinDirection &dir, bool plus) {
    const auto [nx, ny, nz] = dir.components();
    const double theta = std::acos(std::clamp(nz, -1.0, 1.0));
    const double phi = std::atan2(ny, nx);
    const Amplitude phase = std::polar(1.0, phi);
    Ket out;
    if (plus) {
        out.set(kSpinUp, std::cos(theta / 2));
        out.set(kSpinDown, phase * std::sin(theta / 2));
    } else {
        out.set(kSpinUp, std::sin(theta / 2));
        out.set(kSpinDown, -phase * std::cos(theta / 2));
    }
    return out;
}

} // namespace timesym
