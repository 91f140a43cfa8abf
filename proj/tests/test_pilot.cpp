#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "oracle.hpp"
#include "timesym/error.hpp"
#include "timesym/network.hpp"
#include "timesym/pilot.hpp"

using namespace timesym;
using nlohmann::json;

namespace {

const double kS = 1.0 / std::sqrt(2.0);
const Amplitude kI{0.0, 1.0};
const Ket kA = Ket::basis("a");
const Bra kFullFinal{{"g", kS}, {"h", -kI * kS}};

const Element kBs1 = Element::beamsplitter("a", "b", "c", "d");
const Element kBs2 = Element::beamsplitter("d", "c", "e", "f");

std::vector<double> midpoint_grid(std::size_t n) {
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back((static_cast<double>(i) + 0.5) / static_cast<double>(n));
    return out;
}

// Largest gap between the sorted sample and the uniform midpoint grid of the
// same size.
double uniformity_defect(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j)
        worst = std::max(worst, std::abs(values[j] - (static_cast<double>(j) + 0.5) / n));
    return worst;
}

// Detector assignment and final-quantile uniformity of the pushforward of a
// uniform grid, compared against Born weights from the dense oracle.
void expect_measure_preserving(const Network &net, const Ket &pre, const std::map<std::string, double> &born,
                               ReflectionOrder order = ReflectionOrder::Reverse) {
    const std::size_t n = 4096;
    const PilotRunner runner(net, Direction::Forward, pre, order);
    std::map<std::string, std::vector<double>> finals;
    for (double q : midpoint_grid(n)) {
        const TrajectoryRecord rec = runner.run(q);
        finals[rec.terminal].push_back(rec.states.back().quantile);
    }
    for (const auto &[det, p] : born) {
        const double freq = static_cast<double>(finals[det].size()) / static_cast<double>(n);
        EXPECT_NEAR(freq, p, 2.0 / n) << det;
        if (!finals[det].empty())
            EXPECT_LE(uniformity_defect(finals[det]), 4.0 / static_cast<double>(finals[det].size())) << det;
    }
}

// Distinct initial quantiles never share a (mode, quantile) pair at any cut.
void expect_injective(const Network &net, const GuidingState &state, Direction direction) {
    const PilotRunner runner(net, direction, state);
    std::vector<TrajectoryRecord> recs;
    for (double q : midpoint_grid(2048))
        recs.push_back(runner.run(q));
    for (std::size_t c = 0; c < recs.front().states.size(); ++c) {
        std::vector<std::pair<Label, double>> at_cut;
        for (const auto &r : recs)
            at_cut.emplace_back(r.states[c].mode, r.states[c].quantile);
        std::sort(at_cut.begin(), at_cut.end());
        for (std::size_t i = 1; i < at_cut.size(); ++i)
            if (at_cut[i].first == at_cut[i - 1].first)
                ASSERT_GT(at_cut[i].second - at_cut[i - 1].second, 1e-12) << "cut " << c;
    }
}

std::map<std::string, double> born_weights(const json &cfg, const Network &net, const Label &start) {
    const oracle::DenseNetwork dense(cfg);
    const oracle::Vec final_state = dense.forward(dense.vector({{start, 1.0}}), 0, dense.stage_count());
    std::map<std::string, double> out;
    for (const auto &[mode, name] : net.detectors())
        out[name] = std::norm(final_state(dense.at(mode)));
    return out;
}

} // namespace

TEST(ElementTransfer, MirrorReversesOrder) {
    const ModeQuantile out = element_transfer(Element::mirror("c", "c"), {"c", 0.3}, {{1.0}, {1.0}},
                                              Direction::Forward);
    EXPECT_EQ(out.mode, "c");
    EXPECT_NEAR(out.quantile, 0.7, 1e-15);
}

TEST(ElementTransfer, SplitLeadingHalfIsTransmitted) {
    const PortContext ctx{{1.0, 0.0}, {kS, kI * kS}};
    const ModeQuantile out = element_transfer(kBs1, {"a", 0.25}, ctx, Direction::Forward);
    EXPECT_EQ(out.mode, "c");
    EXPECT_DOUBLE_EQ(out.quantile, 0.5);
}

TEST(ElementTransfer, SplitTrailingHalfIsReflected) {
    const PortContext ctx{{1.0, 0.0}, {kS, kI * kS}};
    const ModeQuantile out = element_transfer(kBs1, {"a", 0.75}, ctx, Direction::Forward);
    EXPECT_EQ(out.mode, "d");
    EXPECT_DOUBLE_EQ(out.quantile, 0.5);
}

TEST(ElementTransfer, MidpointBelongsToTrailingHalf) {
    const PortContext ctx{{1.0, 0.0}, {kS, kI * kS}};
    EXPECT_EQ(element_transfer(kBs1, {"a", 0.5}, ctx, Direction::Forward).mode, "d");
}

TEST(ElementTransfer, MergeReflectedInputFillsLeadingHalf) {
    const PortContext ctx{{kI * kS, kS}, {kI, 0.0}};
    const ModeQuantile out = element_transfer(kBs2, {"c", 0.4}, ctx, Direction::Forward);
    EXPECT_EQ(out.mode, "e");
    EXPECT_DOUBLE_EQ(out.quantile, 0.3);
}

TEST(ElementTransfer, MergeTransmittedInputFillsTrailingHalf) {
    const PortContext ctx{{kI * kS, kS}, {kI, 0.0}};
    const ModeQuantile out = element_transfer(kBs2, {"d", 0.4}, ctx, Direction::Forward);
    EXPECT_EQ(out.mode, "e");
    EXPECT_DOUBLE_EQ(out.quantile, 0.7);
}

TEST(ElementTransfer, PreserveConvention) {
    const PortContext split{{1.0, 0.0}, {kS, kI * kS}};
    EXPECT_DOUBLE_EQ(element_transfer(kBs1, {"a", 0.75}, split, Direction::Forward, ReflectionOrder::Preserve).quantile,
                     0.5);
    EXPECT_DOUBLE_EQ(element_transfer(kBs1, {"a", 0.625}, split, Direction::Forward, ReflectionOrder::Preserve).quantile,
                     0.25);
    const PortContext merge{{kI * kS, kS}, {kI, 0.0}};
    EXPECT_DOUBLE_EQ(element_transfer(kBs2, {"c", 0.4}, merge, Direction::Forward, ReflectionOrder::Preserve).quantile,
                     0.2);
}

TEST(ElementTransfer, ReversedUsesOutputsAsEntrances) {
    // <g| alone seen backwards through the last splitter: f is the transmitted route.
    const Element bs3 = Element::beamsplitter("f", "e", "g", "h");
    const PortContext ctx{{1.0, 0.0}, {kS, -kI * kS}};
    const ModeQuantile out = element_transfer(bs3, {"g", 0.25}, ctx, Direction::Reversed);
    EXPECT_EQ(out.mode, "f");
    EXPECT_DOUBLE_EQ(out.quantile, 0.5);
}

TEST(ElementTransfer, Errors) {
    const PortContext ctx{{1.0, 0.0}, {kS, kI * kS}};
    EXPECT_THROW(element_transfer(kBs1, {"c", 0.2}, ctx, Direction::Forward), DomainError);
    EXPECT_THROW(element_transfer(kBs1, {"b", 0.2}, ctx, Direction::Forward), DomainError);
    const PortContext unequal{{0.6, 0.8}, {kS, kI * kS}};
    EXPECT_THROW(element_transfer(kBs1, {"a", 0.2}, unequal, Direction::Forward), UnsupportedMerge);
    const PortContext partial{{kS, kS}, {Amplitude(0.5, 0.5), Amplitude(0.5, 0.5)}};
    EXPECT_THROW(element_transfer(kBs1, {"a", 0.2}, partial, Direction::Forward), UnsupportedMerge);
}

// The split rule pushes a uniform packet forward to two uniform packets of
// half the weight each.
TEST(ElementTransfer, SplitIsMeasurePreserving) {
    const PortContext ctx{{1.0, 0.0}, {kS, kI * kS}};
    std::map<Label, std::vector<double>> out;
    for (double q : midpoint_grid(10000)) {
        const ModeQuantile m = element_transfer(kBs1, {"a", q}, ctx, Direction::Forward);
        out[m.mode].push_back(m.quantile);
    }
    EXPECT_EQ(out["c"].size(), 5000u);
    EXPECT_EQ(out["d"].size(), 5000u);
    EXPECT_LE(uniformity_defect(out["c"]), 1e-3);
    EXPECT_LE(uniformity_defect(out["d"]), 1e-3);
}

TEST(Trajectory, ForwardLeadingParticleTakesC) {
    const TrajectoryRecord rec = run_trajectory(preset_double_mz(), 0.25, Direction::Forward, kA);
    EXPECT_EQ(rec.path(), (std::vector<Label>{"a", "c", "e"}));
    EXPECT_EQ(rec.terminal, "G");
    ASSERT_EQ(rec.states.size(), 7u);
    EXPECT_DOUBLE_EQ(rec.states.back().quantile, 0.5);
    EXPECT_TRUE(rec.diagnostics.empty());
}

TEST(Trajectory, ForwardTrailingParticleTakesD) {
    const TrajectoryRecord rec = run_trajectory(preset_double_mz(), 0.75, Direction::Forward, kA);
    EXPECT_EQ(rec.path(), (std::vector<Label>{"a", "d", "e"}));
    EXPECT_EQ(rec.terminal, "H");
}

TEST(Trajectory, ReversedWithDetectedModeOnly) {
    const TrajectoryRecord rec = run_trajectory(preset_double_mz(), 0.25, Direction::Reversed, Bra::basis("g"));
    EXPECT_EQ(rec.path(), (std::vector<Label>{"g", "f", "d"}));
    EXPECT_EQ(rec.terminal, "a");
    ASSERT_EQ(rec.diagnostics.size(), 1u);
    EXPECT_NE(rec.diagnostics.front().find("empty-wave component absent"), std::string::npos);
}

// <g| alone splits at the last splitter: only the leading half passes f.
TEST(Trajectory, ReversedWithDetectedModeOnlyTrailingHalfTakesE) {
    const TrajectoryRecord rec = run_trajectory(preset_double_mz(), 0.75, Direction::Reversed, Bra::basis("g"));
    EXPECT_EQ(rec.path(), (std::vector<Label>{"g", "e", "d"}));
}

TEST(Trajectory, ReversedFullBraRetracesForwardRun) {
    const Network &net = preset_double_mz();
    const TrajectoryRecord fwd = run_trajectory(net, 0.25, Direction::Forward, kA);
    const PilotRunner reversed(net, Direction::Reversed, kFullFinal);
    EXPECT_TRUE(reversed.diagnostics().empty());
    const TrajectoryRecord rev =
        reversed.run_from(fwd.states.back().mode, time_reversed_quantile(fwd.states.back().quantile));
    auto seq = rev.mode_sequence();
    EXPECT_EQ(rev.path(), (std::vector<Label>{"g", "e", "c"}));
    std::reverse(seq.begin(), seq.end());
    EXPECT_EQ(seq, fwd.mode_sequence());
    for (std::size_t k = 0; k < fwd.states.size(); ++k)
        EXPECT_NEAR(rev.states[fwd.states.size() - 1 - k].quantile, 1.0 - fwd.states[k].quantile, 1e-12);
}

TEST(Trajectory, Errors) {
    const Network &net = preset_double_mz();
    EXPECT_THROW(run_trajectory(net, 1.0, Direction::Forward, kA), DomainError);
    EXPECT_THROW(run_trajectory(net, -0.1, Direction::Forward, kA), DomainError);
    EXPECT_THROW(run_trajectory(net, 0.2, Direction::Forward, Bra::basis("g")), DomainError);
    EXPECT_THROW(run_trajectory(net, 0.2, Direction::Reversed, kA), DomainError);
    EXPECT_THROW(run_trajectory(net, 0.2, Direction::Forward, Ket{{"a", 0.6}, {"b", 0.8}}), UnsupportedMerge);
    EXPECT_THROW(run_trajectory(net, 0.2, Direction::Forward, Ket{{"a", kS}, {"b", kS}}), UnsupportedMerge);
    EXPECT_THROW(PilotRunner(net, Direction::Forward, kA).run_from("b", 0.5), DomainError);
}

TEST(Trajectory, Json) {
    const json j = trajectory_to_json(run_trajectory(preset_double_mz(), 0.25, Direction::Forward, kA));
    EXPECT_EQ(j["direction"], "forward");
    EXPECT_EQ(j["path"], json({"a", "c", "e"}));
    EXPECT_EQ(j["detector"], "G");
    EXPECT_EQ(j["quantile0"], 0.25);
    EXPECT_EQ(j["quantiles"].size(), 7u);
}

TEST(Ensemble, CountsSumToSamplesAndPathsPairWithDetectors) {
    const EnsembleStats stats = run_ensemble(preset_double_mz(), 20000, 3, Direction::Forward, kA);
    std::size_t total = 0;
    for (const auto &[det, n] : stats.detector_counts)
        total += n;
    EXPECT_EQ(total, 20000u);
    EXPECT_EQ(stats.conditional_paths.at("G").size(), 1u);
    EXPECT_EQ(stats.conditional_paths.at("G").count("a,c,e"), 1u);
    EXPECT_EQ(stats.conditional_paths.at("H").count("a,d,e"), 1u);
    // 3 sigma of a fair binomial with n = 20000
    EXPECT_NEAR(static_cast<double>(stats.detector_counts.at("G")) / 20000.0, 0.5, 3.0 * std::sqrt(0.25 / 20000.0));
}

TEST(Ensemble, SameSeedSameStats) {
    const auto a = ensemble_to_json(run_ensemble(preset_double_mz(), 500, 11, Direction::Forward, kA));
    const auto b = ensemble_to_json(run_ensemble(preset_double_mz(), 500, 11, Direction::Forward, kA));
    EXPECT_EQ(a.dump(), b.dump());
    EXPECT_THROW(run_ensemble(preset_double_mz(), 0, 11, Direction::Forward, kA), DomainError);
}

TEST(Properties, PresetIsMeasurePreserving) {
    const json cfg = json::parse(preset_double_mz_text());
    expect_measure_preserving(preset_double_mz(), kA, born_weights(cfg, preset_double_mz(), "a"));
}

TEST(Properties, PresetQuantileMapIsInjective) {
    expect_injective(preset_double_mz(), kA, Direction::Forward);
    expect_injective(preset_double_mz(), kFullFinal, Direction::Reversed);
    expect_injective(preset_double_mz(), Bra::basis("g"), Direction::Reversed);
}

TEST(Properties, DetectorAssignmentIgnoresReflectionOrder) {
    const Network &net = preset_double_mz();
    const PilotRunner reverse(net, Direction::Forward, kA, ReflectionOrder::Reverse);
    const PilotRunner preserve(net, Direction::Forward, kA, ReflectionOrder::Preserve);
    for (double q : midpoint_grid(1000))
        EXPECT_EQ(reverse.run(q).terminal, preserve.run(q).terminal) << q;
}

TEST(Properties, RandomChainsAreMeasurePreservingAndInjective) {
    gen::Rng rng(123);
    for (int t = 0; t < 100; ++t) {
        const json cfg = gen::two_lane_chain(rng, gen::uniform_int(rng, 1, 5));
        const Network net = build_network(cfg);
        const Label start = gen::uniform_int(rng, 0, 1) == 0 ? "m0_0" : "m1_0";
        expect_measure_preserving(net, Ket::basis(start), born_weights(cfg, net, start));
        expect_injective(net, Ket::basis(start), Direction::Forward);
    }
}

TEST(Properties, RandomChainsReversedRunsRetraceForwardRuns) {
    gen::Rng rng(321);
    for (int t = 0; t < 100; ++t) {
        const json cfg = gen::two_lane_chain(rng, gen::uniform_int(rng, 1, 5));
        const Network net = build_network(cfg);
        const Ket pre = Ket::basis("m0_0");
        const PilotRunner forward(net, Direction::Forward, pre);
        const PilotRunner reversed(net, Direction::Reversed, adjoint(net.evolve(pre, Cut{0}, net.final_cut())));
        for (int s = 0; s < 20; ++s) {
            const TrajectoryRecord f = forward.run(gen::uniform(rng));
            const TrajectoryRecord r =
                reversed.run_from(f.states.back().mode, time_reversed_quantile(f.states.back().quantile));
            auto seq = r.mode_sequence();
            std::reverse(seq.begin(), seq.end());
            ASSERT_EQ(seq, f.mode_sequence());
        }
    }
}
