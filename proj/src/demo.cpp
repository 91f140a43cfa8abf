#include "timesym/demo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "timesym/network.hpp"
#include "timesym/pilot.hpp"
#include "timesym/pointer.hpp"
#include "timesym/rng.hpp"
#include "timesym/twotime.hpp"

namespace timesym {

namespace {

constexpr double kTol = 1e-12;
const double kS = 1.0 / std::sqrt(2.0);
const Amplitude kI{0.0, 1.0};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", round_sig12(v));
    return buf;
}

template <class Tag>
DemoItem state_item(std::string name, const LabeledVector<Tag> &got, const LabeledVector<Tag> &want) {
    const double diff = max_abs_diff(got, want);
    std::string shown;
    if constexpr (std::is_same_v<Tag, KetTag>)
        shown = format_ket(got);
    else
        shown = format_bra(got);
    return {std::move(name), diff <= kTol, shown + "  (max deviation " + fmt(diff) + ")"};
}

DemoItem prob_item(std::string name, double p) {
    return {std::move(name), std::abs(p - 1.0) <= kTol, "probability " + fmt(p)};
}

void evolution_items(const Network &net, std::vector<DemoItem> &items) {
    const Ket a = Ket::basis("a");
    const auto fwd = net.forward_history(a);
    items.push_back(state_item("forward |a> after BS1", fwd[1], Ket{{"c", kS}, {"d", kI * kS}}));
    items.push_back(state_item("forward |a> after BS2", fwd[3], Ket{{"e", kI}}));
    items.push_back(state_item("forward |a> after BS3", fwd[5], Ket{{"g", -kS}, {"h", kI * kS}}));

    const auto bwd = net.backward_history(Bra::basis("g"));
    items.push_back(state_item("backward <g| before BS3", bwd[4], Bra{{"e", -kI * kS}, {"f", kS}}));
    items.push_back(state_item("backward <g| before BS2", bwd[2], Bra{{"d", -kI}}));
    items.push_back(state_item("backward <g| before BS1", bwd[0], Bra{{"a", -kS}, {"b", -kI * kS}}));
}

void abl_items(const Network &net, std::vector<DemoItem> &items) {
    const Ket a = Ket::basis("a");
    const Bra g = Bra::basis("g");

    const TwoStateVector at1 = two_state_at_cut(net, a, g, Cut{1});
    const bool bra_on_d = at1.post.support() == Basis{"d"};
    const bool ket_forward = max_abs_diff(at1.pre, net.evolve(a, Cut{0}, Cut{1})) <= kTol;
    items.push_back({"two-state vector between BS1 and BS2", bra_on_d && ket_forward,
                     format_two_state(at1)});

    items.push_back(prob_item("prob(D=1)=1", abl_probability(at1, which_path(at1.space), "d")));
    const TwoStateVector at3 = two_state_at_cut(net, a, g, Cut{3});
    items.push_back(prob_item("prob(path=e)=1", abl_probability(at3, which_path(at3.space), "e")));

    const auto report = certainty_report(net, a, g);
    Basis modes;
    std::string listed;
    for (const auto &e : report) {
        modes.insert(e.mode);
        listed += (listed.empty() ? "" : " ") + std::string("cut ") + std::to_string(e.cut.index) +
                  ":" + e.mode;
    }
    items.push_back({"certain paths are {d, e}", modes == Basis{"d", "e"}, listed});

    const Basis space1 = net.live_modes(Cut{1});
    const auto measured = measured_intermediate_distribution(net, a, g, Cut{1}, which_path(space1));
    const std::size_t d_index = which_path(space1).index_of("d");
    items.push_back(prob_item("measured path between BS1 and BS2 is d", measured[d_index]));
}

void spin_items(std::vector<DemoItem> &items) {
    const SpinDirection n({1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)});
    const Ket pre = spin_eigenket(SpinDirection::x());
    const Bra post = adjoint(spin_eigenket(n));
    const TwoStateVector tsv = two_state(post, pre, spin_basis());
    const double px = abl_probability(tsv, spin_observable(SpinDirection::x()), kSpinPlus);
    const double pn = abl_probability(tsv, spin_observable(n), kSpinPlus);
    items.push_back({"spin pre +x post +n: sigma_x = +1/2 and sigma_n = +1/2",
                     std::abs(px - 1.0) <= kTol && std::abs(pn - 1.0) <= kTol,
                     "prob(sigma_x=+1/2) " + fmt(px) + ", prob(sigma_n=+1/2) " + fmt(pn)});
}

void pointer_items(std::uint64_t seed, std::vector<DemoItem> &items) {
    const MeasurementSetup setup({"up", "down"}, {0.5, -0.5});
    const Ket system{{"up", 0.6}, {"down", Amplitude(0.0, 0.8)}};
    const std::size_t runs = 1000;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < runs; ++i) {
        const double q1 = static_cast<double>(static_cast<int>(i % 7) - 3) * 0.25;
        const MeasurementRecord fwd = measure_forward(setup, system, q1, derive_seed(seed, 2 * i));
        // The backward observer prepares the reading the forward one ended with
        // and evolves the collapsed eigenstate backwards.
        const Bra collapsed = adjoint(std::get<Ket>(fwd.collapsed));
        const MeasurementRecord bwd =
            measure_backward(setup, collapsed, fwd.q2(), derive_seed(seed, 2 * i + 1));
        if (fwd.deduced == bwd.deduced && bwd.q1() == fwd.q1())
            ++agree;
    }
    items.push_back({"pointer readings give a_l = a_n in both time directions", agree == runs,
                     std::to_string(agree) + "/" + std::to_string(runs) + " runs agree"});
}

void bohm_items(const Network &net, std::uint64_t seed, std::vector<DemoItem> &items) {
    const Ket a = Ket::basis("a");
    const std::size_t samples = 100000;
    const EnsembleStats stats = run_ensemble(net, samples, seed, Direction::Forward, a);

    const auto count = [](const std::map<std::string, std::size_t> &m, const std::string &k) {
        auto it = m.find(k);
        return it == m.end() ? std::size_t{0} : it->second;
    };
    const std::size_t n_g = count(stats.detector_counts, "G");
    const std::size_t n_h = count(stats.detector_counts, "H");
    const double p_g = static_cast<double>(n_g) / static_cast<double>(samples);
    items.push_back({"P(G)=0.5 +- 0.005", std::abs(p_g - 0.5) <= 0.005,
                     fmt(p_g) + " over " + std::to_string(samples) + " samples"});

    const auto path_fraction = [&](const std::string &det, const std::string &path, std::size_t n) {
        if (n == 0)
            return 0.0;
        const auto it = stats.conditional_paths.find(det);
        return static_cast<double>(count(it->second, path)) / static_cast<double>(n);
    };
    const double c_given_g = path_fraction("G", "a,c,e", n_g);
    const double d_given_h = path_fraction("H", "a,d,e", n_h);
    items.push_back({"P(path=c | G)=1", c_given_g == 1.0, "fraction " + fmt(c_given_g)});
    items.push_back({"P(path=d | H)=1", d_given_h == 1.0, "fraction " + fmt(d_given_h)});

    // Reversed runs guided by <g| alone, restricted to those that end at a.
    const std::size_t grid = 1000;
    const PilotRunner partial(net, Direction::Reversed, Bra::basis("g"));
    std::size_t ending_at_a = 0;
    std::size_t via_fd = 0;
    for (std::size_t i = 0; i < grid; ++i) {
        const TrajectoryRecord rec = partial.run((static_cast<double>(i) + 0.5) / grid);
        if (rec.terminal != "a")
            continue;
        ++ending_at_a;
        if (rec.path() == std::vector<Label>{"g", "f", "d"})
            ++via_fd;
    }
    const bool flagged = !partial.diagnostics().empty();
    items.push_back({"reversed with <g| alone, ending at a: path g,f,d",
                     ending_at_a > 0 && via_fd == ending_at_a && flagged,
                     std::to_string(via_fd) + "/" + std::to_string(ending_at_a) + " runs; " +
                         (flagged ? partial.diagnostics().front() : "no diagnostic")});

    // Reversed runs guided by the full final bra retrace forward runs.
    const Bra full{{"g", kS}, {"h", -kI * kS}};
    const PilotRunner forward(net, Direction::Forward, a);
    const PilotRunner reversed(net, Direction::Reversed, full);
    const std::size_t matched = 1000;
    std::size_t retraced = 0;
    for (std::size_t i = 0; i < matched; ++i) {
        Rng rng(derive_seed(seed ^ 0x5eedULL, i));
        const TrajectoryRecord f = forward.run(rng.uniform());
        const ParticleState &end = f.states.back();
        const TrajectoryRecord r = reversed.run_from(end.mode, time_reversed_quantile(end.quantile));
        auto seq = r.mode_sequence();
        std::reverse(seq.begin(), seq.end());
        if (seq == f.mode_sequence())
            ++retraced;
    }
    items.push_back({"reversed with the full final bra retraces the forward path", retraced == matched,
                     std::to_string(retraced) + "/" + std::to_string(matched) + " runs"});
}

} // namespace

std::vector<DemoItem> run_demo(std::uint64_t seed) {
    const Network &net = preset_double_mz();
    std::vector<DemoItem> items;
    evolution_items(net, items);
    abl_items(net, items);
    spin_items(items);
    pointer_items(seed, items);
    bohm_items(net, seed, items);
    return items;
}

std::string render_demo_text(const std::vector<DemoItem> &items, std::uint64_t seed) {
    std::ostringstream os;
    os << "seed " << seed << "\n";
    std::size_t passed = 0;
    for (const auto &item : items) {
        os << (item.pass ? "PASS  " : "FAIL  ") << item.name << "\n      " << item.detail << "\n";
        passed += item.pass ? 1 : 0;
    }
    os << passed << "/" << items.size() << " items passed\n";
    return os.str();
}

nlohmann::json demo_to_json(const std::vector<DemoItem> &items, std::uint64_t seed) {
    nlohmann::json list = nlohmann::json::array();
    bool all = true;
    for (const auto &item : items) {
        list.push_back({{"name", item.name}, {"pass", item.pass}, {"detail", item.detail}});
        all = all && item.pass;
    }
    return {{"seed", seed}, {"items", std::move(list)}, {"all_passed", all}};
}

} // namespace timesym
