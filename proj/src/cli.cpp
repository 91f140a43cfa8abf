#include "timesym/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "timesym/demo.hpp"
#include "timesym/error.hpp"
#include "timesym/pointer.hpp"
#include "timesym/rng.hpp"

namespace timesym::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Literals

namespace {

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string &text, const std::string &context) {
    const std::string t = trim(text);
    if (t.empty())
        throw RequestError(kMalformedLiteral, "empty number in '" + context + "'");
    char *end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
        throw RequestError(kMalformedLiteral, "malformed number '" + t + "' in '" + context + "'");
    return v;
}

template <class Tag> LabeledVector<Tag> parse_literal(const std::string &text) {
    LabeledVector<Tag> out;
    if (trim(text).empty())
        throw RequestError(kMalformedLiteral, "empty state literal");
    std::set<Label> seen;
    for (const auto &term : split(text, ';')) {
        const auto colon = term.find(':');
        if (colon == std::string::npos)
            throw RequestError(kMalformedLiteral,
                               "state term '" + term + "' is not of the form mode:re,im");
        const Label mode = trim(term.substr(0, colon));
        if (mode.empty())
            throw RequestError(kMalformedLiteral, "state term '" + term + "' has no mode");
        if (!seen.insert(mode).second)
            throw RequestError(kMalformedLiteral, "mode '" + mode + "' repeated in state literal");
        const auto parts = split(term.substr(colon + 1), ',');
        if (parts.size() != 2)
            throw RequestError(kMalformedLiteral,
                               "amplitude in '" + term + "' must be a re,im pair");
        out.add(mode, Amplitude(parse_real(parts[0], term), parse_real(parts[1], term)));
    }
    if (out.empty())
        throw RequestError(kMalformedLiteral, "state literal '" + text + "' is the zero vector");
    return out;
}

} // namespace

Ket parse_ket_literal(const std::string &text) { return parse_literal<KetTag>(text); }
Bra parse_bra_literal(const std::string &text) { return parse_literal<BraTag>(text); }

ProjectorSet load_basis_file(const std::string &path, const Basis &space) {
    std::ifstream in(path);
    if (!in)
        throw RequestError(kConfig, "basis file not found: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw RequestError(kConfig, "basis file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object() || doc.size() != 1 || !doc.contains("outcomes") ||
        !doc["outcomes"].is_array())
        throw RequestError(kConfig, "basis file must be {\"outcomes\": [...]}");
    std::vector<ProjectorSet::Outcome> outcomes;
    try {
        for (const auto &o : doc["outcomes"]) {
            if (!o.is_object() || !o.contains("label") || !o["label"].is_string())
                throw RequestError(kConfig, "each outcome needs a string \"label\"");
            const std::string label = o["label"].get<std::string>();
            if (o.size() != 2)
                throw RequestError(kConfig, "outcome '" + label +
                                                "' needs exactly one of \"modes\" or \"state\"");
            if (o.contains("modes")) {
                Basis subset;
                for (const auto &m : o["modes"])
                    subset.insert(m.get<std::string>());
                outcomes.push_back({label, make_projector(subset, space)});
            } else if (o.contains("state")) {
                outcomes.push_back(
                    {label, make_projector(parse_ket_literal(o["state"].get<std::string>()), space)});
            } else {
                throw RequestError(kConfig, "outcome '" + label + "' has an unknown key");
            }
        }
        return make_projector_set(std::move(outcomes));
    } catch (const json::exception &e) {
        throw RequestError(kConfig, "basis file: " + std::string(e.what()));
    } catch (const timesym::Error &e) {
        throw RequestError(kConfig, "basis file: " + std::string(e.what()));
    }
}

// ---------------------------------------------------------------------------
// Request parsing

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw RequestError(kConfig, "network file not found: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct RawOptions {
    bool preset = false;
    std::string network;
    std::string pre;
    std::string post;
    long long cut = -1;
    bool cut_given = false;
    std::string basis = "path";
    double quantile = 0.25;
    long long samples = 0;
    bool samples_given = false;
    std::uint64_t seed = 0;
    std::string direction = "forward";
    std::string format = "text";
    std::string eigen = "up:0.5;down:-0.5";
    double pointer = 0.0;
};

void add_common(CLI::App *sub, RawOptions &raw) {
    auto *preset = sub->add_flag("--preset", raw.preset, "Use the double Mach-Zehnder preset (default)");
    sub->add_option("--network", raw.network, "Network config file (JSON)")->excludes(preset);
    sub->add_option("--format", raw.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--seed", raw.seed, "Master seed (printed in output)");
}

} // namespace

CommandRequest parse_request(const std::vector<std::string> &args) {
    CLI::App app{"Pre- and postselection workbench for beamsplitter networks", "timesym"};
    app.require_subcommand(1, 1);
    RawOptions raw;

    auto *evolve = app.add_subcommand("evolve", "Evolve a ket forward and/or a bra backward");
    add_common(evolve, raw);
    evolve->add_option("--pre", raw.pre, "Initial ket literal mode:re,im;...");
    evolve->add_option("--post", raw.post, "Final bra literal mode:re,im;...");
    evolve->add_option("--cut", raw.cut, "Stop at this cut");

    auto *abl = app.add_subcommand("abl", "Two-state vector and ABL probabilities");
    add_common(abl, raw);
    abl->add_option("--pre", raw.pre, "Preselected ket literal")->required();
    abl->add_option("--post", raw.post, "Postselected bra literal")->required();
    abl->add_option("--cut", raw.cut, "Cut of the intermediate measurement (default: all)");
    abl->add_option("--basis", raw.basis, "'path' or a basis JSON file");

    auto *bohm = app.add_subcommand("bohm", "Bohm trajectory or ensemble");
    add_common(bohm, raw);
    bohm->add_option("--pre", raw.pre, "Guiding ket for forward runs");
    bohm->add_option("--post", raw.post, "Guiding bra for reversed runs");
    bohm->add_option("--quantile", raw.quantile, "Initial quantile in [0,1)");
    bohm->add_option("--samples", raw.samples, "Run an ensemble of this many samples");
    bohm->add_option("--direction", raw.direction, "Time direction")
        ->check(CLI::IsMember({"forward", "reversed"}));

    auto *measure = app.add_subcommand("measure", "Pointer measurement in either time direction");
    add_common(measure, raw);
    measure->add_option("--pre", raw.pre, "System ket (forward)");
    measure->add_option("--post", raw.post, "System bra (reversed)");
    measure->add_option("--eigen", raw.eigen, "Eigenbasis literal label:value;...");
    measure->add_option("--pointer", raw.pointer, "Prepared pointer reading (q1 forward, q2 reversed)");
    measure->add_option("--samples", raw.samples, "Number of runs");
    measure->add_option("--direction", raw.direction, "Time direction")
        ->check(CLI::IsMember({"forward", "reversed"}));

    auto *demo = app.add_subcommand("demo", "Run the reproduction suite on the preset");
    add_common(demo, raw);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        throw RequestError(kOk, app.help());
    } catch (const CLI::ParseError &e) {
        throw RequestError(kUsage, e.what());
    }

    CommandRequest req;
    const CLI::App *sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    req.subcommand = name == "evolve"  ? Subcommand::Evolve
                     : name == "abl"   ? Subcommand::Abl
                     : name == "bohm"  ? Subcommand::Bohm
                     : name == "measure" ? Subcommand::Measure
                                       : Subcommand::Demo;
    req.format = raw.format == "json" ? Format::Json : Format::Text;
    req.seed = raw.seed;
    req.direction = raw.direction == "reversed" ? Direction::Reversed : Direction::Forward;
    const auto given = [sub](const char *flag) {
        const CLI::Option *opt = sub->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    raw.cut_given = given("--cut");
    raw.samples_given = given("--samples");

    if (!raw.network.empty()) {
        req.network_file = raw.network;
        try {
            req.network = std::make_shared<const Network>(
                build_network(parse_network_config_text(read_file(raw.network))));
        } catch (const ConfigError &e) {
            throw RequestError(kConfig, e.what());
        }
    } else {
        req.network = std::shared_ptr<const Network>(&preset_double_mz(), [](const Network *) {});
    }
    const Network &net = *req.network;

    if (!raw.pre.empty())
        req.pre = parse_ket_literal(raw.pre);
    if (!raw.post.empty())
        req.post = parse_bra_literal(raw.post);

    if (raw.cut_given) {
        if (raw.cut < 0 || static_cast<std::size_t>(raw.cut) > net.stage_count())
            throw RequestError(kOutOfRange, "cut " + std::to_string(raw.cut) + " out of range [0, " +
                                                std::to_string(net.stage_count()) + "]");
        req.cut = Cut{static_cast<std::size_t>(raw.cut)};
    }
    if (!(raw.quantile >= 0.0 && raw.quantile < 1.0))
        throw RequestError(kOutOfRange, "quantile must lie in [0, 1)");
    req.quantile = raw.quantile;
    if (raw.samples_given) {
        if (raw.samples < 1)
            throw RequestError(kOutOfRange, "samples must be at least 1");
        req.samples = static_cast<std::size_t>(raw.samples);
    }

    switch (req.subcommand) {
    case Subcommand::Evolve:
        if (!req.pre && !req.post)
            throw RequestError(kUsage, "evolve needs --pre and/or --post");
        break;
    case Subcommand::Abl:
        req.basis = raw.basis;
        if (raw.basis != "path") {
            if (!req.cut)
                throw RequestError(kUsage, "a custom --basis needs --cut");
            req.custom_basis = load_basis_file(raw.basis, net.live_modes(*req.cut));
        }
        break;
    case Subcommand::Bohm:
        if (req.direction == Direction::Reversed && !req.post)
            throw RequestError(kUsage, "reversed runs need --post");
        if (req.direction == Direction::Forward && !req.pre) {
            const auto &live = net.live_modes(Cut{0});
            if (live.empty())
                throw RequestError(kUsage, "network has no input mode; pass --pre");
            req.pre = Ket::basis(*live.begin());
        }
        break;
    case Subcommand::Measure: {
        if (req.direction == Direction::Forward && !req.pre)
            throw RequestError(kUsage, "forward measurement needs --pre");
        if (req.direction == Direction::Reversed && !req.post)
            throw RequestError(kUsage, "reversed measurement needs --post");
        // Validate the setup literal up front.
        std::vector<Label> labels;
        std::vector<double> values;
        for (const auto &term : split(raw.eigen, ';')) {
            const auto colon = term.find(':');
            if (colon == std::string::npos || trim(term.substr(0, colon)).empty())
                throw RequestError(kMalformedLiteral, "eigen term '" + term + "' is not label:value");
            labels.push_back(trim(term.substr(0, colon)));
            values.push_back(parse_real(term.substr(colon + 1), term));
        }
        try {
            MeasurementSetup check(labels, values);
        } catch (const DomainError &e) {
            throw RequestError(kOutOfRange, e.what());
        }
        if (!on_pointer_grid(raw.pointer))
            throw RequestError(kOutOfRange, "pointer reading is not on the pointer grid");
        req.eigen = raw.eigen;
        req.pointer = raw.pointer;
        break;
    }
    case Subcommand::Demo:
        break;
    }
    return req;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", round_sig12(v));
    return buf;
}

std::string cut_name(const Network &net, Cut cut) {
    std::string before = cut.index == 0 ? "start" : net.stages()[cut.index - 1].label;
    std::string after = cut.index == net.stage_count() ? "end" : net.stages()[cut.index].label;
    if (before.empty())
        before = "stage " + std::to_string(cut.index - 1);
    if (after.empty())
        after = "stage " + std::to_string(cut.index);
    return "cut " + std::to_string(cut.index) + " (" + before + " | " + after + ")";
}

Report execute_evolve(const CommandRequest &req) {
    const Network &net = *req.network;
    Report rep;
    json payload = json::object();
    std::ostringstream text;
    if (req.pre) {
        const Cut to = req.cut.value_or(net.final_cut());
        json table = json::array();
        text << "forward evolution\n";
        Ket state = *req.pre;
        net.evolve(state, Cut{0}, Cut{0});
        for (std::size_t k = 0; k <= to.index; ++k) {
            if (k > 0)
                state = net.evolve(state, Cut{k - 1}, Cut{k});
            table.push_back({{"cut", k}, {"state", state_to_json(state)}});
            text << "  " << std::left << std::setw(36) << cut_name(net, Cut{k}) << format_ket(state)
                 << "\n";
        }
        payload["forward"] = {{"from", 0}, {"to", to.index}, {"final", state_to_json(state)},
                              {"table", std::move(table)}};
    }
    if (req.post) {
        const Cut to = req.cut.value_or(Cut{0});
        json table = json::array();
        text << "backward evolution\n";
        Bra state = *req.post;
        net.evolve(state, net.final_cut(), net.final_cut());
        for (std::size_t k = net.stage_count() + 1; k-- > to.index;) {
            if (k < net.stage_count())
                state = net.evolve(state, Cut{k + 1}, Cut{k});
            table.push_back({{"cut", k}, {"state", state_to_json(state)}});
            text << "  " << std::left << std::setw(36) << cut_name(net, Cut{k}) << format_bra(state)
                 << "\n";
        }
        payload["backward"] = {{"from", net.stage_count()}, {"to", to.index},
                               {"final", state_to_json(state)}, {"table", std::move(table)}};
    }
    rep.payload = std::move(payload);
    rep.text = text.str();
    return rep;
}

Report execute_abl(const CommandRequest &req) {
    const Network &net = *req.network;
    std::vector<Cut> cuts;
    if (req.cut)
        cuts.push_back(*req.cut);
    else
        for (std::size_t k = 0; k <= net.stage_count(); ++k)
            cuts.push_back(Cut{k});

    Report rep;
    std::ostringstream text;
    json per_cut = json::array();
    for (const Cut cut : cuts) {
        const TwoStateVector tsv = two_state_at_cut(net, *req.pre, *req.post, cut);
        const ProjectorSet outcomes = req.custom_basis ? *req.custom_basis : which_path(tsv.space);
        const std::vector<double> probs = abl_distribution(tsv, outcomes);
        json probabilities = json::object();
        text << cut_name(net, cut) << "\n";
        text << "  two-state  " << format_two_state(tsv) << "\n";
        for (std::size_t i = 0; i < probs.size(); ++i) {
            const auto &label = outcomes.outcomes()[i].label;
            probabilities[label] = round_sig12(probs[i]);
            text << "  prob(" << label << ") = " << fmt(probs[i]) << "\n";
        }
        per_cut.push_back({{"cut", cut.index},
                           {"bra", state_to_json(tsv.post)},
                           {"ket", state_to_json(tsv.pre)},
                           {"display", format_two_state(tsv)},
                           {"probabilities", std::move(probabilities)}});
    }

    const auto report = certainty_report(net, *req.pre, *req.post);
    text << "certain which-path outcomes:";
    if (report.empty())
        text << " none";
    for (const auto &e : report)
        text << " [cut " << e.cut.index << ": " << e.mode << "]";
    text << "\n" << certainty_diagram(net, report);

    rep.payload = {{"basis", req.basis},
                   {"cuts", std::move(per_cut)},
                   {"pairing", amplitude_to_json(pair(net.evolve(*req.post, net.final_cut(), Cut{0}),
                                                      *req.pre))},
                   {"certainty", certainty_report_to_json(report)}};
    rep.text = text.str();
    return rep;
}

std::string path_text(const std::vector<Label> &path) {
    std::string out = "[";
    for (std::size_t i = 0; i < path.size(); ++i)
        out += (i ? ", " : "") + path[i];
    return out + "]";
}

Report execute_bohm(const CommandRequest &req) {
    const Network &net = *req.network;
    const GuidingState state = req.direction == Direction::Forward ? GuidingState(*req.pre)
                                                                   : GuidingState(*req.post);
    Report rep;
    std::ostringstream text;
    if (req.samples) {
        const EnsembleStats stats = run_ensemble(net, *req.samples, req.seed, req.direction, state);
        rep.payload = ensemble_to_json(stats);
        rep.diagnostics = stats.diagnostics;
        text << to_string(stats.direction) << " ensemble, samples " << stats.samples << ", seed "
             << stats.seed << "\n";
        for (const auto &[terminal, count] : stats.detector_counts) {
            text << "  " << terminal << ": " << count << " ("
                 << fmt(static_cast<double>(count) / static_cast<double>(stats.samples)) << ")\n";
            for (const auto &[path, n] : stats.conditional_paths.at(terminal))
                text << "    path [" << path << "]: " << n << " ("
                     << fmt(static_cast<double>(n) / static_cast<double>(count)) << ")\n";
        }
    } else {
        const TrajectoryRecord rec = run_trajectory(net, req.quantile, req.direction, state);
        rep.payload = trajectory_to_json(rec);
        rep.diagnostics = rec.diagnostics;
        text << to_string(rec.direction) << " trajectory, quantile0 " << fmt(rec.quantile0) << "\n";
        for (const auto &s : rec.states)
            text << "  " << std::left << std::setw(36) << cut_name(net, s.cut) << s.mode << "  q="
                 << fmt(s.quantile) << "\n";
        text << "  path " << path_text(rec.path()) << " -> "
             << (rec.direction == Direction::Forward ? "detector " : "source ") << rec.terminal
             << "\n";
    }
    rep.payload.erase("diagnostics");
    rep.text = text.str();
    return rep;
}

Report execute_measure(const CommandRequest &req) {
    std::vector<Label> labels;
    std::vector<double> values;
    for (const auto &term : split(req.eigen, ';')) {
        const auto colon = term.find(':');
        labels.push_back(trim(term.substr(0, colon)));
        values.push_back(parse_real(term.substr(colon + 1), term));
    }
    const MeasurementSetup setup(labels, values);
    const std::size_t runs = req.samples.value_or(1);

    Report rep;
    std::ostringstream text;
    json records = json::array();
    for (std::size_t i = 0; i < runs; ++i) {
        const std::uint64_t seed = runs == 1 ? req.seed : derive_seed(req.seed, i);
        const MeasurementRecord rec =
            req.direction == Direction::Forward
                ? measure_forward(setup, *req.pre, req.pointer, seed)
                : measure_backward(setup, *req.post, req.pointer, seed);
        records.push_back(record_to_json(rec));
        text << (rec.direction == TimeDirection::Forward ? "forward " : "backward") << "  q1="
             << fmt(rec.q1()) << "  q2=" << fmt(rec.q2()) << "  deduced=" << fmt(rec.deduced)
             << "  seed=" << rec.seed << "\n";
    }
    json eigen = json::object();
    for (std::size_t k = 0; k < labels.size(); ++k)
        eigen[labels[k]] = round_sig12(values[k]);
    rep.payload = {{"seed", req.seed}, {"eigenvalues", std::move(eigen)}, {"records", std::move(records)}};
    rep.text = text.str();
    return rep;
}

} // namespace

Report execute(const CommandRequest &req) {
    Report rep;
    switch (req.subcommand) {
    case Subcommand::Evolve:
        rep = execute_evolve(req);
        break;
    case Subcommand::Abl:
        rep = execute_abl(req);
        break;
    case Subcommand::Bohm:
        rep = execute_bohm(req);
        break;
    case Subcommand::Measure:
        rep = execute_measure(req);
        break;
    case Subcommand::Demo: {
        const auto items = run_demo(req.seed);
        rep.payload = demo_to_json(items, req.seed);
        rep.text = render_demo_text(items, req.seed);
        const bool all = std::all_of(items.begin(), items.end(), [](const auto &i) { return i.pass; });
        rep.status = all ? kOk : kComputation;
        break;
    }
    }
    rep.format = req.format;
    return rep;
}

std::string render(const Report &report) {
    if (report.format == Format::Json) {
        json doc = report.payload;
        if (!report.diagnostics.empty())
            doc["diagnostics"] = report.diagnostics;
        return doc.dump(2) + "\n";
    }
    std::string out = report.text;
    for (const auto &d : report.diagnostics)
        out += "warning: " + d + "\n";
    return out;
}

std::string certainty_diagram(const Network &net, const std::vector<CertaintyEntry> &report) {
    const std::size_t cuts = net.stage_count() + 1;
    Basis rows;
    for (std::size_t k = 0; k < cuts; ++k)
        for (const auto &m : net.live_modes(Cut{k}))
            rows.insert(m);
    std::size_t width = 4;
    for (const auto &m : rows)
        width = std::max(width, m.size() + 2);

    std::ostringstream os;
    std::ostringstream header;
    header << std::left << std::setw(static_cast<int>(width)) << "cut";
    for (std::size_t k = 0; k + 1 < cuts; ++k)
        header << std::setw(4) << k;
    os << header.str() << cuts - 1 << "\n" << std::left;
    for (const auto &m : rows) {
        std::string line;
        for (std::size_t k = 0; k < cuts; ++k) {
            const bool live = net.live_modes(Cut{k}).contains(m);
            const bool certain = std::any_of(report.begin(), report.end(), [&](const auto &e) {
                return e.cut.index == k && e.mode == m;
            });
            line += certain ? "##  " : live ? "--  " : "    ";
        }
        while (!line.empty() && line.back() == ' ')
            line.pop_back();
        os << std::setw(static_cast<int>(width)) << m << line << "\n";
    }
    os << "stages:";
    for (std::size_t k = 0; k < net.stage_count(); ++k)
        os << " " << k << "=" << (net.stages()[k].label.empty() ? "?" : net.stages()[k].label)
           << (k + 1 < net.stage_count() ? ";" : "");
    os << "\n";
    return os.str();
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    try {
        const CommandRequest req = parse_request(args);
        const Report rep = execute(req);
        out << render(rep);
        return rep.status;
    } catch (const RequestError &e) {
        if (e.code() == kOk) {
            out << e.what();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return e.code();
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const timesym::Error &e) {
        err << "error: " << e.what() << "\n";
        return kComputation;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kComputation;
    }
}

} // namespace timesym::cli
