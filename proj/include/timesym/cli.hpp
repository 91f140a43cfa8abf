#pragma once

/**
 * @file
 * Command-line front end: request parsing, dispatch and rendering.
 *
 * Exit codes:
 *   0  success
 *   2  usage error (unknown flag or subcommand, missing argument)
 *   3  malformed state literal
 *   4  value out of range (cut, quantile, samples, pointer reading)
 *   5  network or basis file missing or invalid
 *   6  computation error (inconsistent selection, undefined conditional,
 *      unsupported merge, failed demo item, ...)
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "timesym/hilbert.hpp"
#include "timesym/network.hpp"
#include "timesym/pilot.hpp"
#include "timesym/twotime.hpp"

namespace timesym::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kMalformedLiteral = 3,
    kOutOfRange = 4,
    kConfig = 5,
    kComputation = 6,
};

class RequestError : public std::runtime_error {
  public:
    RequestError(ExitCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }

  private:
    ExitCode code_;
};

enum class Subcommand { Evolve, Abl, Bohm, Measure, Demo };
enum class Format { Text, Json };

struct CommandRequest {
    Subcommand subcommand = Subcommand::Demo;
    /// Empty when the preset is used.
    std::string network_file;
    std::shared_ptr<const Network> network;
    std::optional<Ket> pre;
    std::optional<Bra> post;
    std::optional<Cut> cut;
    /// "path" or the file the custom basis was read from.
    std::string basis = "path";
    std::optional<ProjectorSet> custom_basis;
    double quantile = 0.25;
    std::optional<std::size_t> samples;
    std::uint64_t seed = 0;
    Direction direction = Direction::Forward;
    Format format = Format::Text;
    std::string eigen = "up:0.5;down:-0.5";
    double pointer = 0.0;
};

/// Parses "mode:re,im;mode:re,im". Throws RequestError(kMalformedLiteral).
Ket parse_ket_literal(const std::string &text);
Bra parse_bra_literal(const std::string &text);

/// Reads a custom outcome basis file:
///   {"outcomes": [{"label": "D=0", "modes": ["c"]},
///                 {"label": "plus", "state": "c:0.7071067811865476,0;d:0.7071067811865476,0"}]}
/// "modes" yields a which-path (possibly degenerate) projector, "state" a
/// rank-one projector. The set must resolve the identity on `space`.
ProjectorSet load_basis_file(const std::string &path, const Basis &space);

/// argv excludes the program name. Throws RequestError.
CommandRequest parse_request(const std::vector<std::string> &args);

struct Report {
    nlohmann::json payload;
    std::string text;
    Format format = Format::Text;
    std::vector<std::string> diagnostics;
    ExitCode status = kOk;
};

/// Throws timesym::Error subclasses on computation failures.
Report execute(const CommandRequest &request);

/// Deterministic bytes: JSON with sorted keys and 12 significant digits, or
/// the text form followed by diagnostics.
std::string render(const Report &report);

/// ASCII table of live modes per cut; certain which-path outcomes are drawn
/// as "##", other live modes as "--".
std::string certainty_diagram(const Network &net, const std::vector<CertaintyEntry> &report);

/// Full command-line entry point; writes to the given streams and returns
/// the exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace timesym::cli
