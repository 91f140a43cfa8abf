#pragma once

/**
 * @file
 * Two-state description of pre- and postselected systems.
 *
 * Between a preparation and a postselection the system is described by the
 * ordered pair (backward-evolved bra, forward-evolved ket). The pair is kept
 * as a pair; it is never collapsed to the scalar <bra|ket> except when a
 * probability is asked for. Conditional probabilities of intermediate
 * outcomes follow the ABL rule
 *
 *     prob(c_n) = |<post|P_n|pre>|^2 / sum_i |<post|P_i|pre>|^2 .
 */

#include <array>
#include <string>
#include <vector>

#include "timesym/hilbert.hpp"
#include "timesym/network.hpp"

namespace timesym {

inline constexpr double kCertaintyThreshold = 1.0 - 1e-12;

struct TwoStateVector {
    Bra post;
    Ket pre;
    Cut cut;
    /// Space the pair lives on (live modes at the cut).
    Basis space;
};

/// Evolves `pre` forward from cut 0 and `post` backward from the final cut,
/// and packages both at `cut`. Throws InconsistentSelection if the pair is
/// orthogonal (|<post|pre>| <= tol).
TwoStateVector two_state_at_cut(const Network &net, const Ket &pre, const Bra &post, Cut cut,
                                double tol = kDefaultTolerance);

/// Pair on a generic finite-dimensional space with no evolution (free
/// Hamiltonian zero). Same validation as two_state_at_cut.
TwoStateVector two_state(const Bra &post, const Ket &pre, const Basis &space,
                         double tol = kDefaultTolerance);

/// Printed form s <B| (K): scalar s > 0, B with unit leading coefficient,
/// the leading bra coefficient moved into K and the smallest ket magnitude
/// factored out into s.
struct TwoStateDisplay {
    double scale = 1.0;
    Bra bra;
    Ket ket;
};

TwoStateDisplay display_form(const TwoStateVector &tsv);
std::string format_two_state(const TwoStateVector &tsv);

/// Mutually orthogonal projectors resolving the identity on `space`.
class ProjectorSet {
  public:
    struct Outcome {
        std::string label;
        Projector projector;
    };

    const std::vector<Outcome> &outcomes() const noexcept { return outcomes_; }
    const Basis &space() const noexcept { return space_; }
    std::size_t size() const noexcept { return outcomes_.size(); }
    /// Position of the outcome with this label; throws DomainError if absent.
    std::size_t index_of(const std::string &label) const;

  private:
    friend ProjectorSet make_projector_set(std::vector<Outcome> outcomes, double tol);
    ProjectorSet(std::vector<Outcome> outcomes, Basis space)
        : outcomes_(std::move(outcomes)), space_(std::move(space)) {}
    std::vector<Outcome> outcomes_;
    Basis space_;
};

/// Validates labels (unique), a common space, mutual orthogonality and
/// completeness. Degenerate (higher-rank) outcomes are allowed.
ProjectorSet make_projector_set(std::vector<ProjectorSet::Outcome> outcomes,
                                double tol = kDefaultTolerance);

/// One rank-one outcome per mode of `space`, labeled by the mode.
ProjectorSet which_path(const Basis &space);

/// Conditional probability of one outcome.
double abl_probability(const TwoStateVector &tsv, const ProjectorSet &outcomes,
                       const std::string &which);

/// Conditional probabilities of all outcomes, in outcome order.
std::vector<double> abl_distribution(const TwoStateVector &tsv, const ProjectorSet &outcomes);

/// Unnormalized ABL weights |<post|P_i|pre>|^2.
std::vector<double> abl_weights(const TwoStateVector &tsv, const ProjectorSet &outcomes);

/**
 * Outcome distribution when the intermediate measurement is actually
 * performed: collapse the forward state with each P_i, evolve the collapsed
 * branch forward to the final cut and weight it with the postselection
 * probability. Only forward evolution is used. Returns the distribution
 * conditional on the postselection succeeding.
 */
std::vector<double> measured_intermediate_distribution(const Network &net, const Ket &pre,
                                                       const Bra &post, Cut cut,
                                                       const ProjectorSet &outcomes);

struct CertaintyEntry {
    Cut cut;
    Label mode;
    double probability = 0.0;
};

/// Which-path outcomes with ABL probability >= kCertaintyThreshold at every
/// interior cut of the network.
std::vector<CertaintyEntry> certainty_report(const Network &net, const Ket &pre, const Bra &post);

nlohmann::json certainty_report_to_json(const std::vector<CertaintyEntry> &report);

/// Unit vector in R^3.
class SpinDirection {
  public:
    explicit SpinDirection(std::array<double, 3> n, double tol = kDefaultTolerance);
    static SpinDirection x() { return SpinDirection({1.0, 0.0, 0.0}); }
    static SpinDirection y() { return SpinDirection({0.0, 1.0, 0.0}); }
    static SpinDirection z() { return SpinDirection({0.0, 0.0, 1.0}); }

    const std::array<double, 3> &components() const noexcept { return n_; }

  private:
    std::array<double, 3> n_;
};

inline const Label kSpinUp = "up";
inline const Label kSpinDown = "down";
inline const std::string kSpinPlus = "+1/2";
inline const std::string kSpinMinus = "-1/2";

Basis spin_basis();

/// Projectors (1 +- n.sigma)/2 for the eigenvalues +-1/2 of the spin
/// component along n, labeled kSpinPlus and kSpinMinus.
ProjectorSet spin_observable(const SpinDirection &n);

/// Normalized eigenket of n.sigma with eigenvalue +1 (plus) or -1.
Ket spin_eigenket(const SpinDirection &n, bool plus = true);

} // namespace timesym
