#pragma once

/**
 * @file
 * Sparse linear algebra over labeled orthonormal bases.
 *
 * Kets and bras are finite maps from basis labels to complex amplitudes,
 * operators are finite maps from (row, column) label pairs. Iteration
 * follows lexicographic label order so that printing and serialization are
 * deterministic. Amplitudes with magnitude below kPruneThreshold are dropped
 * after every operation.
 */

#include <algorithm>
#include <complex>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "json.hpp"

namespace timesym {

using Amplitude = std::complex<double>;
using Label = std::string;
using Basis = std::set<Label>;

inline constexpr double kPruneThreshold = 1e-14;
inline constexpr double kDefaultTolerance = 1e-12;

struct KetTag {};
struct BraTag {};

/**
 * Finite-support vector over labeled basis states. The Tag parameter keeps
 * kets and bras apart in the type system.
 *
 * Bras are written the way the beamsplitter literature writes them: the
 * entries of a bra are the components of the ket it is dual to, so the
 * bra "(<f| - i<e|)/sqrt2" is the dual of (|f> - i|e>)/sqrt2 and pairs
 * antilinearly, <b|k> = sum_k conj(b_k) k_k. adjoint() therefore copies
 * entries, and backward evolution through U applies U^dagger to them.
 */
template <class Tag> class LabeledVector {
  public:
    using Entries = std::map<Label, Amplitude>;

    LabeledVector() = default;
    LabeledVector(std::initializer_list<std::pair<const Label, Amplitude>> init);
    explicit LabeledVector(Entries entries);

    /// Basis state with unit amplitude.
    static LabeledVector basis(const Label &label) { return LabeledVector({{label, 1.0}}); }

    Amplitude operator[](const Label &label) const;
    void set(const Label &label, Amplitude value);
    void add(const Label &label, Amplitude value);

    const Entries &entries() const noexcept { return entries_; }
    Basis support() const;
    bool empty() const noexcept { return entries_.empty(); }

    double squared_norm() const;
    double norm() const;
    LabeledVector normalized() const;

    LabeledVector &operator+=(const LabeledVector &rhs);
    LabeledVector &operator-=(const LabeledVector &rhs);
    LabeledVector &operator*=(Amplitude s);

    friend LabeledVector operator+(LabeledVector lhs, const LabeledVector &rhs) { return lhs += rhs; }
    friend LabeledVector operator-(LabeledVector lhs, const LabeledVector &rhs) { return lhs -= rhs; }
    friend LabeledVector operator*(Amplitude s, LabeledVector v) { return v *= s; }
    friend LabeledVector operator*(LabeledVector v, Amplitude s) { return v *= s; }

  private:
    void prune();
    Entries entries_;
};

using Ket = LabeledVector<KetTag>;
using Bra = LabeledVector<BraTag>;

/**
 * Operator from an input basis to an output basis. Entries are keyed by
 * (row, column) = (output label, input label).
 */
class LinearOp {
  public:
    using Key = std::pair<Label, Label>;
    using Entries = std::map<Key, Amplitude>;

    LinearOp(Basis input, Basis output);
    LinearOp(Basis input, Basis output, Entries entries);

    static LinearOp identity(const Basis &basis);

    const Basis &input() const noexcept { return input_; }
    const Basis &output() const noexcept { return output_; }
    const Entries &entries() const noexcept { return entries_; }

    Amplitude at(const Label &row, const Label &col) const;
    void set(const Label &row, const Label &col, Amplitude value);
    void add(const Label &row, const Label &col, Amplitude value);

    bool is_square() const { return input_ == output_; }

    LinearOp &operator+=(const LinearOp &rhs);
    LinearOp &operator*=(Amplitude s);

  private:
    void prune();
    Basis input_;
    Basis output_;
    Entries entries_;
};

/// Operator product lhs * rhs (rhs acts first).
LinearOp compose(const LinearOp &lhs, const LinearOp &rhs);

Bra adjoint(const Ket &ket);
Ket adjoint(const Bra &bra);
LinearOp adjoint(const LinearOp &op);

/// Scalar <bra|ket> = sum conj(b_k) k_k.
Amplitude pair(const Bra &bra, const Ket &ket);

/// Matrix-vector product. Throws DimensionError if the ket has support
/// outside op.input().
Ket apply(const LinearOp &op, const Ket &ket);

/// The bra <bra| op, i.e. entries op^dagger b. The bra must be supported on
/// op.output(); pair(apply_dual(b, op), k) == pair(b, apply(op, k)).
Bra apply_dual(const Bra &bra, const LinearOp &op);

class Projector;

/// |t><t| on `space` (defaults to the support of t). t must be normalized.
Projector make_projector(const Ket &target, const Basis &space = {},
                         double tol = kDefaultTolerance);

/// Sum of |m><m| over the nonempty subset, embedded in `space` (defaults to
/// the subset itself).
Projector make_projector(const Basis &subset, const Basis &space = {});

/// Validates an arbitrary operator as a projector (square, P*P = P,
/// P = P^dagger within tol).
Projector make_projector_from(const LinearOp &op, double tol = kDefaultTolerance);

/// Hermitian idempotent operator, only constructible through
/// make_projector.
class Projector {
  public:
    const LinearOp &op() const noexcept { return op_; }
    const Basis &space() const noexcept { return op_.input(); }

  private:
    explicit Projector(LinearOp op) : op_(std::move(op)) {}
    friend Projector make_projector(const Ket &, const Basis &, double);
    friend Projector make_projector(const Basis &, const Basis &);
    friend Projector make_projector_from(const LinearOp &, double);
    LinearOp op_;
};

/// adjoint(op) * op equals the identity on op.input() within tol entrywise.
bool check_unitary(const LinearOp &op, double tol = kDefaultTolerance);

/// Largest entrywise magnitude of lhs - rhs over the union of their entries.
double max_abs_diff(const LinearOp &lhs, const LinearOp &rhs);

template <class Tag>
double max_abs_diff(const LabeledVector<Tag> &lhs, const LabeledVector<Tag> &rhs) {
    double worst = 0.0;
    const LabeledVector<Tag> diff = lhs - rhs;
    for (const auto &[label, amp] : diff.entries())
        worst = std::max(worst, std::abs(amp));
    return worst;
}

/// Round to 12 significant digits; -0 collapses to 0.
double round_sig12(double value);

/// [re, im] with 12 significant digits.
nlohmann::json amplitude_to_json(Amplitude amp);

template <class Tag> nlohmann::json state_to_json(const LabeledVector<Tag> &state) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto &[label, amp] : state.entries())
        out[label] = amplitude_to_json(amp);
    return out;
}

/// Compact coefficient text: "", "-", "i", "-i", "0.5", "(0.5+0.5i)".
/// Unit coefficients print empty so they can prefix a basis symbol.
std::string format_coefficient(Amplitude amp);

std::string format_ket(const Ket &ket);
std::string format_bra(const Bra &bra);

} // namespace timesym
