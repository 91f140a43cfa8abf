#pragma once

/**
 * @file
 * Impulsive von Neumann measurement with an explicit pointer.
 *
 * The coupling g(t) p A is taken as an instantaneous unit impulse, so the
 * interaction shifts the pointer by exactly the eigenvalue a_k of the
 * measured observable:
 *
 *   forward:  |psi>|q1>  ->  sum_k alpha_k |a_k>|q1 + a_k>,  read q2
 *   backward: <psi|<q2|  ->  sum_k beta_k  <a_k|<q2 - a_k|,  read q1
 *
 * Either observer recovers the eigenvalue as q2 - q1. Pointer positions and
 * eigenvalues are restricted to the grid of multiples of kPointerResolution
 * (with magnitude at most kPointerRange) so that every shift and difference
 * is exact in double precision.
 */

#include <cstdint>
#include <variant>
#include <vector>

#include "json.hpp"
#include "timesym/hilbert.hpp"

namespace timesym {

inline constexpr double kPointerResolution = 0x1.0p-20;
inline constexpr double kPointerRange = 0x1.0p30;
inline constexpr double kPointerTolerance = 1e-9;

/// True if x is a multiple of kPointerResolution within kPointerRange.
bool on_pointer_grid(double x);

class MeasurementSetup {
  public:
    /// Throws DomainError on length mismatch, empty lists, duplicate labels,
    /// repeated eigenvalues or off-grid eigenvalues.
    MeasurementSetup(std::vector<Label> eigenbasis, std::vector<double> eigenvalues);

    const std::vector<Label> &eigenbasis() const noexcept { return eigenbasis_; }
    const std::vector<double> &eigenvalues() const noexcept { return eigenvalues_; }
    std::size_t size() const noexcept { return eigenbasis_.size(); }

    /// Index of the eigenvalue within kPointerTolerance of `value`.
    std::size_t decode(double value) const;

  private:
    std::vector<Label> eigenbasis_;
    std::vector<double> eigenvalues_;
};

/// One term of the system-pointer state after the interaction.
struct JointTerm {
    Label system;
    double pointer = 0.0;
    Amplitude amplitude;
};

/// Sum_k alpha_k |a_k>|q1 + a_k> for the normalized system ket.
std::vector<JointTerm> entangle_forward(const MeasurementSetup &setup, const Ket &system, double q1);
/// Sum_k beta_k <a_k|<q2 - a_k| for the normalized system bra.
std::vector<JointTerm> entangle_backward(const MeasurementSetup &setup, const Bra &system, double q2);

enum class TimeDirection { Forward, Backward };

struct MeasurementRecord {
    TimeDirection direction = TimeDirection::Forward;
    /// Reading taken first in the observer's own time order: q1 forward,
    /// q2 backward.
    double q_initial = 0.0;
    double q_final = 0.0;
    double deduced = 0.0;
    std::variant<Ket, Bra> collapsed;
    std::uint64_t seed = 0;

    /// Pointer readings in laboratory order.
    double q1() const { return direction == TimeDirection::Forward ? q_initial : q_final; }
    double q2() const { return direction == TimeDirection::Forward ? q_final : q_initial; }
};

/// Prepare q1, interact, sample outcome l with probability |alpha_l|^2 and
/// read q2 = q1 + a_l.
MeasurementRecord measure_forward(const MeasurementSetup &setup, const Ket &system, double q1,
                                  std::uint64_t seed);

/// Prepare q2, interact, sample outcome n with probability |beta_n|^2 and
/// read q1 = q2 - a_n.
MeasurementRecord measure_backward(const MeasurementSetup &setup, const Bra &system, double q2,
                                   std::uint64_t seed);

/// Eigenvalue deduced by a forward observer from the two readings.
inline double decode_forward(double q1, double q2) { return q2 - q1; }
/// Eigenvalue deduced by a backward observer, who prepared q2 and read q1.
inline double decode_backward(double q2, double q1) { return q2 - q1; }

nlohmann::json record_to_json(const MeasurementRecord &record);

} // namespace timesym
