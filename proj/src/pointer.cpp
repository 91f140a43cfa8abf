#include "timesym/pointer.hpp"

#include <cmath>
#include <set>

#include "timesym/error.hpp"
#include "timesym/rng.hpp"

namespace timesym {

bool on_pointer_grid(double x) {
    if (!std::isfinite(x) || std::abs(x) > kPointerRange)
        return false;
    const double scaled = x / kPointerResolution;
    return scaled == std::floor(scaled);
}

MeasurementSetup::MeasurementSetup(std::vector<Label> eigenbasis, std::vector<double> eigenvalues)
    : eigenbasis_(std::move(eigenbasis)), eigenvalues_(std::move(eigenvalues)) {
    if (eigenbasis_.empty())
        throw DomainError("measurement setup needs at least one eigenstate");
    if (eigenbasis_.size() != eigenvalues_.size())
        throw DomainError("eigenbasis and eigenvalue lists differ in length");
    std::set<Label> labels(eigenbasis_.begin(), eigenbasis_.end());
    if (labels.size() != eigenbasis_.size())
        throw DomainError("duplicate eigenstate label");
    for (std::size_t i = 0; i < eigenvalues_.size(); ++i) {
        if (!on_pointer_grid(eigenvalues_[i]))
            throw DomainError("eigenvalue " + std::to_string(eigenvalues_[i]) +
                              " is not on the pointer grid");
        for (std::size_t j = 0; j < i; ++j)
            if (eigenvalues_[i] == eigenvalues_[j])
                throw DomainError("eigenvalues must be pairwise distinct");
    }
}

std::size_t MeasurementSetup::decode(double value) const {
    for (std::size_t k = 0; k < eigenvalues_.size(); ++k)
        if (std::abs(eigenvalues_[k] - value) <= kPointerTolerance)
            return k;
    throw DomainError("pointer shift " + std::to_string(value) + " matches no eigenvalue");
}

namespace {

template <class Tag>
std::vector<Amplitude> expand(const MeasurementSetup &setup, const LabeledVector<Tag> &system) {
    const std::set<Label> basis(setup.eigenbasis().begin(), setup.eigenbasis().end());
    for (const auto &[label, amp] : system.entries())
        if (!basis.contains(label))
            throw DimensionError("system component '" + label +
                                 "' lies outside the measurement eigenbasis");
    const double norm = system.norm();
    if (norm == 0.0)
        throw DomainError("system state has zero norm");
    std::vector<Amplitude> coeffs;
    for (const auto &label : setup.eigenbasis())
        coeffs.push_back(system[label] / norm);
    return coeffs;
}

void require_grid(double q) {
    if (!on_pointer_grid(q))
        throw DomainError("pointer reading " + std::to_string(q) + " is not on the pointer grid");
}

std::size_t sample(const std::vector<JointTerm> &terms, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0));
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const double p = std::norm(terms[k].amplitude);
        if (p == 0.0)
            continue;
        last_nonzero = k;
        cumulative += p;
        if (u < cumulative)
            return k;
    }
    return last_nonzero;
}

} // namespace

std::vector<JointTerm> entangle_forward(const MeasurementSetup &setup, const Ket &system, double q1) {
    require_grid(q1);
    const auto alpha = expand(setup, system);
    std::vector<JointTerm> out;
    for (std::size_t k = 0; k < setup.size(); ++k)
        out.push_back({setup.eigenbasis()[k], q1 + setup.eigenvalues()[k], alpha[k]});
    return out;
}

std::vector<JointTerm> entangle_backward(const MeasurementSetup &setup, const Bra &system, double q2) {
    require_grid(q2);
    const auto beta = expand(setup, system);
    std::vector<JointTerm> out;
    for (std::size_t k = 0; k < setup.size(); ++k)
        out.push_back({setup.eigenbasis()[k], q2 - setup.eigenvalues()[k], beta[k]});
    return out;
}

MeasurementRecord measure_forward(const MeasurementSetup &setup, const Ket &system, double q1,
                                  std::uint64_t seed) {
    const auto terms = entangle_forward(setup, system, q1);
    const std::size_t l = sample(terms, seed);
    MeasurementRecord rec;
    rec.direction = TimeDirection::Forward;
    rec.q_initial = q1;
    rec.q_final = terms[l].pointer;
    rec.deduced = decode_forward(rec.q_initial, rec.q_final);
    rec.collapsed = Ket::basis(terms[l].system);
    rec.seed = seed;
    return rec;
}

MeasurementRecord measure_backward(const MeasurementSetup &setup, const Bra &system, double q2,
                                   std::uint64_t seed) {
    const auto terms = entangle_backward(setup, system, q2);
    const std::size_t n = sample(terms, seed);
    MeasurementRecord rec;
    rec.direction = TimeDirection::Backward;
    rec.q_initial = q2;
    rec.q_final = terms[n].pointer;
    rec.deduced = decode_backward(rec.q_initial, rec.q_final);
    rec.collapsed = Bra::basis(terms[n].system);
    rec.seed = seed;
    return rec;
}

nlohmann::json record_to_json(const MeasurementRecord &record) {
    nlohmann::json out{
        {"direction", record.direction == TimeDirection::Forward ? "forward" : "backward"},
        {"q_initial", round_sig12(record.q_initial)},
        {"q_final", round_sig12(record.q_final)},
        {"deduced", round_sig12(record.deduced)},
        {"seed", record.seed},
    };
    out["collapsed"] = std::visit([](const auto &state) { return state_to_json(state); },
                                  record.collapsed);
    return out;
}

} // namespace timesym
