#include "timesym/hilbert.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "timesym/error.hpp"

namespace timesym {

namespace {

void require_finite(Amplitude value) {
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
        throw DomainError("amplitude is not finite");
}

std::string join_labels(const Basis &basis) {
    std::string out;
    for (const auto &label : basis) {
        if (!out.empty())
            out += ",";
        out += label;
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// LabeledVector

template <class Tag>
LabeledVector<Tag>::LabeledVector(std::initializer_list<std::pair<const Label, Amplitude>> init) {
    for (const auto &[label, amp] : init)
        add(label, amp);
}

template <class Tag> LabeledVector<Tag>::LabeledVector(Entries entries) {
    for (const auto &[label, amp] : entries)
        add(label, amp);
}

template <class Tag> Amplitude LabeledVector<Tag>::operator[](const Label &label) const {
    auto it = entries_.find(label);
    return it == entries_.end() ? Amplitude{} : it->second;
}

template <class Tag> void LabeledVector<Tag>::set(const Label &label, Amplitude value) {
    require_finite(value);
    if (std::abs(value) < kPruneThreshold)
        entries_.erase(label);
    else
        entries_[label] = value;
}

template <class Tag> void LabeledVector<Tag>::add(const Label &label, Amplitude value) {
    set(label, (*this)[label] + value);
}

template <class Tag> Basis LabeledVector<Tag>::support() const {
    Basis out;
    for (const auto &[label, amp] : entries_)
        out.insert(label);
    return out;
}

template <class Tag> double LabeledVector<Tag>::squared_norm() const {
    double sum = 0.0;
    for (const auto &[label, amp] : entries_)
        sum += std::norm(amp);
    return sum;
}

template <class Tag> double LabeledVector<Tag>::norm() const { return std::sqrt(squared_norm()); }

template <class Tag> LabeledVector<Tag> LabeledVector<Tag>::normalized() const {
    const double n = norm();
    if (n == 0.0)
        throw DomainError("cannot normalize a zero vector");
    return (1.0 / n) * *this;
}

template <class Tag> LabeledVector<Tag> &LabeledVector<Tag>::operator+=(const LabeledVector &rhs) {
    for (const auto &[label, amp] : rhs.entries_)
        add(label, amp);
    return *this;
}

template <class Tag> LabeledVector<Tag> &LabeledVector<Tag>::operator-=(const LabeledVector &rhs) {
    for (const auto &[label, amp] : rhs.entries_)
        add(label, -amp);
    return *this;
}

template <class Tag> LabeledVector<Tag> &LabeledVector<Tag>::operator*=(Amplitude s) {
    require_finite(s);
    for (auto &[label, amp] : entries_)
        amp *= s;
    prune();
    return *this;
}

template <class Tag> void LabeledVector<Tag>::prune() {
    std::erase_if(entries_, [](const auto &kv) { return std::abs(kv.second) < kPruneThreshold; });
}

template class LabeledVector<KetTag>;
template class LabeledVector<BraTag>;

// ---------------------------------------------------------------------------
// LinearOp

LinearOp::LinearOp(Basis input, Basis output) : input_(std::move(input)), output_(std::move(output)) {}

LinearOp::LinearOp(Basis input, Basis output, Entries entries)
    : input_(std::move(input)), output_(std::move(output)) {
    for (const auto &[key, amp] : entries)
        add(key.first, key.second, amp);
}

LinearOp LinearOp::identity(const Basis &basis) {
    LinearOp op(basis, basis);
    for (const auto &label : basis)
        op.set(label, label, 1.0);
    return op;
}

Amplitude LinearOp::at(const Label &row, const Label &col) const {
    auto it = entries_.find({row, col});
    return it == entries_.end() ? Amplitude{} : it->second;
}

void LinearOp::set(const Label &row, const Label &col, Amplitude value) {
    if (!output_.contains(row) || !input_.contains(col))
        throw DimensionError("operator entry (" + row + "," + col + ") outside declared bases");
    require_finite(value);
    if (std::abs(value) < kPruneThreshold)
        entries_.erase({row, col});
    else
        entries_[{row, col}] = value;
}

void LinearOp::add(const Label &row, const Label &col, Amplitude value) {
    set(row, col, at(row, col) + value);
}

LinearOp &LinearOp::operator+=(const LinearOp &rhs) {
    if (rhs.input_ != input_ || rhs.output_ != output_)
        throw DimensionError("operator sum over different bases");
    for (const auto &[key, amp] : rhs.entries_)
        add(key.first, key.second, amp);
    return *this;
}

LinearOp &LinearOp::operator*=(Amplitude s) {
    require_finite(s);
    for (auto &[key, amp] : entries_)
        amp *= s;
    prune();
    return *this;
}

void LinearOp::prune() {
    std::erase_if(entries_, [](const auto &kv) { return std::abs(kv.second) < kPruneThreshold; });
}

LinearOp compose(const LinearOp &lhs, const LinearOp &rhs) {
    if (rhs.output() != lhs.input())
        throw DimensionError("compose: output basis {" + join_labels(rhs.output()) +
                             "} does not match input basis {" + join_labels(lhs.input()) + "}");
    // Index lhs by column for the inner sum.
    std::map<Label, std::vector<std::pair<Label, Amplitude>>> lhs_by_col;
    for (const auto &[key, amp] : lhs.entries())
        lhs_by_col[key.second].emplace_back(key.first, amp);

    LinearOp out(rhs.input(), lhs.output());
    for (const auto &[key, amp] : rhs.entries()) {
        const auto &[mid, col] = key;
        auto it = lhs_by_col.find(mid);
        if (it == lhs_by_col.end())
            continue;
        for (const auto &[row, lamp] : it->second)
            out.add(row, col, lamp * amp);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Duality and products

Bra adjoint(const Ket &ket) { return Bra(ket.entries()); }

Ket adjoint(const Bra &bra) { return Ket(bra.entries()); }

LinearOp adjoint(const LinearOp &op) {
    LinearOp out(op.output(), op.input());
    for (const auto &[key, amp] : op.entries())
        out.set(key.second, key.first, std::conj(amp));
    return out;
}

Amplitude pair(const Bra &bra, const Ket &ket) {
    Amplitude sum{};
    for (const auto &[label, amp] : bra.entries())
        sum += std::conj(amp) * ket[label];
    return sum;
}

Ket apply(const LinearOp &op, const Ket &ket) {
    for (const auto &[label, amp] : ket.entries())
        if (!op.input().contains(label))
            throw DimensionError("ket component '" + label + "' outside operator input basis {" +
                                 join_labels(op.input()) + "}");
    Ket out;
    for (const auto &[key, amp] : op.entries())
        out.add(key.first, amp * ket[key.second]);
    return out;
}

Bra apply_dual(const Bra &bra, const LinearOp &op) {
    for (const auto &[label, amp] : bra.entries())
        if (!op.output().contains(label))
            throw DimensionError("bra component '" + label + "' outside operator output basis {" +
                                 join_labels(op.output()) + "}");
    Bra out;
    for (const auto &[key, amp] : op.entries())
        out.add(key.second, std::conj(amp) * bra[key.first]);
    return out;
}

// ---------------------------------------------------------------------------
// Projectors and checks

double max_abs_diff(const LinearOp &lhs, const LinearOp &rhs) {
    double worst = 0.0;
    for (const auto &[key, amp] : lhs.entries())
        worst = std::max(worst, std::abs(amp - rhs.at(key.first, key.second)));
    for (const auto &[key, amp] : rhs.entries())
        worst = std::max(worst, std::abs(amp - lhs.at(key.first, key.second)));
    return worst;
}

Projector make_projector(const Ket &target, const Basis &space, double tol) {
    if (std::abs(target.squared_norm() - 1.0) > tol)
        throw DomainError("projector target is not normalized (squared norm " +
                          std::to_string(target.squared_norm()) + ")");
    Basis basis = space.empty() ? target.support() : space;
    for (const auto &label : target.support())
        if (!basis.contains(label))
            throw DimensionError("projector target component '" + label + "' outside space");
    LinearOp op(basis, basis);
    for (const auto &[row, ra] : target.entries())
        for (const auto &[col, ca] : target.entries())
            op.set(row, col, ra * std::conj(ca));
    return Projector(std::move(op));
}

Projector make_projector(const Basis &subset, const Basis &space) {
    if (subset.empty())
        throw DomainError("projector subset is empty");
    Basis basis = space.empty() ? subset : space;
    LinearOp op(basis, basis);
    for (const auto &label : subset) {
        if (!basis.contains(label))
            throw DimensionError("projector subset label '" + label + "' outside space");
        op.set(label, label, 1.0);
    }
    return Projector(std::move(op));
}

Projector make_projector_from(const LinearOp &op, double tol) {
    if (!op.is_square())
        throw DimensionError("projector must be square");
    if (max_abs_diff(compose(op, op), op) > tol)
        throw DomainError("operator is not idempotent");
    if (max_abs_diff(adjoint(op), op) > tol)
        throw DomainError("operator is not Hermitian");
    return Projector(op);
}

bool check_unitary(const LinearOp &op, double tol) {
    return max_abs_diff(compose(adjoint(op), op), LinearOp::identity(op.input())) <= tol;
}

// ---------------------------------------------------------------------------
// Formatting

double round_sig12(double value) {
    if (value == 0.0 || !std::isfinite(value))
        return 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    double out = std::strtod(buf, nullptr);
    return out == 0.0 ? 0.0 : out;
}

nlohmann::json amplitude_to_json(Amplitude amp) {
    return nlohmann::json::array({round_sig12(amp.real()), round_sig12(amp.imag())});
}

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", round_sig12(v));
    return buf;
}

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

} // namespace

std::string format_coefficient(Amplitude amp) {
    const double re = amp.real();
    const double im = amp.imag();
    if (near(im, 0.0)) {
        if (near(re, 1.0))
            return "";
        if (near(re, -1.0))
            return "-";
        return fmt12(re);
    }
    if (near(re, 0.0)) {
        if (near(im, 1.0))
            return "i";
        if (near(im, -1.0))
            return "-i";
        return fmt12(im) + "i";
    }
    return "(" + fmt12(re) + (im < 0 ? "-" : "+") + fmt12(std::abs(im)) + "i)";
}

namespace {

template <class Tag>
std::string format_state(const LabeledVector<Tag> &state, const char *open, const char *close) {
    if (state.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[label, amp] : state.entries()) {
        std::string coef = format_coefficient(amp);
        if (!first) {
            if (!coef.empty() && coef.front() == '-') {
                os << " - ";
                coef.erase(0, 1);
            } else {
                os << " + ";
            }
        }
        os << coef << open << label << close;
        first = false;
    }
    return os.str();
}

} // namespace

std::string format_ket(const Ket &ket) { return format_state(ket, "|", ">"); }
std::string format_bra(const Bra &bra) { return format_state(bra, "<", "|"); }

} // namespace timesym
