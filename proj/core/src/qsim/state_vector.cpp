#include "qfl/qsim/state_vector.hpp"

#include <cmath>
#include <stdexcept>

namespace qfl::qsim {

namespace {
constexpr int kMaxQubits = 30;
}

void RegisterLayout::add(std::string name, QubitRange range) {
    if (range.count <= 0) throw std::invalid_argument("register '" + name + "' must have at least one qubit");
    for (const auto& [n, r] : regs_) {
        if (n == name) throw std::invalid_argument("duplicate register name '" + name + "'");
        const bool disjoint = range.first >= r.first + r.count || r.first >= range.first + range.count;
        if (!disjoint) throw std::invalid_argument("register '" + name + "' overlaps '" + n + "'");
    }
    regs_.emplace_back(std::move(name), range);
}

bool RegisterLayout::has(const std::string& name) const {
    for (const auto& [n, r] : regs_)
        if (n == name) return true;
    return false;
}

const QubitRange& RegisterLayout::at(const std::string& name) const {
    for (const auto& [n, r] : regs_)
        if (n == name) return r;
    throw std::out_of_range("no register named '" + name + "'");
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 0 || n_qubits > kMaxQubits)
        throw std::invalid_argument("qubit count must be in [0, " + std::to_string(kMaxQubits) + "]");
    amps_.assign(std::uint64_t{1} << n_qubits, amp_t{0.0, 0.0});
    amps_[0] = amp_t{1.0, 0.0};
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t basis_index) {
    StateVector s(n_qubits);
    if (basis_index >= s.dim())
        throw std::out_of_range("basis index " + std::to_string(basis_index) + " out of range for " +
                                std::to_string(n_qubits) + " qubits");
    s.amps_[0] = amp_t{0.0, 0.0};
    s.amps_[basis_index] = amp_t{1.0, 0.0};
    return s;
}

double StateVector::norm_sq() const {
    double acc = 0.0;
    for (const amp_t& a : amps_) acc += std::norm(a);
    return acc;
}

void StateVector::check_normalized(double tol) const {
    const double n = norm_sq();
    if (std::abs(n - 1.0) > tol)
        throw std::runtime_error("state norm drifted: |amplitudes|^2 = " + std::to_string(n));
}

void StateVector::set_layout(RegisterLayout l) {
    for (const auto& [name, r] : l.entries()) {
        if (r.first < 0 || r.first + r.count > n_qubits_)
            throw std::invalid_argument("register '" + name + "' exceeds state qubits");
    }
    layout_ = std::move(l);
}

amp_t inner_product(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("inner product requires equal qubit counts");
    if (!(a.layout() == b.layout()))
        throw std::invalid_argument("inner product requires matching register layouts");
    amp_t acc{0.0, 0.0};
    for (std::uint64_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

StateVector tensor(const StateVector& low, const StateVector& high) {
    StateVector out(low.n_qubits() + high.n_qubits());
    out[0] = amp_t{0.0, 0.0};
    for (std::uint64_t h = 0; h < high.dim(); ++h) {
        const amp_t ah = high[h];
        if (ah == amp_t{}) continue;
        const std::uint64_t base = h << low.n_qubits();
        for (std::uint64_t l = 0; l < low.dim(); ++l) out[base | l] = ah * low[l];
    }
    RegisterLayout merged = low.layout();
    for (const auto& [name, r] : high.layout().entries())
        merged.add(name, QubitRange{r.first + low.n_qubits(), r.count});
    out.set_layout(merged);
    return out;
}

}  // namespace qfl::qsim
