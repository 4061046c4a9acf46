#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qfl::qsim {

using amp_t = std::complex<double>;

// Contiguous block of qubits. Qubit 0 is the least significant bit of the
// basis index (little-endian) throughout the library.
struct QubitRange {
    int first = 0;
    int count = 0;

    std::uint64_t dim() const { return std::uint64_t{1} << count; }
    std::uint64_t mask() const { return (dim() - 1) << first; }
    std::uint64_t extract(std::uint64_t basis_index) const {
        return (basis_index >> first) & (dim() - 1);
    }
    bool operator==(const QubitRange&) const = default;
};

// Named, disjoint, contiguous register map over a state's qubits.
// Purely descriptive: operations take explicit QubitRanges; the layout names
// them for serialization and for matching states in inner products.
class RegisterLayout {
  public:
    RegisterLayout() = default;

    void add(std::string name, QubitRange range);
    bool has(const std::string& name) const;
    const QubitRange& at(const std::string& name) const;
    const std::vector<std::pair<std::string, QubitRange>>& entries() const { return regs_; }
    bool empty() const { return regs_.empty(); }

    bool operator==(const RegisterLayout&) const = default;

  private:
    std::vector<std::pair<std::string, QubitRange>> regs_;
};

// Dense statevector over n qubits. Amplitude i corresponds to the
// computational basis state whose binary expansion, read little-endian,
// gives each qubit's value.
class StateVector {
  public:
    StateVector() = default;

    // |0...0> on n_qubits.
    explicit StateVector(int n_qubits);

    static StateVector basis_state(int n_qubits, std::uint64_t basis_index);

    int n_qubits() const { return n_qubits_; }
    std::uint64_t dim() const { return amps_.size(); }

    amp_t& operator[](std::uint64_t i) { return amps_[i]; }
    const amp_t& operator[](std::uint64_t i) const { return amps_[i]; }

    std::span<const amp_t> amplitudes() const { return amps_; }
    std::span<amp_t> amplitudes() { return amps_; }

    double norm_sq() const;

    // Throws std::runtime_error if the norm has drifted beyond tol from 1.
    void check_normalized(double tol = 1e-10) const;

    RegisterLayout& layout() { return layout_; }
    const RegisterLayout& layout() const { return layout_; }
    void set_layout(RegisterLayout l);

    // Whole-register range covering all qubits.
    QubitRange full_range() const { return {0, n_qubits_}; }

  private:
    int n_qubits_ = 0;
    std::vector<amp_t> amps_;
    RegisterLayout layout_;
};

// <a|b>. Requires identical qubit counts and register layouts; throws
// std::invalid_argument otherwise.
amp_t inner_product(const StateVector& a, const StateVector& b);

// Tensor product; `high`'s qubits become the most significant block.
// Layout entries of `high` are shifted up and appended after `low`'s.
StateVector tensor(const StateVector& low, const StateVector& high);

}  // namespace qfl::qsim
