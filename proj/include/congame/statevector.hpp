#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "congame/errors.hpp"
#include "congame/spin.hpp"

namespace congame {

// Dense exact statevector over N qubits, 64-bit complex amplitudes. Qubit v
// carries spin variable v; basis index z holds qubit v in bit v, with bit
// value b meaning spin 2b - 1. Hard cap of 24 qubits keeps the vector in
// memory comfortably.
struct StateVector {
    int num_qubits = 0;
    std::vector<std::complex<double>> amps;

    std::size_t dim() const { return amps.size(); }
};

// The cost observable is diagonal in the computational basis, so it is just
// a table of values per basis state.
struct CostTable {
    int num_qubits = 0;
    std::vector<double> values;
};

inline CostTable make_cost_table(const SpinPolynomial& poly) {
    return {poly.size(), poly.values_over_assignments()};
}

namespace detail {
inline void check_qubit_count(int n) {
    if (n < 1) throw DomainError("qubit count must be positive");
    if (n > 24) throw DomainError("qubit count exceeds simulator limit (24)");
}
}  // namespace detail

// Uniform superposition |+>^N.
inline StateVector prepare_plus(int num_qubits) {
    detail::check_qubit_count(num_qubits);
    StateVector sv{num_qubits, {}};
    const std::size_t dim = std::size_t{1} << num_qubits;
    sv.amps.assign(dim, std::complex<double>(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    return sv;
}

// Computational basis state |bits>, bits[v] giving qubit v.
inline StateVector prepare_basis(const std::vector<int>& bits) {
    detail::check_qubit_count(static_cast<int>(bits.size()));
    StateVector sv{static_cast<int>(bits.size()), {}};
    sv.amps.assign(std::size_t{1} << bits.size(), {0.0, 0.0});
    std::uint64_t index = 0;
    for (std::size_t v = 0; v < bits.size(); ++v)
        if (bits[v]) index |= std::uint64_t{1} << v;
    sv.amps[index] = {1.0, 0.0};
    return sv;
}

// Diagonal phase e^{-i * gamma * C}: amp_z *= e^{-i gamma values_z}.
// Probabilities are untouched by construction.
inline void apply_cost_phase(StateVector& sv, const CostTable& cost, double gamma) {
    if (cost.num_qubits != sv.num_qubits) throw DomainError("cost table size mismatch");
    for (std::size_t z = 0; z < sv.dim(); ++z)
        sv.amps[z] *= std::polar(1.0, -gamma * cost.values[z]);
}

namespace detail {

// exp(-i*beta*X) on one qubit: [[cos b, -i sin b], [-i sin b, cos b]].
inline void apply_rx(StateVector& sv, int qubit, double beta) {
    const double c = std::cos(beta);
    const std::complex<double> ms(0.0, -std::sin(beta));
    const std::size_t step = std::size_t{1} << qubit;
    for (std::size_t base = 0; base < sv.dim(); base += 2 * step) {
        for (std::size_t offset = 0; offset < step; ++offset) {
            const std::size_t i0 = base + offset;
            const std::size_t i1 = i0 + step;
            const std::complex<double> a0 = sv.amps[i0];
            const std::complex<double> a1 = sv.amps[i1];
            sv.amps[i0] = c * a0 + ms * a1;
            sv.amps[i1] = ms * a0 + c * a1;
        }
    }
}

}  // namespace detail

// Transverse-field mixer e^{-i*beta*sum_v X_v}; the terms commute, so this is
// the per-qubit rotation applied to every qubit.
inline void apply_x_mixer(StateVector& sv, double beta) {
    for (int q = 0; q < sv.num_qubits; ++q) detail::apply_rx(sv, q, beta);
}

// exp(-i*beta*(XX + YY)) on a qubit pair. Identity on |00>/|11>; on the
// odd-parity block the operator restricts to 2X, giving a rotation by 2*beta
// between |01> and |10>. Total occupation of the pair is conserved.
inline void apply_xy_pair(StateVector& sv, int qubit_a, int qubit_b, double beta) {
    if (qubit_a == qubit_b) throw ValidationError("xy pair requires two distinct qubits");
    const double c = std::cos(2.0 * beta);
    const std::complex<double> ms(0.0, -std::sin(2.0 * beta));
    const std::uint64_t mask_a = std::uint64_t{1} << qubit_a;
    const std::uint64_t mask_b = std::uint64_t{1} << qubit_b;
    for (std::uint64_t z = 0; z < sv.dim(); ++z) {
        if (!(z & mask_a) || (z & mask_b)) continue;  // visit each pair once
        const std::uint64_t partner = z ^ mask_a ^ mask_b;
        const std::complex<double> a10 = sv.amps[z];
        const std::complex<double> a01 = sv.amps[partner];
        sv.amps[z] = c * a10 + ms * a01;
        sv.amps[partner] = ms * a10 + c * a01;
    }
}

// Parity ring mixer over a contiguous register: XY pairs over odd-indexed
// ring positions, then even-indexed ones, then the wrap pair when the
// register length is odd (1-based positions, wrap arithmetic modulo the
// length). Within a pass the pairs are disjoint and applied in ascending
// order. Preserves the register's Hamming weight; a single-qubit register is
// left untouched.
inline void apply_parity_mixer(StateVector& sv, int first_qubit, int count, double beta) {
    if (count < 2) return;
    for (int a = 1; a + 1 <= count; a += 2)
        apply_xy_pair(sv, first_qubit + a - 1, first_qubit + a, beta);
    for (int a = 2; a <= count; a += 2)
        apply_xy_pair(sv, first_qubit + a - 1, first_qubit + (a % count), beta);
    if (count % 2 == 1) apply_xy_pair(sv, first_qubit + count - 1, first_qubit, beta);
}

inline double norm(const StateVector& sv) {
    double total = 0.0;
    for (const auto& amp : sv.amps) total += std::norm(amp);
    return std::sqrt(total);
}

// <psi|C|psi> for the diagonal observable.
inline double expectation(const StateVector& sv, const CostTable& cost) {
    if (cost.num_qubits != sv.num_qubits) throw DomainError("cost table size mismatch");
    double total = 0.0;
    for (std::size_t z = 0; z < sv.dim(); ++z) total += std::norm(sv.amps[z]) * cost.values[z];
    return total;
}

inline std::vector<double> probabilities(const StateVector& sv) {
    std::vector<double> probs(sv.dim());
    for (std::size_t z = 0; z < sv.dim(); ++z) probs[z] = std::norm(sv.amps[z]);
    return probs;
}

}  // namespace congame
