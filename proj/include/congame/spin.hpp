#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "congame/errors.hpp"

namespace congame {

// Binary/spin change of variable: s = 2x - 1.
inline int spin_of(int bit) { return 2 * bit - 1; }
inline int bit_of(int spin) { return (spin + 1) / 2; }

// Degree-1 expression over spin variables: constant + sum coeff * s_v.
// Terms stay sorted by variable index with no duplicates.
struct AffineSpinExpr {
    double constant = 0.0;
    std::vector<std::pair<int, double>> terms;

    void add_term(int var, double coeff) {
        auto it = std::lower_bound(terms.begin(), terms.end(), var,
                                   [](const auto& t, int v) { return t.first < v; });
        if (it != terms.end() && it->first == var) {
            it->second += coeff;
        } else {
            terms.insert(it, {var, coeff});
        }
    }

    // Value with spins read off the bits of z (bit v set means s_v = +1).
    double eval_bits(std::uint64_t z) const {
        double v = constant;
        for (const auto& [var, coeff] : terms)
            v += coeff * spin_of(static_cast<int>((z >> var) & 1));
        return v;
    }
};

// Quadratic spin cost: c + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j.
//
// The identity s_i^2 = 1 is applied eagerly, so there is no diagonal and
// products of affine expressions close at degree two. J is stored as a packed
// strict upper triangle.
class SpinPolynomial {
public:
    explicit SpinPolynomial(int n)
        : n_(n),
          h_(static_cast<std::size_t>(n), 0.0),
          j_(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0) {}

    int size() const { return n_; }
    double constant() const { return c_; }
    double bias(int i) const { return h_[static_cast<std::size_t>(i)]; }
    double coupling(int i, int j) const { return j_[tri(i, j)]; }

    void add_constant(double v) { c_ += v; }
    void add_linear(int i, double v) { h_[static_cast<std::size_t>(i)] += v; }

    void add_quadratic(int i, int j, double v) {
        if (i == j) {  // s_i^2 = 1
            c_ += v;
            return;
        }
        if (i > j) std::swap(i, j);
        j_[tri(i, j)] += v;
    }

    // Coefficient-wise sum; sizes must match.
    void add(const SpinPolynomial& other) {
        if (other.n_ != n_) throw ValidationError("polynomial size mismatch");
        c_ += other.c_;
        for (std::size_t i = 0; i < h_.size(); ++i) h_[i] += other.h_[i];
        for (std::size_t i = 0; i < j_.size(); ++i) j_[i] += other.j_[i];
    }

    void add_affine(const AffineSpinExpr& e, double scale) {
        c_ += scale * e.constant;
        for (const auto& [var, coeff] : e.terms) add_linear(var, scale * coeff);
    }

    // Adds scale * a * b, expanded and reduced.
    void add_product(const AffineSpinExpr& a, const AffineSpinExpr& b, double scale) {
        c_ += scale * a.constant * b.constant;
        for (const auto& [va, ca] : a.terms) add_linear(va, scale * ca * b.constant);
        for (const auto& [vb, cb] : b.terms) add_linear(vb, scale * cb * a.constant);
        for (const auto& [va, ca] : a.terms)
            for (const auto& [vb, cb] : b.terms) add_quadratic(va, vb, scale * ca * cb);
    }

    // Value at the assignment whose bit v encodes s_v = 2*bit - 1.
    double eval_bits(std::uint64_t z) const {
        double v = c_;
        for (int i = 0; i < n_; ++i)
            v += (z >> i) & 1 ? h_[static_cast<std::size_t>(i)] : -h_[static_cast<std::size_t>(i)];
        std::size_t idx = 0;
        for (int i = 0; i < n_; ++i) {
            for (int j = i + 1; j < n_; ++j, ++idx) {
                double jij = j_[idx];
                if (jij == 0.0) continue;
                v += ((z >> i) ^ (z >> j)) & 1 ? -jij : jij;
            }
        }
        return v;
    }

    double eval_spins(std::span<const int> s) const {
        std::uint64_t z = 0;
        for (int i = 0; i < n_; ++i)
            if (s[static_cast<std::size_t>(i)] > 0) z |= std::uint64_t{1} << i;
        return eval_bits(z);
    }

    // Values over all 2^N assignments, indexed by the bit pattern z.
    std::vector<double> values_over_assignments() const {
        if (n_ > 24) throw DomainError("spin count too large for exhaustive evaluation");
        struct Coupling {
            int i, j;
            double v;
        };
        std::vector<Coupling> couplings;
        std::size_t idx = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j, ++idx)
                if (j_[idx] != 0.0) couplings.push_back({i, j, j_[idx]});

        std::vector<double> out(std::size_t{1} << n_);
        for (std::uint64_t z = 0; z < out.size(); ++z) {
            double v = c_;
            for (int i = 0; i < n_; ++i)
                v += (z >> i) & 1 ? h_[static_cast<std::size_t>(i)]
                                  : -h_[static_cast<std::size_t>(i)];
            for (const auto& t : couplings)
                v += ((z >> t.i) ^ (z >> t.j)) & 1 ? -t.v : t.v;
            out[z] = v;
        }
        return out;
    }

    int coupling_nonzeros() const {
        int count = 0;
        for (double v : j_)
            if (v != 0.0) ++count;
        return count;
    }

private:
    std::size_t tri(int i, int j) const {
        return static_cast<std::size_t>(i) * (2 * n_ - i - 1) / 2
               + static_cast<std::size_t>(j - i - 1);
    }

    int n_;
    double c_ = 0.0;
    std::vector<double> h_;
    std::vector<double> j_;
};

}  // namespace congame
