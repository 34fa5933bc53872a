#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jbtlab/numerics.hpp"
#include "jbtlab/rng.hpp"

namespace jbt {

enum class FactorKind { Rectangular, Antisymmetric, Symmetric, Spin, DirectSum };

/// Descriptor of a finite-dimensional Cartan factor (types 1-4) or a finite
/// l-infinity direct sum of such factors. Fixes the coordinates, the triple
/// product and the norm.
///
/// Elements are stored as complex matrices: k x n for Rectangular(k, n),
/// n x n (anti)symmetric for types 2/3, and a d x 1 coordinate vector for
/// Spin(d). Spin coordinates refer to a fixed real-orthonormal basis of the
/// real form X1, so the spin conjugation is entrywise conjugation and the
/// inner product is the standard Hermitian one. For types 2/3 the conjugation
/// j on the underlying Hilbert space is entrywise conjugation in the standard
/// basis, so the transpose involution x^t is the plain matrix transpose.
class Factor {
public:
    static Factor rectangular(int rows, int cols);
    static Factor antisymmetric(int n);  // n >= 4
    static Factor symmetric(int n);      // n >= 2
    static Factor spin(int dim);         // dim >= 3
    static Factor direct_sum(std::vector<Factor> summands);

    /// Parses the descriptor mini-grammar:
    ///   rect:KxN | asym:N | sym:N | spin:D | sum:<part>+<part>+...
    static Factor parse(const std::string& descriptor);
    std::string descriptor() const;

    FactorKind kind() const { return kind_; }
    bool is_direct_sum() const { return kind_ == FactorKind::DirectSum; }

    /// Matrix shape of one block (spin blocks are dim x 1). Non-sum only.
    int rows() const;
    int cols() const;
    int spin_dim() const;

    const std::vector<Factor>& summands() const;
    int block_count() const;
    const Factor& block(int b) const;  // self when not a sum

    /// Complex dimension N of the factor as a vector space.
    int complex_dim() const;

    /// Structural rank: min(k,n) / floor(n/2) / n / 2; sums add.
    int rank() const;

    bool operator==(const Factor& other) const;
    bool operator!=(const Factor& other) const { return !(*this == other); }

    /// Empty sentinel (no valid blocks); useful only as a default slot value.
    Factor() = default;

private:
    FactorKind kind_ = FactorKind::Rectangular;
    int rows_ = 0, cols_ = 0;
    std::vector<Factor> summands_;
};

/// A point of a factor: the factor descriptor plus one matrix block per
/// summand (exactly one block for non-sum factors). Immutable value type.
class Element {
public:
    Element(Factor factor, std::vector<ComplexMatrix> blocks,
            const Tolerance& tol = {});
    /// Empty sentinel; any algebraic use throws. Default slot value only.
    Element() = default;
    static Element zero(const Factor& factor);

    const Factor& factor() const { return factor_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const ComplexMatrix& block(int b) const { return blocks_[static_cast<size_t>(b)]; }
    /// Single-block access; throws on direct sums.
    const ComplexMatrix& matrix() const;

    Element operator+(const Element& other) const;
    Element operator-(const Element& other) const;
    Element operator-() const;
    Element operator*(Complex scalar) const;
    friend Element operator*(Complex scalar, const Element& x) { return x * scalar; }

private:
    Factor factor_;
    std::vector<ComplexMatrix> blocks_;
    friend Element unchecked_element(Factor, std::vector<ComplexMatrix>);
};

/// Internal fast path: skips subspace validation (used where algebra already
/// guarantees membership).
Element unchecked_element(Factor factor, std::vector<ComplexMatrix> blocks);

void require_same_factor(const Element& a, const Element& b, const char* where);

/// Triple product {a,b,c}. Matrix factors: (a b* c + c b* a)/2.
/// Spin: (x|y)z + (z|y)x - (x|conj(z)) conj(y). Direct sums act blockwise.
Element triple_product(const Element& a, const Element& b, const Element& c);

/// Factor norm: spectral norm for types 1-3, the spin norm
/// sqrt((x|x) + sqrt((x|x)^2 - |(x|conj x)|^2)) for type 4, max over summands.
double norm(const Element& x);

/// Spin inner product (linear in the first slot) and conjugation.
Complex spin_inner(const Element& x, const Element& y);
Element spin_conjugate(const Element& x);

/// Frobenius (Hilbert-Schmidt) pairing sum_ij x_ij conj(y_ij) over all blocks.
Complex frobenius_inner(const Element& x, const Element& y);
double frobenius_norm(const Element& x);

bool approx_equal(const Element& a, const Element& b, double tol);

/// Canonical complex chart. Coordinates are complex-linear in the element:
/// row-major entries (rectangular), upper-triangle i<j (antisymmetric),
/// upper-triangle i<=j (symmetric), plain coordinates (spin), blocks
/// concatenated (sums).
ComplexVector complex_coordinates(const Element& x);
Element element_from_complex_coordinates(const Factor& factor, const ComplexVector& z);

/// Realified chart: (Re z; Im z) of the canonical complex coordinates.
RealVector real_coordinates(const Element& x);
Element element_from_real_coordinates(const Factor& factor, const RealVector& c);

/// Gaussian element of the factor (not normalized).
Element sample_element(const Factor& factor, std::uint64_t seed);

/// Random minimal tripotent: rank-one eta (x) xi* for type 1, a symplectic
/// pair element for type 2, conj(xi) xi^H for type 3, (x + iy)/2 with x, y
/// real-orthonormal for spin; a one-block minimal for sums.
Element sample_minimal_tripotent(const Factor& factor, std::uint64_t seed);

/// Gaussian element normalized to factor norm one.
Element sample_sphere_point(const Factor& factor, std::uint64_t seed);

/// Random unitary matrix (Haar-ish, via QR of a complex Gaussian).
ComplexMatrix sample_unitary(int n, std::uint64_t seed);

/// JSON serialization. Round-trips exactly (shortest round-trip decimal
/// representation of each double).
std::string serialize(const Element& x);
Element deserialize(const std::string& text);
std::string factor_to_json(const Factor& f);
Factor factor_from_json(const std::string& text);

}  // namespace jbt
