#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jbtlab/grids.hpp"
#include "jbtlab/operators.hpp"

namespace jbt {

enum class Branch { ComplexLinear, ConjugateLinear };

std::string branch_name(Branch b);

/// A black-box map between the unit spheres of two factors. evaluate()
/// checks that unit-norm inputs produce unit-norm outputs (within
/// tol.struct_tol) on every call. Ground-truth oracles carry the generating
/// operator and its linearity branch for round-trip tests; negative-control
/// oracles (noisy, phase-warp) carry neither.
class SphereOracle {
public:
    SphereOracle(Factor domain, Factor codomain,
                 std::function<Element(const Element&)> map, std::string name,
                 bool thread_safe = true);

    const Factor& domain() const { return domain_; }
    const Factor& codomain() const { return codomain_; }
    const std::string& name() const { return name_; }
    bool thread_safe() const { return thread_safe_; }

    Element evaluate(const Element& x, const Tolerance& tol = {}) const;

    const std::optional<RealLinearOperator>& ground_truth() const { return truth_; }
    std::optional<Branch> ground_truth_branch() const { return truth_branch_; }
    void attach_ground_truth(RealLinearOperator op, Branch b);

private:
    Factor domain_, codomain_;
    std::function<Element(const Element&)> map_;
    std::string name_;
    bool thread_safe_ = true;
    std::optional<RealLinearOperator> truth_;
    std::optional<Branch> truth_branch_;
};

enum class OracleKind {
    Identity,
    UnitaryPair,            // x -> U x W* on a rectangular factor
    Transpose,              // x -> x^T (rect k,n -> rect n,k; +-id on types 2/3)
    EntrywiseConjugation,   // x -> conj(x), conjugate-linear
    SpinOrthogonalPhase,    // x -> lambda O x on a spin factor
    Noisy,                  // sphere-valued, not an isometry (negative control)
    PhaseWarp               // x -> exp(i theta(x)) x (negative control)
};

OracleKind oracle_kind_from_name(const std::string& name);
std::string oracle_kind_name(OracleKind kind);

/// Builds an oracle of the given kind over the factor. Ground-truth kinds
/// pass an isometry self-check on 100 seeded sample pairs before release.
SphereOracle make_oracle(OracleKind kind, const Factor& factor,
                         std::uint64_t seed, double noise = 1e-3,
                         const Tolerance& tol = {});

/// Decides whether the oracle is complex- or conjugate-linear by comparing
/// f(ie) with +-i f(e) on 8 sampled minimal tripotents; all samples must
/// agree. Requires rank >= 2.
Branch detect_branch(const SphereOracle& oracle, std::uint64_t seed,
                     const Tolerance& tol = {});

struct ExtensionResult {
    RealLinearOperator op;
    Branch branch;
    double max_residual = 0.0;
    int samples_checked = 0;
};

/// Reconstructs the real-linear extension of the sphere isometry from oracle
/// values on a real basis of unit vectors: {g, ig} over the standard grid for
/// matrix factors, {x_k, i x_k} over the real-orthonormal basis of X1 for
/// spin factors. Checks the structural rank gate first (IncompatibilityError
/// on mismatch) and validates the result on sampled sphere points
/// (SynthesisError if the residual exceeds tol.struct_tol).
ExtensionResult synthesize_extension(const SphereOracle& oracle,
                                     std::uint64_t seed,
                                     const Tolerance& tol = {},
                                     int n_samples = 200);

struct VerificationReport {
    int samples = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double isometry_defect = 0.0;
    double linearity_defect = 0.0;
    bool flagged = false;     // max_residual above tol.struct_tol
    bool degenerate = false;  // n_samples == 0
};

/// Diagnostic comparison of a synthesized extension against the oracle on
/// sphere samples.
VerificationReport verify_extension(const ExtensionResult& result,
                                    const SphereOracle& oracle, int n_samples,
                                    std::uint64_t seed,
                                    const Tolerance& tol = {});

struct PropertyStats {
    std::string property;
    long checks = 0;
    long violations = 0;
    double worst_residual = 0.0;
    std::uint64_t reproducer_seed = 0;  // seed of the worst violation
    bool supported = true;              // configuration exists in this factor
};

struct FuzzReport {
    std::vector<PropertyStats> properties;
    long total_checks = 0;
    long total_violations = 0;
};

/// Behavioral conformance fuzzer. Checks, within tol.struct_tol and for a
/// budget of random instances split across properties:
///   (i)   antipode preservation f(-e) = -f(e) on finite-rank tripotents
///   (ii)  additivity over orthogonal minimal families, with orthogonal
///         minimal images
///   (iii) rank preservation
///   (iv)  collinearity preservation
///   (v)   quadrangles map to quadrangles
///   (vi)  frame-coefficient additivity per branch (alpha vs conj(alpha))
///   (vii) f(S(C1(e))) lies in S(C1'(f(e)))
/// Violations are counted with a reproducer seed; a genuine isometry
/// produces zero violations.
FuzzReport conformance_fuzz(const SphereOracle& oracle, std::uint64_t seed,
                            long budget, const Tolerance& tol = {},
                            int jobs = 1);

}  // namespace jbt
