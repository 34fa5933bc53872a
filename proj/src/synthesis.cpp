#include "jbtlab/synthesis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "jbtlab/geometry.hpp"

namespace jbt {

std::string branch_name(Branch b) {
    return b == Branch::ComplexLinear ? "complex-linear" : "conjugate-linear";
}

// ---------------------------------------------------------------------------
// SphereOracle

SphereOracle::SphereOracle(Factor domain, Factor codomain,
                           std::function<Element(const Element&)> map,
                           std::string name, bool thread_safe)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      map_(std::move(map)),
      name_(std::move(name)),
      thread_safe_(thread_safe) {}

Element SphereOracle::evaluate(const Element& x, const Tolerance& tol) const {
    if (x.factor() != domain_) {
        throw ContractError("SphereOracle: input not in the domain factor");
    }
    if (std::abs(norm(x) - 1.0) > tol.struct_tol) {
        throw ContractError("SphereOracle: input must lie on the unit sphere");
    }
    Element y = map_(x);
    if (y.factor() != codomain_) {
        throw NumericError("SphereOracle '" + name_ + "': output factor mismatch");
    }
    if (std::abs(norm(y) - 1.0) > tol.struct_tol) {
        throw NumericError("SphereOracle '" + name_ + "': output left the unit sphere (norm " +
                           std::to_string(norm(y)) + ")");
    }
    return y;
}

void SphereOracle::attach_ground_truth(RealLinearOperator op, Branch b) {
    truth_ = std::move(op);
    truth_branch_ = b;
}

// ---------------------------------------------------------------------------
// Oracle construction

OracleKind oracle_kind_from_name(const std::string& name) {
    if (name == "identity") return OracleKind::Identity;
    if (name == "unitary_pair") return OracleKind::UnitaryPair;
    if (name == "transpose") return OracleKind::Transpose;
    if (name == "entrywise_conjugation") return OracleKind::EntrywiseConjugation;
    if (name == "spin_orthogonal_phase") return OracleKind::SpinOrthogonalPhase;
    if (name == "noisy") return OracleKind::Noisy;
    if (name == "phase_warp") return OracleKind::PhaseWarp;
    throw ParseError("unknown oracle kind '" + name + "'");
}

std::string oracle_kind_name(OracleKind kind) {
    switch (kind) {
        case OracleKind::Identity: return "identity";
        case OracleKind::UnitaryPair: return "unitary_pair";
        case OracleKind::Transpose: return "transpose";
        case OracleKind::EntrywiseConjugation: return "entrywise_conjugation";
        case OracleKind::SpinOrthogonalPhase: return "spin_orthogonal_phase";
        case OracleKind::Noisy: return "noisy";
        case OracleKind::PhaseWarp: return "phase_warp";
    }
    return "?";
}

namespace {

void isometry_self_check(const SphereOracle& oracle, std::uint64_t seed,
                         const Tolerance& tol) {
    for (int i = 0; i < 100; ++i) {
        const Element x = sample_sphere_point(oracle.domain(), Rng::derive(seed, 2 * i));
        const Element y = sample_sphere_point(oracle.domain(), Rng::derive(seed, 2 * i + 1));
        const double lhs = norm(oracle.evaluate(x, tol) - oracle.evaluate(y, tol));
        const double rhs = norm(x - y);
        if (std::abs(lhs - rhs) > tol.struct_tol) {
            std::ostringstream msg;
            msg << "make_oracle: '" << oracle.name() << "' failed the isometry self-check ("
                << lhs << " vs " << rhs << ")";
            throw ContractError(msg.str());
        }
    }
}

Element conjugate_blocks(const Element& x) {
    std::vector<ComplexMatrix> blocks;
    for (int b = 0; b < x.block_count(); ++b) blocks.push_back(x.block(b).conjugate());
    return Element(x.factor(), std::move(blocks));
}

}  // namespace

SphereOracle make_oracle(OracleKind kind, const Factor& factor, std::uint64_t seed,
                         double noise, const Tolerance& tol) {
    switch (kind) {
        case OracleKind::Identity: {
            SphereOracle oracle(factor, factor, [](const Element& x) { return x; },
                                "identity");
            oracle.attach_ground_truth(RealLinearOperator::identity(factor),
                                       Branch::ComplexLinear);
            isometry_self_check(oracle, Rng::derive(seed, 0xC0), tol);
            return oracle;
        }
        case OracleKind::UnitaryPair: {
            if (factor.kind() != FactorKind::Rectangular) {
                throw ContractError("make_oracle: unitary_pair needs a rectangular factor");
            }
            const ComplexMatrix u = sample_unitary(factor.rows(), Rng::derive(seed, 1));
            const ComplexMatrix w = sample_unitary(factor.cols(), Rng::derive(seed, 2));
            auto map = [u, w, factor](const Element& x) {
                return Element(factor, {u * x.matrix() * w.adjoint()});
            };
            SphereOracle oracle(factor, factor, map, "unitary_pair");
            oracle.attach_ground_truth(
                RealLinearOperator::materialize(factor, factor, map), Branch::ComplexLinear);
            isometry_self_check(oracle, Rng::derive(seed, 0xC0), tol);
            return oracle;
        }
        case OracleKind::Transpose: {
            if (factor.kind() == FactorKind::Spin || factor.is_direct_sum()) {
                throw ContractError("make_oracle: transpose needs a matrix factor");
            }
            const Factor codomain = factor.kind() == FactorKind::Rectangular
                                        ? Factor::rectangular(factor.cols(), factor.rows())
                                        : factor;
            auto map = [codomain](const Element& x) {
                return Element(codomain, {x.matrix().transpose().eval()});
            };
            SphereOracle oracle(factor, codomain, map, "transpose");
            oracle.attach_ground_truth(
                RealLinearOperator::materialize(factor, codomain, map), Branch::ComplexLinear);
            isometry_self_check(oracle, Rng::derive(seed, 0xC0), tol);
            return oracle;
        }
        case OracleKind::EntrywiseConjugation: {
            auto map = [](const Element& x) { return conjugate_blocks(x); };
            SphereOracle oracle(factor, factor, map, "entrywise_conjugation");
            oracle.attach_ground_truth(
                RealLinearOperator::materialize(factor, factor, map), Branch::ConjugateLinear);
            isometry_self_check(oracle, Rng::derive(seed, 0xC0), tol);
            return oracle;
        }
        case OracleKind::SpinOrthogonalPhase: {
            if (factor.kind() != FactorKind::Spin) {
                throw ContractError("make_oracle: spin_orthogonal_phase needs a spin factor");
            }
            const int d = factor.spin_dim();
            // Random real orthogonal map on X1, extended complex-linearly,
            // times a unit phase.
            Rng rng(Rng::derive(seed, 3));
            RealMatrix g(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) g(r, c) = rng.gaussian();
            Eigen::HouseholderQR<RealMatrix> qr(g);
            const RealMatrix o = qr.householderQ() * RealMatrix::Identity(d, d);
            const Complex lambda = std::polar(1.0, 6.283185307179586 * rng.uniform());
            auto map = [o, lambda, factor](const Element& x) {
                return Element(factor, {lambda * (o.cast<Complex>() * x.matrix())});
            };
            SphereOracle oracle(factor, factor, map, "spin_orthogonal_phase");
            oracle.attach_ground_truth(
                RealLinearOperator::materialize(factor, factor, map), Branch::ComplexLinear);
            isometry_self_check(oracle, Rng::derive(seed, 0xC0), tol);
            return oracle;
        }
        case OracleKind::Noisy: {
            const Element probe = sample_sphere_point(factor, Rng::derive(seed, 4));
            const Element dir = sample_sphere_point(factor, Rng::derive(seed, 5));
            auto map = [probe, dir, noise](const Element& x) {
                const double s = std::real(frobenius_inner(x, probe));
                const Element y = x + dir * Complex(noise * s, 0.0);
                return y * Complex(1.0 / norm(y), 0.0);
            };
            return SphereOracle(factor, factor, map, "noisy");
        }
        case OracleKind::PhaseWarp: {
            const Element probe = sample_sphere_point(factor, Rng::derive(seed, 6));
            auto map = [probe](const Element& x) {
                const double theta = 0.8 * std::real(frobenius_inner(x, probe));
                return x * std::polar(1.0, theta);
            };
            return SphereOracle(factor, factor, map, "phase_warp");
        }
    }
    throw ContractError("make_oracle: unreachable");
}

// ---------------------------------------------------------------------------
// Branch detection and synthesis

Branch detect_branch(const SphereOracle& oracle, std::uint64_t seed,
                     const Tolerance& tol) {
    if (oracle.domain().rank() < 2) {
        throw ContractError("detect_branch: domain must have rank >= 2");
    }
    const int k = 8;
    int votes_plus = 0, votes_minus = 0;
    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
        const Element e =
            sample_minimal_tripotent(oracle.domain(), Rng::derive(seed, static_cast<std::uint64_t>(i)));
        const Element fe = oracle.evaluate(e, tol);
        const Element fie = oracle.evaluate(e * Complex(0.0, 1.0), tol);
        const double r_plus = norm(fie - fe * Complex(0.0, 1.0));
        const double r_minus = norm(fie + fe * Complex(0.0, 1.0));
        if (r_plus <= tol.struct_tol && r_minus > tol.struct_tol) {
            ++votes_plus;
        } else if (r_minus <= tol.struct_tol && r_plus > tol.struct_tol) {
            ++votes_minus;
        }
        worst = std::max(worst, std::min(r_plus, r_minus));
    }
    if (votes_plus == k) return Branch::ComplexLinear;
    if (votes_minus == k) return Branch::ConjugateLinear;
    std::ostringstream msg;
    msg << "detect_branch: oracle '" << oracle.name()
        << "' is not a sphere isometry: f(ie) = +-i f(e) failed (" << votes_plus << "+/"
        << votes_minus << "- of " << k << ", worst residual " << worst << ")";
    throw NumericError(msg.str());
}

namespace {

std::vector<Element> synthesis_basis(const Factor& f, const Tolerance& tol) {
    std::vector<Element> basis;
    if (f.kind() == FactorKind::Spin) {
        const int d = f.spin_dim();
        for (int k = 0; k < d; ++k) {
            ComplexVector z = ComplexVector::Zero(d);
            z(k) = 1.0;
            const Element xk = element_from_complex_coordinates(f, z);
            basis.push_back(xk);
            basis.push_back(xk * Complex(0.0, 1.0));
        }
    } else {
        for (const auto& g : standard_grid(f, tol).elements) {
            basis.push_back(g.element);
            basis.push_back(g.element * Complex(0.0, 1.0));
        }
    }
    return basis;
}

}  // namespace

ExtensionResult synthesize_extension(const SphereOracle& oracle, std::uint64_t seed,
                                     const Tolerance& tol, int n_samples) {
    const Factor& domain = oracle.domain();
    const Factor& codomain = oracle.codomain();
    if (domain.is_direct_sum()) {
        throw ContractError("synthesize_extension: domain must be a single factor");
    }
    if (domain.rank() != codomain.rank()) {
        std::ostringstream msg;
        msg << "synthesize_extension: rank mismatch between domain " << domain.descriptor()
            << " (rank " << domain.rank() << ") and codomain " << codomain.descriptor()
            << " (rank " << codomain.rank()
            << "); a surjective sphere isometry preserves rank";
        throw IncompatibilityError(msg.str());
    }

    const std::vector<Element> basis = synthesis_basis(domain, tol);
    const int nd = 2 * domain.complex_dim();
    const int nc = 2 * codomain.complex_dim();
    if (static_cast<int>(basis.size()) != nd) {
        throw NumericError("synthesize_extension: basis does not span the domain");
    }
    RealMatrix mb(nd, nd), mt(nc, nd);
    for (int j = 0; j < nd; ++j) {
        mb.col(j) = real_coordinates(basis[static_cast<size_t>(j)]);
        mt.col(j) = real_coordinates(oracle.evaluate(basis[static_cast<size_t>(j)], tol));
    }
    Eigen::ColPivHouseholderQR<RealMatrix> qr(mb.transpose());
    const RealMatrix a = qr.solve(mt.transpose()).transpose();
    RealLinearOperator op(domain, codomain, a);

    Branch branch;
    if (domain.rank() >= 2) {
        branch = detect_branch(oracle, Rng::derive(seed, 0xB), tol);
    } else {
        branch = op.complex_linear_defect() <= op.conjugate_linear_defect()
                     ? Branch::ComplexLinear
                     : Branch::ConjugateLinear;
    }
    const double defect = branch == Branch::ComplexLinear ? op.complex_linear_defect()
                                                          : op.conjugate_linear_defect();
    const double scale = std::max(1.0, op.coordinate_norm());
    if (defect > tol.struct_tol * scale) {
        std::ostringstream msg;
        msg << "synthesize_extension: detected branch " << branch_name(branch)
            << " is inconsistent with the assembled operator (commutation defect " << defect
            << ")";
        throw SynthesisError(msg.str());
    }

    double max_residual = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const Element x = sample_sphere_point(domain, Rng::derive(seed, 0x1000 + static_cast<std::uint64_t>(i)));
        max_residual = std::max(max_residual, norm(op.apply(x) - oracle.evaluate(x, tol)));
    }
    if (max_residual > tol.struct_tol) {
        Eigen::JacobiSVD<RealMatrix> dec(a);
        std::ostringstream msg;
        msg << "synthesize_extension: oracle '" << oracle.name()
            << "' is not the restriction of a real-linear isometry; max residual "
            << max_residual << " over " << n_samples
            << " sphere samples; operator spectrum = [";
        for (Eigen::Index i = 0; i < dec.singularValues().size(); ++i) {
            msg << (i ? ", " : "") << dec.singularValues()(i);
        }
        msg << "]";
        throw SynthesisError(msg.str());
    }
    return ExtensionResult{std::move(op), branch, max_residual, n_samples};
}

VerificationReport verify_extension(const ExtensionResult& result,
                                    const SphereOracle& oracle, int n_samples,
                                    std::uint64_t seed, const Tolerance& tol) {
    if (result.op.domain() != oracle.domain() || result.op.codomain() != oracle.codomain()) {
        throw ContractError("verify_extension: operator and oracle shapes do not match");
    }
    VerificationReport rep;
    rep.samples = n_samples;
    if (n_samples == 0) {
        rep.degenerate = true;
        rep.flagged = true;
        return rep;
    }
    double sum = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const std::uint64_t s = Rng::derive(seed, static_cast<std::uint64_t>(i));
        const Element x = sample_sphere_point(oracle.domain(), s);
        const Element tx = result.op.apply(x);
        const double r = norm(tx - oracle.evaluate(x, tol));
        rep.max_residual = std::max(rep.max_residual, r);
        sum += r;
        rep.isometry_defect = std::max(rep.isometry_defect, std::abs(norm(tx) - 1.0));

        const Element y = sample_sphere_point(oracle.domain(), Rng::derive(s, 1));
        Rng rng(Rng::derive(s, 2));
        const double alpha = 2.0 * rng.uniform() - 1.0;
        const double beta = 2.0 * rng.uniform() - 1.0;
        const Element combo = x * Complex(alpha, 0.0) + y * Complex(beta, 0.0);
        const Element lin = result.op.apply(combo) - result.op.apply(x) * Complex(alpha, 0.0) -
                            result.op.apply(y) * Complex(beta, 0.0);
        rep.linearity_defect = std::max(rep.linearity_defect, norm(lin));
    }
    rep.mean_residual = sum / n_samples;
    rep.flagged = rep.max_residual > tol.struct_tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Conformance fuzzing

namespace {

struct CheckOutcome {
    bool ran = false;
    bool violated = false;
    double residual = 0.0;
};

double tripotency_residual(const Element& x) {
    return norm(triple_product(x, x, x) - x);
}

/// One fuzz check; property indices follow the (i)..(vii) list.
CheckOutcome run_check(int property, const SphereOracle& oracle, Branch branch,
                       std::uint64_t item_seed, const Tolerance& tol) {
    const Factor& f = oracle.domain();
    Rng rng(item_seed);
    CheckOutcome out;
    out.ran = true;
    const int rank = f.rank();
    try {
        switch (property) {
            case 0: {  // antipode preservation on finite-rank tripotents
                const int k = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(rank));
                const auto es = sample_orthogonal_minimals(f, k, Rng::derive(item_seed, 1), tol);
                Element u = es[0].element;
                for (size_t i = 1; i < es.size(); ++i) u = u + es[i].element;
                out.residual = norm(oracle.evaluate(-u, tol) + oracle.evaluate(u, tol));
                break;
            }
            case 1: {  // orthogonal additivity with orthogonal minimal images
                const int m = 2 + static_cast<int>(rng.next_u64() %
                                                   static_cast<std::uint64_t>(rank - 1));
                const auto es = sample_orthogonal_minimals(f, m, Rng::derive(item_seed, 1), tol);
                Element u = es[0].element;
                std::vector<Element> images;
                images.push_back(oracle.evaluate(es[0].element, tol));
                for (size_t i = 1; i < es.size(); ++i) {
                    u = u + es[i].element;
                    images.push_back(oracle.evaluate(es[i].element, tol));
                }
                Element rhs = images[0];
                for (size_t i = 1; i < images.size(); ++i) rhs = rhs + images[i];
                double r = norm(oracle.evaluate(u, tol) - rhs);
                for (size_t i = 0; i < images.size(); ++i) {
                    if (!classify(images[i], tol).minimal) out.violated = true;
                    for (size_t j = i + 1; j < images.size(); ++j) {
                        r = std::max(r, norm(triple_product(images[i], images[i], images[j])));
                    }
                }
                out.residual = r;
                break;
            }
            case 2: {  // rank preservation
                const int k = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(rank));
                const auto es = sample_orthogonal_minimals(f, k, Rng::derive(item_seed, 1), tol);
                Element u = es[0].element;
                for (size_t i = 1; i < es.size(); ++i) u = u + es[i].element;
                const Element fu = oracle.evaluate(u, tol);
                out.residual = tripotency_residual(fu);
                if (out.residual <= tol.struct_tol && classify(fu, tol).rank != k) {
                    out.violated = true;
                }
                break;
            }
            case 3: {  // collinearity preservation
                const auto pair = sample_collinear_pair(f, Rng::derive(item_seed, 1), tol);
                if (!pair) {
                    out.ran = false;
                    break;
                }
                const Element y1 = oracle.evaluate(pair->first.element, tol);
                const Element y2 = oracle.evaluate(pair->second.element, tol);
                const double r1 = norm(peirce_apply(y2, y1, 1) - y1);
                const double r2 = norm(peirce_apply(y1, y2, 1) - y2);
                out.residual = std::max(r1, r2);
                break;
            }
            case 4: {  // quadrangle image is a quadrangle
                const auto quad = sample_quadrangle(f, Rng::derive(item_seed, 1), tol);
                if (!quad) {
                    out.ran = false;
                    break;
                }
                const PredicateReport rep = is_quadrangle(
                    oracle.evaluate((*quad)[0].element, tol), oracle.evaluate((*quad)[1].element, tol),
                    oracle.evaluate((*quad)[2].element, tol), oracle.evaluate((*quad)[3].element, tol),
                    tol);
                out.residual = rep.worst();
                break;
            }
            case 5: {  // frame-coefficient additivity per branch
                const bool conj = branch == Branch::ConjugateLinear;
                const auto tw = [conj](Complex c) { return conj ? std::conj(c) : c; };
                const auto quad = sample_quadrangle(f, Rng::derive(item_seed, 1), tol);
                if (quad) {
                    Rng crng(Rng::derive(item_seed, 2));
                    ComplexVector lam(2), mu(2);
                    for (int i = 0; i < 2; ++i) {
                        lam(i) = crng.cgaussian();
                        mu(i) = crng.cgaussian();
                    }
                    lam.normalize();
                    mu.normalize();
                    const Complex a = lam(0) * std::conj(mu(0)), b = lam(0) * std::conj(mu(1));
                    const Complex g = lam(1) * std::conj(mu(0)), d = lam(1) * std::conj(mu(1));
                    const Element v = (*quad)[0].element * a + (*quad)[1].element * b +
                                      (*quad)[3].element * g + (*quad)[2].element * d;
                    const Element rhs = oracle.evaluate((*quad)[0].element, tol) * tw(a) +
                                        oracle.evaluate((*quad)[1].element, tol) * tw(b) +
                                        oracle.evaluate((*quad)[3].element, tol) * tw(g) +
                                        oracle.evaluate((*quad)[2].element, tol) * tw(d);
                    out.residual = norm(oracle.evaluate(v, tol) - rhs);
                    break;
                }
                const auto tri = sample_trangle(f, Rng::derive(item_seed, 3), tol);
                if (!tri) {
                    out.ran = false;
                    break;
                }
                Rng crng(Rng::derive(item_seed, 4));
                ComplexVector lam(2);
                lam(0) = crng.cgaussian();
                lam(1) = crng.cgaussian();
                lam.normalize();
                const Complex a = lam(0) * lam(0), b = lam(0) * lam(1), d = lam(1) * lam(1);
                const Element v = (*tri)[0].element * a + (*tri)[1].element * b +
                                  (*tri)[2].element * d;
                const Element rhs = oracle.evaluate((*tri)[0].element, tol) * tw(a) +
                                    oracle.evaluate((*tri)[1].element, tol) * tw(b) +
                                    oracle.evaluate((*tri)[2].element, tol) * tw(d);
                out.residual = norm(oracle.evaluate(v, tol) - rhs);
                break;
            }
            case 6: {  // unit sphere of C1(e) maps into the unit sphere of C1'(f(e))
                const Element e = sample_minimal_tripotent(f, Rng::derive(item_seed, 1));
                const Element z = sample_element(f, Rng::derive(item_seed, 2));
                Element y = peirce_apply(e, z, 1);
                const double ny = norm(y);
                if (ny <= 1e3 * tol.struct_tol) {
                    out.ran = false;
                    break;
                }
                y = y * Complex(1.0 / ny, 0.0);
                const Element fe = oracle.evaluate(e, tol);
                const Element fy = oracle.evaluate(y, tol);
                out.residual = norm(peirce_apply(fe, fy, 1) - fy);
                break;
            }
            default:
                out.ran = false;
        }
    } catch (const Error&) {
        // The oracle broke a structural assumption outright (non-tripotent
        // image, sphere departure, ...): that is a violation.
        out.violated = true;
        out.residual = std::numeric_limits<double>::infinity();
    }
    if (out.ran && out.residual > tol.struct_tol) out.violated = true;
    return out;
}

const char* kPropertyNames[7] = {
    "antipode_preservation",     "orthogonal_additivity", "rank_preservation",
    "collinearity_preservation", "quadrangle_image",      "frame_additivity",
    "peirce1_sphere_preservation"};

}  // namespace

FuzzReport conformance_fuzz(const SphereOracle& oracle, std::uint64_t seed,
                            long budget, const Tolerance& tol, int jobs) {
    FuzzReport rep;
    if (budget <= 0) {
        for (int p = 0; p < 7; ++p) {
            rep.properties.push_back({kPropertyNames[p], 0, 0, 0.0, 0, true});
        }
        return rep;
    }

    Branch branch = Branch::ComplexLinear;
    if (oracle.ground_truth_branch()) {
        branch = *oracle.ground_truth_branch();
    } else if (oracle.domain().rank() >= 2) {
        try {
            branch = detect_branch(oracle, Rng::derive(seed, 0xD), tol);
        } catch (const Error&) {
            // Not an isometry; keep the default, the checks will report.
        }
    }

    if (!oracle.thread_safe()) jobs = 1;
    jobs = std::max(1, jobs);

    const long per_property = std::max<long>(1, budget / 7);
    for (int p = 0; p < 7; ++p) {
        const long items = p == 6 ? budget - 6 * per_property : per_property;
        std::vector<CheckOutcome> slots(static_cast<size_t>(std::max<long>(items, 0)));

        auto worker = [&](long lo, long hi) {
            for (long i = lo; i < hi; ++i) {
                const std::uint64_t item_seed =
                    Rng::derive(seed, static_cast<std::uint64_t>(p) * 0x100000ULL +
                                          static_cast<std::uint64_t>(i));
                slots[static_cast<size_t>(i)] = run_check(p, oracle, branch, item_seed, tol);
            }
        };
        if (jobs == 1 || items < 2 * jobs) {
            worker(0, items);
        } else {
            std::vector<std::thread> pool;
            const long chunk = (items + jobs - 1) / jobs;
            for (int t = 0; t < jobs; ++t) {
                const long lo = t * chunk, hi = std::min(items, lo + chunk);
                if (lo < hi) pool.emplace_back(worker, lo, hi);
            }
            for (auto& th : pool) th.join();
        }

        PropertyStats stats;
        stats.property = kPropertyNames[p];
        bool any_ran = false;
        for (long i = 0; i < items; ++i) {
            const CheckOutcome& c = slots[static_cast<size_t>(i)];
            if (!c.ran) continue;
            any_ran = true;
            ++stats.checks;
            stats.worst_residual = std::max(stats.worst_residual,
                                            std::isinf(c.residual) ? 1e30 : c.residual);
            if (c.violated) {
                if (stats.violations == 0) {
                    stats.reproducer_seed =
                        Rng::derive(seed, static_cast<std::uint64_t>(p) * 0x100000ULL +
                                              static_cast<std::uint64_t>(i));
                }
                ++stats.violations;
            }
        }
        stats.supported = any_ran;
        rep.total_checks += stats.checks;
        rep.total_violations += stats.violations;
        rep.properties.push_back(std::move(stats));
    }
    return rep;
}

}  // namespace jbt
