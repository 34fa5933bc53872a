#include "jbtlab/factors.hpp"

#include <json.hpp>

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace jbt {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Factor

Factor Factor::rectangular(int rows, int cols) {
    if (rows < 1 || cols < 1) {
        throw ContractError("Factor: rectangular needs rows, cols >= 1");
    }
    Factor f;
    f.kind_ = FactorKind::Rectangular;
    f.rows_ = rows;
    f.cols_ = cols;
    return f;
}

Factor Factor::antisymmetric(int n) {
    if (n < 4) {
        throw ContractError("Factor: antisymmetric needs n >= 4");
    }
    Factor f;
    f.kind_ = FactorKind::Antisymmetric;
    f.rows_ = n;
    f.cols_ = n;
    return f;
}

Factor Factor::symmetric(int n) {
    if (n < 2) {
        throw ContractError("Factor: symmetric needs n >= 2");
    }
    Factor f;
    f.kind_ = FactorKind::Symmetric;
    f.rows_ = n;
    f.cols_ = n;
    return f;
}

Factor Factor::spin(int dim) {
    if (dim < 3) {
        throw ContractError("Factor: spin needs dim >= 3");
    }
    Factor f;
    f.kind_ = FactorKind::Spin;
    f.rows_ = dim;
    f.cols_ = 1;
    return f;
}

Factor Factor::direct_sum(std::vector<Factor> summands) {
    if (summands.empty()) {
        throw ContractError("Factor: direct sum needs at least one summand");
    }
    for (const auto& s : summands) {
        if (s.is_direct_sum()) {
            throw ContractError("Factor: direct sums do not nest");
        }
    }
    Factor f;
    f.kind_ = FactorKind::DirectSum;
    f.summands_ = std::move(summands);
    return f;
}

int Factor::rows() const {
    if (is_direct_sum()) throw ContractError("Factor: rows() on a direct sum");
    return rows_;
}

int Factor::cols() const {
    if (is_direct_sum()) throw ContractError("Factor: cols() on a direct sum");
    return cols_;
}

int Factor::spin_dim() const {
    if (kind_ != FactorKind::Spin) throw ContractError("Factor: spin_dim() on a non-spin factor");
    return rows_;
}

const std::vector<Factor>& Factor::summands() const {
    if (!is_direct_sum()) throw ContractError("Factor: summands() on a non-sum factor");
    return summands_;
}

int Factor::block_count() const {
    return is_direct_sum() ? static_cast<int>(summands_.size()) : 1;
}

const Factor& Factor::block(int b) const {
    if (!is_direct_sum()) {
        if (b != 0) throw ContractError("Factor: block index out of range");
        return *this;
    }
    if (b < 0 || b >= static_cast<int>(summands_.size())) {
        throw ContractError("Factor: block index out of range");
    }
    return summands_[static_cast<size_t>(b)];
}

int Factor::complex_dim() const {
    switch (kind_) {
        case FactorKind::Rectangular: return rows_ * cols_;
        case FactorKind::Antisymmetric: return rows_ * (rows_ - 1) / 2;
        case FactorKind::Symmetric: return rows_ * (rows_ + 1) / 2;
        case FactorKind::Spin: return rows_;
        case FactorKind::DirectSum: {
            int n = 0;
            for (const auto& s : summands_) n += s.complex_dim();
            return n;
        }
    }
    return 0;
}

int Factor::rank() const {
    switch (kind_) {
        case FactorKind::Rectangular: return std::min(rows_, cols_);
        case FactorKind::Antisymmetric: return rows_ / 2;
        case FactorKind::Symmetric: return rows_;
        case FactorKind::Spin: return 2;
        case FactorKind::DirectSum: {
            int r = 0;
            for (const auto& s : summands_) r += s.rank();
            return r;
        }
    }
    return 0;
}

bool Factor::operator==(const Factor& other) const {
    if (kind_ != other.kind_) return false;
    if (kind_ == FactorKind::DirectSum) {
        return summands_ == other.summands_;
    }
    return rows_ == other.rows_ && cols_ == other.cols_;
}

std::string Factor::descriptor() const {
    std::ostringstream out;
    switch (kind_) {
        case FactorKind::Rectangular: out << "rect:" << rows_ << "x" << cols_; break;
        case FactorKind::Antisymmetric: out << "asym:" << rows_; break;
        case FactorKind::Symmetric: out << "sym:" << rows_; break;
        case FactorKind::Spin: out << "spin:" << rows_; break;
        case FactorKind::DirectSum: {
            out << "sum:";
            for (size_t i = 0; i < summands_.size(); ++i) {
                if (i) out << "+";
                out << summands_[i].descriptor();
            }
            break;
        }
    }
    return out.str();
}

static int parse_positive_int(const std::string& text, const std::string& full) {
    try {
        size_t pos = 0;
        const int v = std::stoi(text, &pos);
        if (pos != text.size() || v <= 0) throw std::invalid_argument("range");
        return v;
    } catch (const std::exception&) {
        throw ParseError("factor descriptor '" + full + "': expected a positive integer, got '" + text + "'");
    }
}

Factor Factor::parse(const std::string& descriptor) {
    const auto colon = descriptor.find(':');
    if (colon == std::string::npos) {
        throw ParseError("factor descriptor '" + descriptor +
                         "': expected kind:params (rect:KxN, asym:N, sym:N, spin:D, sum:...)");
    }
    const std::string kind = descriptor.substr(0, colon);
    const std::string params = descriptor.substr(colon + 1);
    if (kind == "rect") {
        const auto x = params.find('x');
        if (x == std::string::npos) {
            throw ParseError("factor descriptor '" + descriptor + "': rect needs KxN");
        }
        return rectangular(parse_positive_int(params.substr(0, x), descriptor),
                           parse_positive_int(params.substr(x + 1), descriptor));
    }
    if (kind == "asym") return antisymmetric(parse_positive_int(params, descriptor));
    if (kind == "sym") return symmetric(parse_positive_int(params, descriptor));
    if (kind == "spin") return spin(parse_positive_int(params, descriptor));
    if (kind == "sum") {
        std::vector<Factor> parts;
        size_t start = 0;
        while (start <= params.size()) {
            const auto plus = params.find('+', start);
            const std::string part = params.substr(
                start, plus == std::string::npos ? std::string::npos : plus - start);
            if (part.empty()) {
                throw ParseError("factor descriptor '" + descriptor + "': empty summand");
            }
            parts.push_back(parse(part));
            if (plus == std::string::npos) break;
            start = plus + 1;
        }
        return direct_sum(std::move(parts));
    }
    throw ParseError("factor descriptor '" + descriptor + "': unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Element

static void validate_block(const Factor& f, const ComplexMatrix& m, double tol) {
    if (m.rows() != f.rows() || m.cols() != f.cols()) {
        std::ostringstream msg;
        msg << "Element: block shape " << m.rows() << "x" << m.cols()
            << " does not match factor " << f.descriptor();
        throw ContractError(msg.str());
    }
    if (!m.allFinite()) {
        throw ContractError("Element: non-finite entries");
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (f.kind() == FactorKind::Antisymmetric) {
        const double defect = (m + m.transpose()).cwiseAbs().maxCoeff();
        if (defect > tol * scale) {
            throw ContractError("Element: block not antisymmetric (defect " +
                                std::to_string(defect) + ")");
        }
    } else if (f.kind() == FactorKind::Symmetric) {
        const double defect = (m - m.transpose()).cwiseAbs().maxCoeff();
        if (defect > tol * scale) {
            throw ContractError("Element: block not symmetric (defect " +
                                std::to_string(defect) + ")");
        }
    }
}

Element::Element(Factor factor, std::vector<ComplexMatrix> blocks, const Tolerance& tol)
    : factor_(std::move(factor)), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != factor_.block_count()) {
        throw ContractError("Element: expected " + std::to_string(factor_.block_count()) +
                            " blocks, got " + std::to_string(blocks_.size()));
    }
    for (int b = 0; b < factor_.block_count(); ++b) {
        validate_block(factor_.block(b), blocks_[static_cast<size_t>(b)], tol.struct_tol);
    }
}

Element unchecked_element(Factor factor, std::vector<ComplexMatrix> blocks) {
    Element e;
    e.factor_ = std::move(factor);
    e.blocks_ = std::move(blocks);
    return e;
}

Element Element::zero(const Factor& factor) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(static_cast<size_t>(factor.block_count()));
    for (int b = 0; b < factor.block_count(); ++b) {
        const Factor& bf = factor.block(b);
        blocks.push_back(ComplexMatrix::Zero(bf.rows(), bf.cols()));
    }
    return unchecked_element(factor, std::move(blocks));
}

const ComplexMatrix& Element::matrix() const {
    if (blocks_.size() != 1) {
        throw ContractError("Element: matrix() on a direct sum; use block(i)");
    }
    return blocks_[0];
}

void require_same_factor(const Element& a, const Element& b, const char* where) {
    if (a.factor() != b.factor()) {
        throw ContractError(std::string(where) + ": elements live in different factors (" +
                            a.factor().descriptor() + " vs " + b.factor().descriptor() + ")");
    }
}

Element Element::operator+(const Element& other) const {
    require_same_factor(*this, other, "Element::operator+");
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(blocks_.size());
    for (size_t b = 0; b < blocks_.size(); ++b) blocks.push_back(blocks_[b] + other.blocks_[b]);
    return unchecked_element(factor_, std::move(blocks));
}

Element Element::operator-(const Element& other) const {
    require_same_factor(*this, other, "Element::operator-");
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(blocks_.size());
    for (size_t b = 0; b < blocks_.size(); ++b) blocks.push_back(blocks_[b] - other.blocks_[b]);
    return unchecked_element(factor_, std::move(blocks));
}

Element Element::operator-() const {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(blocks_.size());
    for (const auto& m : blocks_) blocks.push_back(-m);
    return unchecked_element(factor_, std::move(blocks));
}

Element Element::operator*(Complex scalar) const {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(blocks_.size());
    for (const auto& m : blocks_) blocks.push_back(scalar * m);
    return unchecked_element(factor_, std::move(blocks));
}

// ---------------------------------------------------------------------------
// Algebra

static Complex spin_inner_raw(const ComplexMatrix& x, const ComplexMatrix& y) {
    return (y.col(0).adjoint() * x.col(0))(0, 0);
}

static ComplexMatrix triple_block(FactorKind kind, const ComplexMatrix& a,
                                  const ComplexMatrix& b, const ComplexMatrix& c) {
    if (kind == FactorKind::Spin) {
        const Complex ab = spin_inner_raw(a, b);
        const Complex cb = spin_inner_raw(c, b);
        const Complex ac = spin_inner_raw(a, c.conjugate());
        return ab * c + cb * a - ac * b.conjugate();
    }
    return 0.5 * (a * b.adjoint() * c + c * b.adjoint() * a);
}

Element triple_product(const Element& a, const Element& b, const Element& c) {
    require_same_factor(a, b, "triple_product");
    require_same_factor(a, c, "triple_product");
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(static_cast<size_t>(a.block_count()));
    for (int i = 0; i < a.block_count(); ++i) {
        blocks.push_back(triple_block(a.factor().block(i).kind(), a.block(i), b.block(i), c.block(i)));
    }
    return unchecked_element(a.factor(), std::move(blocks));
}

static double norm_block(FactorKind kind, const ComplexMatrix& m) {
    if (kind == FactorKind::Spin) {
        const double xx = std::real(spin_inner_raw(m, m));
        const double q = std::abs(spin_inner_raw(m, m.conjugate()));
        // Cauchy-Schwarz makes the radicand nonnegative; clamp roundoff.
        const double radicand = std::max(0.0, xx * xx - q * q);
        return std::sqrt(xx + std::sqrt(radicand));
    }
    if (m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    return operator_norm(m);
}

double norm(const Element& x) {
    double best = 0.0;
    for (int b = 0; b < x.block_count(); ++b) {
        best = std::max(best, norm_block(x.factor().block(b).kind(), x.block(b)));
    }
    return best;
}

Complex spin_inner(const Element& x, const Element& y) {
    require_same_factor(x, y, "spin_inner");
    if (x.factor().kind() != FactorKind::Spin) {
        throw ContractError("spin_inner: not a spin factor");
    }
    return spin_inner_raw(x.matrix(), y.matrix());
}

Element spin_conjugate(const Element& x) {
    if (x.factor().kind() != FactorKind::Spin) {
        throw ContractError("spin_conjugate: not a spin factor");
    }
    return unchecked_element(x.factor(), {x.matrix().conjugate()});
}

Complex frobenius_inner(const Element& x, const Element& y) {
    require_same_factor(x, y, "frobenius_inner");
    Complex acc = 0.0;
    for (int b = 0; b < x.block_count(); ++b) {
        acc += (y.block(b).conjugate().cwiseProduct(x.block(b))).sum();
    }
    return acc;
}

double frobenius_norm(const Element& x) {
    return std::sqrt(std::abs(std::real(frobenius_inner(x, x))));
}

bool approx_equal(const Element& a, const Element& b, double tol) {
    if (a.factor() != b.factor()) return false;
    for (int i = 0; i < a.block_count(); ++i) {
        if ((a.block(i) - b.block(i)).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Charts

static void block_coordinates(const Factor& f, const ComplexMatrix& m, ComplexVector& z,
                              Eigen::Index& at) {
    switch (f.kind()) {
        case FactorKind::Rectangular:
        case FactorKind::Spin:
            for (int r = 0; r < f.rows(); ++r)
                for (int c = 0; c < f.cols(); ++c) z(at++) = m(r, c);
            break;
        case FactorKind::Antisymmetric:
            for (int r = 0; r < f.rows(); ++r)
                for (int c = r + 1; c < f.cols(); ++c) z(at++) = m(r, c);
            break;
        case FactorKind::Symmetric:
            for (int r = 0; r < f.rows(); ++r)
                for (int c = r; c < f.cols(); ++c) z(at++) = m(r, c);
            break;
        case FactorKind::DirectSum:
            throw ContractError("block_coordinates: unexpected direct sum block");
    }
}

ComplexVector complex_coordinates(const Element& x) {
    ComplexVector z(x.factor().complex_dim());
    Eigen::Index at = 0;
    for (int b = 0; b < x.block_count(); ++b) {
        block_coordinates(x.factor().block(b), x.block(b), z, at);
    }
    return z;
}

static ComplexMatrix block_from_coordinates(const Factor& f, const ComplexVector& z,
                                            Eigen::Index& at) {
    ComplexMatrix m = ComplexMatrix::Zero(f.rows(), f.cols());
    switch (f.kind()) {
        case FactorKind::Rectangular:
        case FactorKind::Spin:
            for (int r = 0; r < f.rows(); ++r)
                for (int c = 0; c < f.cols(); ++c) m(r, c) = z(at++);
            break;
        case FactorKind::Antisymmetric:
            for (int r = 0; r < f.rows(); ++r)
                for (int c = r + 1; c < f.cols(); ++c) {
                    m(r, c) = z(at);
                    m(c, r) = -z(at);
                    ++at;
                }
            break;
        case FactorKind::Symmetric:
            for (int r = 0; r < f.rows(); ++r)
                for (int c = r; c < f.cols(); ++c) {
                    m(r, c) = z(at);
                    m(c, r) = z(at);
                    ++at;
                }
            break;
        case FactorKind::DirectSum:
            throw ContractError("block_from_coordinates: unexpected direct sum block");
    }
    return m;
}

Element element_from_complex_coordinates(const Factor& factor, const ComplexVector& z) {
    if (z.size() != factor.complex_dim()) {
        throw ContractError("element_from_complex_coordinates: expected " +
                            std::to_string(factor.complex_dim()) + " coordinates, got " +
                            std::to_string(z.size()));
    }
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(static_cast<size_t>(factor.block_count()));
    Eigen::Index at = 0;
    for (int b = 0; b < factor.block_count(); ++b) {
        blocks.push_back(block_from_coordinates(factor.block(b), z, at));
    }
    return unchecked_element(factor, std::move(blocks));
}

RealVector real_coordinates(const Element& x) {
    const ComplexVector z = complex_coordinates(x);
    RealVector c(2 * z.size());
    c.head(z.size()) = z.real();
    c.tail(z.size()) = z.imag();
    return c;
}

Element element_from_real_coordinates(const Factor& factor, const RealVector& c) {
    const int n = factor.complex_dim();
    if (c.size() != 2 * n) {
        throw ContractError("element_from_real_coordinates: expected " + std::to_string(2 * n) +
                            " coordinates, got " + std::to_string(c.size()));
    }
    ComplexVector z(n);
    z.real() = c.head(n);
    z.imag() = c.tail(n);
    return element_from_complex_coordinates(factor, z);
}

// ---------------------------------------------------------------------------
// Sampling

static ComplexMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
    ComplexMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = rng.cgaussian();
    return m;
}

static ComplexVector unit_vector(int n, Rng& rng) {
    ComplexVector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.cgaussian();
    double nv = v.norm();
    while (nv < 1e-12) {
        for (int i = 0; i < n; ++i) v(i) = rng.cgaussian();
        nv = v.norm();
    }
    return v / nv;
}

/// Thin Q of a complex Gaussian, i.e. a Haar-ish orthonormal k-frame.
static ComplexMatrix orthonormal_frame(int n, int k, Rng& rng) {
    const ComplexMatrix g = gaussian_matrix(n, k, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, k);
    const ComplexMatrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

static RealMatrix real_orthonormal_frame(int n, int k, Rng& rng) {
    RealMatrix g(n, k);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < k; ++c) g(r, c) = rng.gaussian();
    Eigen::HouseholderQR<RealMatrix> qr(g);
    RealMatrix q = qr.householderQ() * RealMatrix::Identity(n, k);
    const RealMatrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j) {
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    return q;
}

ComplexMatrix sample_unitary(int n, std::uint64_t seed) {
    Rng rng(seed);
    return orthonormal_frame(n, n, rng);
}

static ComplexMatrix sample_block(const Factor& f, Rng& rng) {
    switch (f.kind()) {
        case FactorKind::Rectangular:
        case FactorKind::Spin:
            return gaussian_matrix(f.rows(), f.cols(), rng);
        case FactorKind::Antisymmetric: {
            const ComplexMatrix g = gaussian_matrix(f.rows(), f.cols(), rng);
            return 0.5 * (g - g.transpose());
        }
        case FactorKind::Symmetric: {
            const ComplexMatrix g = gaussian_matrix(f.rows(), f.cols(), rng);
            return 0.5 * (g + g.transpose());
        }
        case FactorKind::DirectSum:
            throw ContractError("sample_block: unexpected direct sum block");
    }
    throw ContractError("sample_block: unreachable");
}

Element sample_element(const Factor& factor, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(static_cast<size_t>(factor.block_count()));
    for (int b = 0; b < factor.block_count(); ++b) {
        blocks.push_back(sample_block(factor.block(b), rng));
    }
    return unchecked_element(factor, std::move(blocks));
}

static ComplexMatrix minimal_block(const Factor& f, Rng& rng) {
    switch (f.kind()) {
        case FactorKind::Rectangular: {
            const ComplexVector eta = unit_vector(f.rows(), rng);
            const ComplexVector xi = unit_vector(f.cols(), rng);
            return eta * xi.adjoint();
        }
        case FactorKind::Antisymmetric: {
            const ComplexMatrix frame = orthonormal_frame(f.rows(), 2, rng);
            const ComplexVector xi1 = frame.col(0), xi2 = frame.col(1);
            return xi1.conjugate() * xi2.adjoint() - xi2.conjugate() * xi1.adjoint();
        }
        case FactorKind::Symmetric: {
            const ComplexVector xi = unit_vector(f.rows(), rng);
            return xi.conjugate() * xi.adjoint();
        }
        case FactorKind::Spin: {
            const RealMatrix frame = real_orthonormal_frame(f.rows(), 2, rng);
            ComplexMatrix e(f.rows(), 1);
            for (int i = 0; i < f.rows(); ++i) {
                e(i, 0) = 0.5 * Complex(frame(i, 0), frame(i, 1));
            }
            return e;
        }
        case FactorKind::DirectSum:
            throw ContractError("minimal_block: unexpected direct sum block");
    }
    throw ContractError("minimal_block: unreachable");
}

Element sample_minimal_tripotent(const Factor& factor, std::uint64_t seed) {
    Rng rng(seed);
    if (!factor.is_direct_sum()) {
        return unchecked_element(factor, {minimal_block(factor, rng)});
    }
    Element out = Element::zero(factor);
    const int pick = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(factor.block_count()));
    std::vector<ComplexMatrix> blocks;
    for (int b = 0; b < factor.block_count(); ++b) {
        const Factor& bf = factor.block(b);
        blocks.push_back(b == pick ? minimal_block(bf, rng)
                                   : ComplexMatrix::Zero(bf.rows(), bf.cols()));
    }
    return unchecked_element(factor, std::move(blocks));
}

Element sample_sphere_point(const Factor& factor, std::uint64_t seed) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        const Element x = sample_element(factor, Rng::derive(seed, static_cast<std::uint64_t>(attempt)));
        const double n = norm(x);
        if (n > 1e-9) return x * Complex(1.0 / n, 0.0);
    }
    throw NumericError("sample_sphere_point: degenerate samples");
}

// ---------------------------------------------------------------------------
// Serialization

static json factor_json_obj(const Factor& f) {
    json j;
    switch (f.kind()) {
        case FactorKind::Rectangular:
            j["kind"] = "rect";
            j["params"] = {f.rows(), f.cols()};
            break;
        case FactorKind::Antisymmetric:
            j["kind"] = "asym";
            j["params"] = {f.rows()};
            break;
        case FactorKind::Symmetric:
            j["kind"] = "sym";
            j["params"] = {f.rows()};
            break;
        case FactorKind::Spin:
            j["kind"] = "spin";
            j["params"] = {f.spin_dim()};
            break;
        case FactorKind::DirectSum: {
            j["kind"] = "sum";
            json parts = json::array();
            for (const auto& s : f.summands()) parts.push_back(factor_json_obj(s));
            j["summands"] = std::move(parts);
            break;
        }
    }
    return j;
}

static Factor factor_from_json_obj(const json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw ParseError("factor JSON: expected an object with a 'kind' field");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "sum") {
        std::vector<Factor> parts;
        for (const auto& s : j.at("summands")) parts.push_back(factor_from_json_obj(s));
        return Factor::direct_sum(std::move(parts));
    }
    const auto& params = j.at("params");
    if (kind == "rect") {
        return Factor::rectangular(params.at(0).get<int>(), params.at(1).get<int>());
    }
    if (kind == "asym") return Factor::antisymmetric(params.at(0).get<int>());
    if (kind == "sym") return Factor::symmetric(params.at(0).get<int>());
    if (kind == "spin") return Factor::spin(params.at(0).get<int>());
    throw ParseError("factor JSON: unknown kind '" + kind + "'");
}

static json block_to_json(const ComplexMatrix& m) {
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            data.push_back({m(r, c).real(), m(r, c).imag()});
        }
    }
    return data;
}

static ComplexMatrix block_from_json(const Factor& f, const json& data) {
    if (!data.is_array() || static_cast<int>(data.size()) != f.rows() * f.cols()) {
        throw ParseError("element JSON: block for " + f.descriptor() + " needs " +
                         std::to_string(f.rows() * f.cols()) + " [re, im] pairs");
    }
    ComplexMatrix m(f.rows(), f.cols());
    Eigen::Index at = 0;
    for (int r = 0; r < f.rows(); ++r) {
        for (int c = 0; c < f.cols(); ++c) {
            const auto& pair = data.at(static_cast<size_t>(at++));
            if (!pair.is_array() || pair.size() != 2) {
                throw ParseError("element JSON: entries must be [re, im] pairs");
            }
            m(r, c) = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
        }
    }
    return m;
}

std::string serialize(const Element& x) {
    json j;
    j["factor"] = factor_json_obj(x.factor());
    if (x.factor().is_direct_sum()) {
        json blocks = json::array();
        for (int b = 0; b < x.block_count(); ++b) blocks.push_back(block_to_json(x.block(b)));
        j["data"] = std::move(blocks);
    } else {
        j["data"] = block_to_json(x.matrix());
    }
    return j.dump();
}

Element deserialize(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("element JSON: ") + e.what());
    }
    try {
        const Factor f = factor_from_json_obj(j.at("factor"));
        std::vector<ComplexMatrix> blocks;
        if (f.is_direct_sum()) {
            const auto& data = j.at("data");
            if (!data.is_array() || static_cast<int>(data.size()) != f.block_count()) {
                throw ParseError("element JSON: direct sum data needs one array per summand");
            }
            for (int b = 0; b < f.block_count(); ++b) {
                blocks.push_back(block_from_json(f.block(b), data.at(static_cast<size_t>(b))));
            }
        } else {
            blocks.push_back(block_from_json(f, j.at("data")));
        }
        return Element(f, std::move(blocks));
    } catch (const json::exception& e) {
        throw ParseError(std::string("element JSON: ") + e.what());
    }
}

std::string factor_to_json(const Factor& f) { return factor_json_obj(f).dump(); }

Factor factor_from_json(const std::string& text) {
    try {
        return factor_from_json_obj(json::parse(text));
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("factor JSON: ") + e.what());
    } catch (const json::exception& e) {
        throw ParseError(std::string("factor JSON: ") + e.what());
    }
}

}  // namespace jbt
