#include "qgreedy/bases.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "qgreedy/error.hpp"
#include "qgreedy/io.hpp"
#include "qgreedy/rng.hpp"

namespace qgreedy {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Vector flatten(const std::vector<Vector>& rows, std::size_t dim, const char* what) {
    Vector out;
    out.reserve(rows.size() * dim);
    for (std::size_t n = 0; n < rows.size(); ++n) {
        if (rows[n].size() != dim)
            throw BasisError(std::string(what) + " row " + std::to_string(n + 1) + " has length " +
                             std::to_string(rows[n].size()) + ", ambient dimension is " + std::to_string(dim));
        for (double x : rows[n]) {
            if (!std::isfinite(x)) throw BasisError(std::string(what) + " row " + std::to_string(n + 1) + " is not finite");
            out.push_back(x);
        }
    }
    return out;
}

Vector invert_transposed(const Vector& vectors, std::size_t d) {
    // Rows of V are x_n; biorthogonal duals are the rows of (V^{-1})^T.
    Eigen::Map<const RowMatrix> v(vectors.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    Eigen::FullPivLU<RowMatrix> lu(v);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw BasisError("singular vector matrix: the vectors do not form a basis");
    RowMatrix inv_t = lu.inverse().transpose();
    return Vector(inv_t.data(), inv_t.data() + inv_t.size());
}

} // namespace

Basis::Basis(AmbientSpace space, std::vector<Vector> vectors, std::optional<std::vector<Vector>> duals,
             std::vector<std::string> labels, std::string name)
    : space_(std::move(space)), d_(vectors.size()), labels_(std::move(labels)), name_(std::move(name)) {
    const std::size_t dim = space_.dim();
    if (d_ == 0) throw BasisError("a basis needs at least one vector");
    if (d_ > dim) throw BasisError("more vectors (" + std::to_string(d_) + ") than ambient dimension " + std::to_string(dim));
    if (!labels_.empty() && labels_.size() != d_) throw BasisError("label count does not match vector count");
    vectors_ = flatten(vectors, dim, "vector");
    if (duals) {
        if (duals->size() != d_) throw BasisError("dual count does not match vector count");
        duals_ = flatten(*duals, dim, "dual");
    } else {
        if (d_ != dim) throw BasisError("duals required: vector matrix is " + std::to_string(d_) + "x" + std::to_string(dim));
        duals_ = invert_transposed(vectors_, d_);
    }

    std::size_t worst_n = 0, worst_k = 0;
    for (std::size_t n = 0; n < d_; ++n) {
        for (std::size_t k = 0; k < d_; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < dim; ++j) s += duals_[n * dim + j] * vectors_[k * dim + j];
            double err = std::fabs(s - (n == k ? 1.0 : 0.0));
            if (err > biorth_error_) {
                biorth_error_ = err;
                worst_n = n;
                worst_k = k;
            }
        }
    }
    if (biorth_error_ > kBiorthogonalityTol)
        throw BasisError("biorthogonality violated: |x_" + std::to_string(worst_n + 1) + "*(x_" +
                         std::to_string(worst_k + 1) + ") - delta| = " + format_double(biorth_error_));

    vector_norms_.resize(d_);
    dual_norms_.resize(d_);
    for (std::size_t n = 0; n < d_; ++n) {
        vector_norms_[n] = space_.gauge(vector(n));
        bool exact = true;
        dual_norms_[n] = space_.dual_gauge(dual(n), &exact);
        dual_norms_exact_ = dual_norms_exact_ && exact;
        if (!(vector_norms_[n] > 0.0)) throw BasisError("vector " + std::to_string(n + 1) + " has zero norm");
    }

    unit_ = d_ == dim;
    for (std::size_t n = 0; unit_ && n < d_; ++n)
        for (std::size_t j = 0; j < dim; ++j)
            if (vectors_[n * dim + j] != (n == j ? 1.0 : 0.0)) {
                unit_ = false;
                break;
            }
}

double Basis::a() const { return *std::max_element(vector_norms_.begin(), vector_norms_.end()); }
double Basis::b() const { return *std::max_element(dual_norms_.begin(), dual_norms_.end()); }
double Basis::min_vector_norm() const { return *std::min_element(vector_norms_.begin(), vector_norms_.end()); }

void Basis::coefficients_into(std::span<const double> f, std::span<double> out) const {
    const std::size_t dim = space_.dim();
    for (std::size_t n = 0; n < d_; ++n) {
        const double* row = duals_.data() + n * dim;
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) s += row[j] * f[j];
        out[n] = s;
    }
}

void Basis::synthesize_into(std::span<const double> coeffs, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t n = 0; n < d_; ++n)
        if (coeffs[n] != 0.0) axpy(coeffs[n], n, out);
}

void Basis::axpy(double c, std::size_t n, std::span<double> out) const {
    const std::size_t dim = space_.dim();
    const double* row = vectors_.data() + n * dim;
    for (std::size_t j = 0; j < dim; ++j) out[j] += c * row[j];
}

std::vector<Vector> Basis::vector_rows() const {
    std::vector<Vector> rows(d_);
    for (std::size_t n = 0; n < d_; ++n) rows[n].assign(vector(n).begin(), vector(n).end());
    return rows;
}

std::vector<Vector> Basis::dual_rows() const {
    std::vector<Vector> rows(d_);
    for (std::size_t n = 0; n < d_; ++n) rows[n].assign(dual(n).begin(), dual(n).end());
    return rows;
}

// ---------------------------------------------------------------------------

Vector coefficient_transform(const Basis& basis, std::span<const double> f) {
    if (f.size() != basis.ambient_dim()) throw DimensionMismatch("coefficient_transform: vector length does not match the ambient space");
    require_finite(f, "coefficient_transform");
    Vector out(basis.size());
    basis.coefficients_into(f, out);
    return out;
}

Vector synthesize(const Basis& basis, std::span<const double> coeffs) {
    if (coeffs.size() != basis.size()) throw DimensionMismatch("synthesize: coefficient count does not match the basis");
    Vector out(basis.ambient_dim());
    basis.synthesize_into(coeffs, out);
    return out;
}

SignOperatorResult sign_operator(const Basis& basis, std::span<const double> gamma, std::span<const double> f) {
    if (gamma.size() != basis.size()) throw DimensionMismatch("sign_operator: multiplier length does not match the basis");
    require_finite(gamma, "sign_operator");
    SignOperatorResult res;
    Vector c = coefficient_transform(basis, f);
    for (std::size_t n = 0; n < c.size(); ++n) {
        if (std::fabs(gamma[n]) > 1.0) res.gamma_outside_unit_ball = true;
        c[n] *= gamma[n];
    }
    res.value = synthesize(basis, c);
    return res;
}

Vector coordinate_projection(const Basis& basis, const IndexSet& set, std::span<const double> f) {
    Vector gamma(basis.size(), 0.0);
    for (auto n : set) {
        if (n >= basis.size())
            throw InvalidInput("coordinate_projection: index " + std::to_string(n + 1) + " outside 1.." +
                               std::to_string(basis.size()));
        gamma[n] = 1.0;
    }
    return sign_operator(basis, gamma, f).value;
}

// ---------------------------------------------------------------------------

std::vector<std::string> zoo_names() { return {"unit", "difference", "block_l2", "perturbed_unit", "custom_file"}; }

Basis zoo(const std::string& name, const ZooParams& params) {
    auto identity_rows = [](std::size_t d) {
        std::vector<Vector> rows(d, Vector(d, 0.0));
        for (std::size_t n = 0; n < d; ++n) rows[n][n] = 1.0;
        return rows;
    };
    if (name == "unit") {
        return Basis(AmbientSpace::lp(params.p, params.dim), identity_rows(params.dim), identity_rows(params.dim), {}, "unit");
    }
    if (name == "difference") {
        const std::size_t d = params.dim;
        std::vector<Vector> vecs(d, Vector(d, 0.0)), duals(d, Vector(d, 0.0));
        for (std::size_t n = 0; n < d; ++n) {
            vecs[n][n] = 1.0;
            if (n > 0) vecs[n][n - 1] = -1.0;
            for (std::size_t j = n; j < d; ++j) duals[n][j] = 1.0;  // x_n* = sum_{j >= n} e_j*
        }
        return Basis(AmbientSpace::lp(params.p, d), std::move(vecs), std::move(duals), {}, "difference");
    }
    if (name == "block_l2") {
        auto space = AmbientSpace::block_lp_l2(params.p, params.blocks);
        std::size_t d = space.dim();
        return Basis(std::move(space), identity_rows(d), identity_rows(d), {}, "block_l2");
    }
    if (name == "perturbed_unit") {
        const std::size_t d = params.dim;
        if (!(params.perturbation >= 0.0 && params.perturbation < 1.0))
            throw InvalidInput("perturbed_unit: perturbation must lie in [0, 1)");
        auto rows = identity_rows(d);
        CounterRng rng(params.seed, stream_id(0x200, d));
        // Off-diagonal row mass stays below `perturbation` < 1, so the matrix
        // is strictly diagonally dominant and invertible.
        double scale = d > 1 ? params.perturbation / static_cast<double>(d - 1) : 0.0;
        for (std::size_t n = 0; n < d; ++n)
            for (std::size_t j = 0; j < d; ++j)
                if (j != n) rows[n][j] = scale * (2.0 * rng.uniform() - 1.0);
        return Basis(AmbientSpace::lp(params.p, d), std::move(rows), std::nullopt, {}, "perturbed_unit");
    }
    if (name == "custom_file") {
        if (params.path.empty()) throw InvalidInput("custom_file needs a path");
        return load_basis(params.path);
    }
    throw InvalidInput("unknown zoo basis '" + name + "'");
}

} // namespace qgreedy
