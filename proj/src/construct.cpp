#include "psskit/construct.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "psskit/family.hpp"
#include "psskit/ospb.hpp"
#include "psskit/pkss.hpp"
#include "psskit/pss_check.hpp"

namespace psskit {

namespace {

constexpr double kOrthTol = 1e-9;

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t tag)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    return std::mt19937_64(seq);
}

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen)
{
    std::normal_distribution<double> normal;
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = normal(gen);
    return m;
}

// Orthonormal factor of a Gaussian matrix with the signs of R's diagonal
// folded in, then forced to determinant +1.
Matrix haar_orthogonal(Eigen::Index n, std::mt19937_64& gen)
{
    const Matrix g = gaussian(n, n, gen);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j)
        if (r(j, j) < 0.0)
            q.col(j) = -q.col(j);
    if (q.determinant() < 0.0)
        q.col(0) = -q.col(0);
    return q;
}

double cosine(const Vector& a, const Vector& b)
{
    return a.dot(b) / (a.norm() * b.norm());
}

// First pair of columns whose cosine exceeds 1 - dedupe_tol, if any.
std::optional<std::pair<std::size_t, std::size_t>> parallel_pair(const Matrix& cols, const Tolerances& tol)
{
    for (Eigen::Index a = 0; a < cols.cols(); ++a)
        for (Eigen::Index b = a + 1; b < cols.cols(); ++b)
            if (cosine(cols.col(a), cols.col(b)) > 1.0 - tol.dedupe_tol)
                return std::make_pair(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    return std::nullopt;
}

void validate_rotation(const Matrix& r, std::size_t n)
{
    if (static_cast<std::size_t>(r.rows()) != n || static_cast<std::size_t>(r.cols()) != n)
        throw ConstructionError(ConstructionError::Kind::NotRotation, "rotation has the wrong shape");
    const double orth = (r.transpose() * r - Matrix::Identity(r.rows(), r.cols())).cwiseAbs().maxCoeff();
    if (orth > kOrthTol)
        throw ConstructionError(ConstructionError::Kind::NotRotation, "matrix is not orthogonal");
    if (std::abs(r.determinant() - 1.0) > kOrthTol)
        throw ConstructionError(ConstructionError::Kind::NotRotation, "orthogonal matrix has determinant -1");
}

}  // namespace

VectorFamily gen_minimal(std::size_t n)
{
    if (n < 1)
        throw InvalidInput("gen_minimal: n must be at least 1");
    const auto nn = static_cast<Eigen::Index>(n);
    Matrix m(nn, nn + 1);
    m.leftCols(nn) = Matrix::Identity(nn, nn);
    m.col(nn) = -Vector::Ones(nn);
    return VectorFamily(std::move(m));
}

VectorFamily gen_maximal(std::size_t n)
{
    if (n < 1)
        throw InvalidInput("gen_maximal: n must be at least 1");
    const auto nn = static_cast<Eigen::Index>(n);
    Matrix m(nn, 2 * nn);
    m.leftCols(nn) = Matrix::Identity(nn, nn);
    m.rightCols(nn) = -Matrix::Identity(nn, nn);
    return VectorFamily(std::move(m));
}

Matrix random_rotation(std::size_t n, std::uint64_t seed)
{
    if (n < 1)
        throw InvalidInput("random_rotation: n must be at least 1");
    std::mt19937_64 gen(seed);
    return haar_orthogonal(static_cast<Eigen::Index>(n), gen);
}

VectorFamily gen_ospb(std::size_t n, const std::vector<std::size_t>& block_dims, std::uint64_t seed)
{
    if (block_dims.empty())
        throw InvalidInput("gen_ospb: block dimensions are empty");
    if (std::any_of(block_dims.begin(), block_dims.end(), [](std::size_t d) { return d == 0; }))
        throw InvalidInput("gen_ospb: block dimensions must be positive");
    if (std::accumulate(block_dims.begin(), block_dims.end(), std::size_t{0}) != n)
        throw InvalidInput("gen_ospb: block dimensions must sum to n");

    const Matrix q = random_rotation(n, seed);
    const auto nn = static_cast<Eigen::Index>(n);
    Matrix out(nn, nn + static_cast<Eigen::Index>(block_dims.size()));
    Eigen::Index src = 0, dst = 0;
    for (std::size_t dim : block_dims) {
        const auto l = static_cast<Eigen::Index>(dim);
        out.middleCols(dst, l) = q.middleCols(src, l);
        out.col(dst + l) = -q.middleCols(src, l).rowwise().sum();
        src += l;
        dst += l + 1;
    }
    return VectorFamily(std::move(out));
}

std::vector<Vector> separating_vectors(const VectorFamily& minimal_pb, const Tolerances& tol)
{
    tol.validate();
    const Subspace span = span_of(minimal_pb, tol);
    const std::size_t l = span.dim();
    if (l < 1 || minimal_pb.size() != l + 1 || !is_positive_basis(minimal_pb, tol))
        throw InvalidInput("separating_vectors: input is not a minimal positive basis");

    const Matrix c = coordinates(minimal_pb, span, tol);
    const auto ll = static_cast<Eigen::Index>(l);

    // Positive combination summing to zero: the one-dimensional nullspace.
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullV);
    Vector lambda = svd.matrixV().col(ll);
    if (lambda.sum() < 0.0)
        lambda = -lambda;
    if (lambda.minCoeff() <= tol.zero_tol * lambda.maxCoeff())
        throw InvalidInput("separating_vectors: nullspace is not strictly positive");
    lambda /= lambda.maxCoeff();

    const Matrix b = c.leftCols(ll) * lambda.head(ll).asDiagonal();
    const auto lu = b.transpose().fullPivLu();
    std::vector<Vector> v;
    v.reserve(l + 1);
    for (Eigen::Index i = 0; i < ll; ++i) {
        Vector rhs = -Vector::Ones(ll);
        rhs(i) += static_cast<double>(l + 1);
        v.push_back(span.onb() * lu.solve(rhs));
    }
    v.push_back(span.onb() * lu.solve(Vector(-Vector::Ones(ll))));
    return v;
}

RhoResult rho(const VectorFamily& minimal_pb, const std::vector<Vector>& v, const Tolerances& tol)
{
    tol.validate();
    if (v.size() != minimal_pb.size())
        throw InvalidInput("rho: need one separating vector per element");
    const Subspace span = span_of(minimal_pb, tol);
    const Matrix c = coordinates(minimal_pb, span, tol);

    RhoResult out;
    for (std::size_t ip = 0; ip < v.size(); ++ip) {
        const Vector w = (span.onb().transpose() * v[ip]).normalized();
        for (std::size_t i = 0; i < minimal_pb.size(); ++i) {
            const Vector d = c.col(static_cast<Eigen::Index>(i));
            const Vector proj = d - d.dot(w) * w;
            if (proj.norm() <= tol.zero_tol * d.norm()) {
                out.skipped_pairs.emplace_back(i, ip);
                continue;
            }
            out.value = std::max(out.value, cosine(d, proj));
        }
    }
    return out;
}

Matrix plane_rotation(const Matrix& plane, double theta)
{
    const Vector p = plane.col(0);
    const Vector q = plane.col(1);
    const Eigen::Index n = plane.rows();
    return Matrix::Identity(n, n) + (std::cos(theta) - 1.0) * (p * p.transpose() + q * q.transpose())
           + std::sin(theta) * (q * p.transpose() - p * q.transpose());
}

BlockRotation rotations_for_block(const VectorFamily& minimal_pb, std::size_t k, std::uint64_t seed,
                                  const Tolerances& tol, unsigned max_retries, std::size_t block_index)
{
    tol.validate();
    if (k < 1)
        throw InvalidInput("rotations_for_block: k must be at least 1");
    const Subspace span = span_of(minimal_pb, tol);
    if (span.dim() < 2) {
        std::ostringstream msg;
        msg << "block " << block_index << " is one-dimensional; plane rotations cannot produce a positive k-basis "
            << "there (use global rotations instead)";
        throw ConstructionError(ConstructionError::Kind::DimOneBlock, msg.str());
    }

    BlockRotation out;
    RotationPlan& plan = out.plan;
    plan.block_index = block_index;
    plan.separating_vectors = separating_vectors(minimal_pb, tol);
    const RhoResult r = rho(minimal_pb, plan.separating_vectors, tol);
    plan.rho = r.value;
    plan.skipped_pairs = r.skipped_pairs;
    const double theta_max = std::acos(r.value);
    for (std::size_t j = 1; j <= k; ++j)
        plan.angles.push_back(static_cast<double>(j) * theta_max / static_cast<double>(k + 1));

    const Matrix unit = normalize(minimal_pb, tol).matrix();
    const Matrix coords = coordinates(VectorFamily(unit), span, tol);
    const auto l = static_cast<Eigen::Index>(span.dim());
    const auto m = unit.cols();
    std::mt19937_64 gen = substream(seed, block_index);

    std::string last_failure = "no plane drawn";
    for (unsigned attempt = 0; attempt <= max_retries; ++attempt) {
        ++plan.attempts;
        Eigen::HouseholderQR<Matrix> qr(gaussian(l, 2, gen));
        const Matrix local = qr.householderQ() * Matrix::Identity(l, 2);

        const Matrix in_plane = local.transpose() * coords;
        if (in_plane.colwise().norm().minCoeff() <= tol.zero_tol) {
            last_failure = "a vector is orthogonal to the rotation plane";
            continue;
        }

        plan.plane = span.onb() * local;
        Matrix all(unit.rows(), m * static_cast<Eigen::Index>(k));
        for (std::size_t j = 0; j < k; ++j)
            all.middleCols(static_cast<Eigen::Index>(j) * m, m) = plane_rotation(plan.plane, plan.angles[j]) * unit;

        if (const auto pair = parallel_pair(all, tol)) {
            std::ostringstream msg;
            msg << "rotated vectors " << pair->first << " and " << pair->second << " are parallel";
            last_failure = msg.str();
            continue;
        }
        for (Eigen::Index j = 0; j < all.cols(); ++j)
            if (!(cosine(all.col(j), unit.col(j % m)) > plan.rho))
                throw ConstructionError(ConstructionError::Kind::VerificationFailed,
                                        "rotation angle exceeds the admissible bound");

        const Matrix original = minimal_pb.matrix();
        for (std::size_t j = 0; j < k; ++j)
            out.rotated.emplace_back(plane_rotation(plan.plane, plan.angles[j]) * original);
        return out;
    }
    std::ostringstream msg;
    msg << "block " << block_index << ": no admissible rotation plane after " << plan.attempts
        << " draw(s); last failure: " << last_failure;
    throw ConstructionError(ConstructionError::Kind::RetriesExhausted, msg.str());
}

VectorFamily build_pkss_copies(const VectorFamily& family, std::size_t k, const Tolerances& tol)
{
    if (k < 1)
        throw InvalidInput("build_pkss_copies: k must be at least 1");
    const PssCheck check = is_pss(family, std::nullopt, tol);
    if (!check)
        throw ConstructionError(ConstructionError::Kind::NotPss, "input is not positively spanning: " + check.reason());
    VectorFamily out = family;
    for (std::size_t j = 1; j < k; ++j)
        out = out.concat(family);
    return out;
}

VectorFamily build_pkss_global_rotations(const VectorFamily& family, const std::vector<Matrix>& rotations,
                                         const Tolerances& tol)
{
    if (rotations.empty())
        throw InvalidInput("build_pkss_global_rotations: no rotations given");
    for (const Matrix& r : rotations)
        validate_rotation(r, family.dim());
    const PssCheck check = is_pss(family, std::nullopt, tol);
    if (!check)
        throw ConstructionError(ConstructionError::Kind::NotPss, "input is not positively spanning: " + check.reason());
    const auto m = static_cast<Eigen::Index>(family.size());
    Matrix out(family.matrix().rows(), m * static_cast<Eigen::Index>(rotations.size()));
    for (std::size_t j = 0; j < rotations.size(); ++j)
        out.middleCols(static_cast<Eigen::Index>(j) * m, m) = rotations[j] * family.matrix();
    return VectorFamily(std::move(out));
}

VectorFamily build_pkss_global_rotations(const VectorFamily& family, std::size_t k, std::uint64_t seed,
                                         const Tolerances& tol)
{
    if (k < 1)
        throw InvalidInput("build_pkss_global_rotations: k must be at least 1");
    std::vector<Matrix> rotations;
    for (std::size_t j = 0; j < k; ++j) {
        std::mt19937_64 gen = substream(seed, j);
        rotations.push_back(haar_orthogonal(static_cast<Eigen::Index>(family.dim()), gen));
    }
    return build_pkss_global_rotations(family, rotations, tol);
}

BlockwiseBuild build_pkbasis_blockwise(const VectorFamily& family, std::size_t k, std::uint64_t seed,
                                       const Tolerances& tol, unsigned max_retries, const EnumerationOptions& opts)
{
    if (k < 1)
        throw InvalidInput("build_pkbasis_blockwise: k must be at least 1");
    const OspbDetection det = detect_ospb(family, tol);
    if (!det)
        throw ConstructionError(ConstructionError::Kind::NotOspb, "input is not an OSPB: " + det.reason);
    const OspbDecomposition& dec = *det.decomposition;
    for (std::size_t b = 0; b < dec.s(); ++b) {
        if (dec.blocks[b].subspace.dim() < 2) {
            std::ostringstream msg;
            msg << "block " << b << " is one-dimensional; blockwise rotation needs every block of dimension >= 2 "
                << "(use --method global for a positive k-spanning set)";
            throw ConstructionError(ConstructionError::Kind::DimOneBlock, msg.str());
        }
    }

    BlockwiseBuild out;
    std::vector<BlockRotation> per_block;
    for (std::size_t b = 0; b < dec.s(); ++b)
        per_block.push_back(rotations_for_block(family.subset(dec.blocks[b].indices), k, seed, tol, max_retries, b));

    Matrix cols(family.matrix().rows(), static_cast<Eigen::Index>(k * family.size()));
    Eigen::Index at = 0;
    for (std::size_t j = 0; j < k; ++j) {
        for (const BlockRotation& br : per_block) {
            const Matrix& part = br.rotated[j].matrix();
            cols.middleCols(at, part.cols()) = part;
            at += part.cols();
        }
    }
    for (BlockRotation& br : per_block)
        out.plans.push_back(std::move(br.plan));
    out.family = VectorFamily(std::move(cols));

    if (const auto pair = parallel_pair(out.family.matrix(), tol)) {
        std::ostringstream msg;
        msg << "output vectors " << pair->first << " and " << pair->second << " coincide";
        throw ConstructionError(ConstructionError::Kind::VerificationFailed, msg.str());
    }
    if (!is_positive_k_basis(out.family, k, tol, opts))
        throw ConstructionError(ConstructionError::Kind::VerificationFailed, "output is not a positive k-basis");
    out.cm_base = cosine_measure_ospb(family, dec, tol).value;
    const KCosineResult cmk = k_cosine_measure(out.family, k, std::nullopt, tol, opts);
    if (cmk.status != KStatus::Positive || cmk.value < out.cm_base - 1e-12)
        throw ConstructionError(ConstructionError::Kind::VerificationFailed,
                                "k-cosine measure of the output is below that of the input");
    out.cm_k = cmk.value;
    return out;
}

}  // namespace psskit
