#include "psskit/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace psskit::io {

namespace {

double finite_number(const json& v, const char* where)
{
    if (!v.is_number())
        throw InvalidInput(std::string(where) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw InvalidInput(std::string(where) + ": non-finite value");
    return x;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

json index_list(const IndexList& idx)
{
    return json(idx);
}

}  // namespace

VectorFamily family_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("dim") || !j.contains("vectors"))
        throw InvalidInput("family JSON needs \"dim\" and \"vectors\"");
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
        throw InvalidInput("family JSON: \"dim\" must be a positive integer");
    const auto dim = j["dim"].get<std::size_t>();
    if (!j["vectors"].is_array())
        throw InvalidInput("family JSON: \"vectors\" must be an array");
    std::vector<std::vector<double>> rows;
    for (const json& row : j["vectors"]) {
        if (!row.is_array())
            throw InvalidInput("family JSON: each vector must be an array");
        std::vector<double> r;
        for (const json& v : row)
            r.push_back(finite_number(v, "family JSON"));
        rows.push_back(std::move(r));
    }
    return VectorFamily(dim, rows);
}

json family_to_json(const VectorFamily& family)
{
    return json{{"dim", family.dim()}, {"vectors", family.rows()}};
}

VectorFamily family_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty())
            continue;
        std::vector<double> r;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            cell = trim(cell);
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != cell.size())
                throw InvalidInput("CSV line " + std::to_string(lineno) + ": cannot parse \"" + cell + "\"");
            if (!std::isfinite(x))
                throw InvalidInput("CSV line " + std::to_string(lineno) + ": non-finite value");
            r.push_back(x);
        }
        rows.push_back(std::move(r));
    }
    if (rows.empty())
        throw InvalidInput("CSV input has no vectors");
    return VectorFamily(rows.front().size(), rows);
}

VectorFamily parse_family(const std::string& text)
{
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '{') {
        json j;
        try {
            j = json::parse(t);
        } catch (const json::parse_error& e) {
            throw InvalidInput(std::string("family JSON: ") + e.what());
        }
        return family_from_json(j);
    }
    return family_from_csv(text);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInput("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Vector vector_from_json(const json& j, std::size_t dim)
{
    if (!j.is_array() || j.size() != dim)
        throw InvalidInput("expected a vector of length " + std::to_string(dim));
    Vector v(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i)
        v(static_cast<Eigen::Index>(i)) = finite_number(j[i], "vector");
    return v;
}

json vector_to_json(const Vector& v)
{
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json matrix_rows_to_json(const Matrix& m)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        out.push_back(vector_to_json(m.row(i).transpose()));
    return out;
}

json tolerances_to_json(const Tolerances& tol)
{
    return json{{"zero_tol", tol.zero_tol}, {"rank_tol", tol.rank_tol}, {"dedupe_tol", tol.dedupe_tol}};
}

json decomposition_to_json(const OspbDecomposition& dec)
{
    json blocks = json::array();
    for (const OspbBlock& b : dec.blocks)
        blocks.push_back({{"indices", index_list(b.indices)}, {"onb", matrix_rows_to_json(b.subspace.onb().transpose())}});
    return json{{"s", dec.s()}, {"blocks", blocks}};
}

OspbDecomposition decomposition_from_json(const json& j, std::size_t ambient_dim)
{
    if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array())
        throw InvalidInput("decomposition JSON needs a \"blocks\" array");
    OspbDecomposition dec;
    for (const json& b : j["blocks"]) {
        if (!b.contains("indices") || !b.contains("onb") || !b["onb"].is_array())
            throw InvalidInput("decomposition block needs \"indices\" and \"onb\"");
        OspbBlock blk;
        for (const json& i : b["indices"]) {
            if (!i.is_number_unsigned())
                throw InvalidInput("decomposition indices must be nonnegative integers");
            blk.indices.push_back(i.get<std::size_t>());
        }
        Matrix onb(static_cast<Eigen::Index>(ambient_dim), static_cast<Eigen::Index>(b["onb"].size()));
        for (std::size_t c = 0; c < b["onb"].size(); ++c)
            onb.col(static_cast<Eigen::Index>(c)) = vector_from_json(b["onb"][c], ambient_dim);
        blk.subspace = Subspace(ambient_dim, std::move(onb));
        dec.blocks.push_back(std::move(blk));
    }
    if (j.contains("s") && j["s"].get<std::size_t>() != dec.s())
        throw InvalidInput("decomposition \"s\" does not match the number of blocks");
    return dec;
}

json to_json(const PssCheck& check)
{
    json out{{"positively_spanning", check.yes}, {"rank", check.rank}, {"subspace_dim", check.subspace_dim},
             {"reason", check.reason()}};
    if (check.unreachable)
        out["unreachable"] = *check.unreachable;
    return out;
}

json to_json(const CosineResult& r)
{
    json vectors = json::array();
    for (const Vector& v : r.cosine_vectors)
        vectors.push_back(vector_to_json(v));
    json bases = json::array();
    for (const IndexList& b : r.witness_bases)
        bases.push_back(index_list(b));
    return json{{"value", r.value},
                {"cosine_vectors", vectors},
                {"witness_bases", bases},
                {"bases_examined", r.bases_examined},
                {"singular_skipped", r.singular_skipped},
                {"truncated", r.truncated},
                {"method", r.method}};
}

json to_json(const KCosineResult& r)
{
    json out;
    out["status"] = r.status == KStatus::Positive ? "positive" : "not_positive";
    if (r.status == KStatus::Positive)
        out["value"] = r.value;
    else
        out["value"] = nullptr;
    json subsets = json::array();
    for (const IndexList& s : r.witness_subsets)
        subsets.push_back(index_list(s));
    out["witness_subsets"] = subsets;
    json vectors = json::array();
    for (const Vector& v : r.witness_vectors)
        vectors.push_back(vector_to_json(v));
    out["witness_vectors"] = vectors;
    out["certificate"] = r.certificate ? index_list(*r.certificate) : json(nullptr);
    out["subsets_examined"] = r.subsets_examined;
    return out;
}

json to_json(const RotationPlan& plan)
{
    json vs = json::array();
    for (const Vector& v : plan.separating_vectors)
        vs.push_back(vector_to_json(v));
    json skipped = json::array();
    for (const auto& [i, ip] : plan.skipped_pairs)
        skipped.push_back({i, ip});
    return json{{"block_index", plan.block_index},
                {"plane", matrix_rows_to_json(plan.plane.transpose())},
                {"angles", plan.angles},
                {"rho", plan.rho},
                {"separating_vectors", vs},
                {"rho_skipped_pairs", skipped},
                {"plane_draws", plan.attempts}};
}

}  // namespace psskit::io
