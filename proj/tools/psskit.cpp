// psskit command-line front end. JSON report on stdout, summary on stderr.
// Exit codes: 0 pass, 1 semantic failure, 2 usage or input error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "psskit/construct.hpp"
#include "psskit/cosine.hpp"
#include "psskit/family.hpp"
#include "psskit/io.hpp"
#include "psskit/ospb.hpp"
#include "psskit/pkss.hpp"
#include "psskit/pss_check.hpp"

using namespace psskit;
using io::json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Outcome {
    int code = kPass;
    json result;
    std::string summary;
};

std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i)
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return out.str();
}

std::vector<double> parse_csv_numbers(const std::string& text)
{
    const VectorFamily f = io::family_from_csv(text);
    const Vector v = f[0];
    return {v.data(), v.data() + v.size()};
}

std::vector<std::size_t> parse_dims(const std::string& text)
{
    std::vector<std::size_t> out;
    std::istringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != cell.size() || v < 1)
            throw InvalidInput("--blocks expects positive integers separated by commas");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

struct Input {
    VectorFamily family;
    std::string digest;
};

Input load(const std::string& path)
{
    const std::string text = io::read_file(path);
    return {io::parse_family(text), sha256_hex(text)};
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidInput("cannot write " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Positive spanning set toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    Tolerances tol;
    EnumerationOptions enumeration;
    std::optional<std::uint64_t> seed_flag;
    app.add_option("--tol", tol.zero_tol, "zero tolerance (relative)");
    app.add_option("--rank-tol", tol.rank_tol, "singular value cutoff factor");
    app.add_option("--dedupe-tol", tol.dedupe_tol, "1 - cos threshold for merging unit vectors");
    app.add_option("--max-subsets", enumeration.max_subsets, "cap on enumerated subsets (0 = none)");
    app.add_option("--jobs", enumeration.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed_flag, "random seed (falls back to PSSKIT_SEED, then 0)");

    std::string file, method = "auto", out_path;
    std::size_t k = 0;

    auto* cm = app.add_subcommand("cm", "cosine measure");
    cm->add_option("file", file, "family file (JSON or CSV)")->required();
    cm->add_option("--method", method)->check(CLI::IsMember({"auto", "generic", "ospb"}));

    auto* cmk = app.add_subcommand("cmk", "k-cosine measure");
    cmk->add_option("file", file)->required();
    cmk->add_option("--k", k)->required();

    auto* check = app.add_subcommand("check", "property checks");
    check->add_option("file", file)->required();
    bool c_pss = false, c_pb = false, c_pi = false, c_ospb = false;
    std::optional<std::size_t> c_pkss, c_pkb, c_pki;
    std::string c_crit;
    auto* modes = check->add_option_group("mode");
    modes->add_flag("--pss", c_pss, "positive spanning set");
    modes->add_flag("--pb", c_pb, "positive basis");
    modes->add_flag("--pi", c_pi, "positively independent");
    modes->add_flag("--ospb", c_ospb, "orthogonally structured positive basis");
    modes->add_option("--pkss", c_pkss, "positive k-spanning set");
    modes->add_option("--pkb", c_pkb, "positive k-basis");
    modes->add_option("--pki", c_pki, "positively k-independent");
    modes->add_option("--crit", c_crit, "critical vector, comma separated");
    modes->require_option(1);

    auto* detect = app.add_subcommand("detect-ospb", "OSPB decomposition");
    detect->add_option("file", file)->required();

    auto* gen = app.add_subcommand("gen", "generate a family");
    std::string kind, blocks;
    std::size_t n = 0;
    gen->add_option("kind", kind)->required()->check(CLI::IsMember({"minimal", "maximal", "ospb"}));
    gen->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    gen->add_option("--blocks", blocks, "block dimensions, e.g. 2,3");
    gen->add_option("-o,--output", out_path, "write the family JSON here");

    auto* build = app.add_subcommand("build-pkss", "positive k-spanning set construction");
    std::string build_method = "copies";
    build->add_option("file", file)->required();
    build->add_option("--k", k)->required();
    build->add_option("--method", build_method)->check(CLI::IsMember({"copies", "global", "blockwise"}));
    build->add_option("-o,--output", out_path, "write the family JSON here");

    auto* gram_cmd = app.add_subcommand("gram", "Gram matrix");
    gram_cmd->add_option("file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    std::uint64_t seed = 0;
    if (seed_flag) {
        seed = *seed_flag;
    } else if (const char* env = std::getenv("PSSKIT_SEED")) {
        try {
            seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: PSSKIT_SEED is not an unsigned integer\n";
            return kUsage;
        }
    }

    const auto start = std::chrono::steady_clock::now();
    CLI::App* sub = app.get_subcommands().front();
    json report;
    report["command"] = sub->get_name();
    report["input_digest"] = nullptr;
    report["seed"] = nullptr;
    Outcome o;

    try {
        tol.validate();
        const std::string name = sub->get_name();
        if (name == "cm") {
            const Input in = load(file);
            report["input_digest"] = in.digest;
            std::optional<OspbDecomposition> dec;
            std::string detect_reason;
            if (method != "generic") {
                OspbDetection det = detect_ospb(in.family, tol);
                detect_reason = det.reason;
                dec = std::move(det.decomposition);
            }
            if (method == "ospb" && !dec) {
                o.code = kFail;
                o.result = {{"ospb", false}, {"reason", detect_reason}};
                o.summary = "not an OSPB: " + detect_reason;
            } else if (dec) {
                const CosineResult r = cosine_measure_ospb(in.family, *dec, tol);
                o.result = io::to_json(r);
                o.summary = "cm = " + std::to_string(r.value) + " (ospb path)";
            } else {
                try {
                    const CosineResult r = cosine_measure_generic(in.family, std::nullopt, tol, enumeration);
                    o.result = io::to_json(r);
                    o.summary = "cm = " + std::to_string(r.value) + " (generic path)";
                } catch (const NotPositivelySpanning& e) {
                    o.code = kFail;
                    o.result = {{"positively_spanning", false}, {"certificate", io::to_json(e.check())}};
                    o.summary = e.what();
                }
            }
        } else if (name == "cmk") {
            const Input in = load(file);
            report["input_digest"] = in.digest;
            const KCosineResult r = k_cosine_measure(in.family, k, std::nullopt, tol, enumeration);
            o.result = io::to_json(r);
            o.result["k"] = k;
            if (r.status == KStatus::Positive) {
                o.summary = "cm_" + std::to_string(k) + " = " + std::to_string(r.value);
            } else {
                o.code = kFail;
                o.summary = "not a positive " + std::to_string(k) + "-spanning set";
            }
        } else if (name == "check") {
            const Input in = load(file);
            report["input_digest"] = in.digest;
            bool pass = false;
            std::string what;
            if (c_pss) {
                const PssCheck r = is_pss(in.family, std::nullopt, tol);
                pass = r.yes;
                what = "pss";
                o.result = io::to_json(r);
            } else if (c_pb) {
                pass = is_positive_basis(in.family, tol);
                what = "positive basis";
            } else if (c_pi) {
                pass = is_positively_independent(in.family, tol);
                what = "positively independent";
            } else if (c_ospb) {
                const OspbDetection det = detect_ospb(in.family, tol);
                pass = static_cast<bool>(det);
                what = "ospb";
                if (det)
                    o.result["decomposition"] = io::decomposition_to_json(*det.decomposition);
                else
                    o.result["reason"] = det.reason;
            } else if (c_pkss) {
                const PkssCheck r = is_pkss(in.family, *c_pkss, std::nullopt, tol, enumeration);
                pass = r.yes;
                what = "positive " + std::to_string(*c_pkss) + "-spanning set";
                if (r.failing_subset)
                    o.result["failing_subset"] = *r.failing_subset;
            } else if (c_pkb) {
                pass = is_positive_k_basis(in.family, *c_pkb, tol, enumeration);
                what = "positive " + std::to_string(*c_pkb) + "-basis";
            } else if (c_pki) {
                pass = is_positively_k_independent(in.family, *c_pki, tol);
                what = "positively " + std::to_string(*c_pki) + "-independent";
            } else {
                const auto c = parse_csv_numbers(c_crit);
                if (c.size() != in.family.dim())
                    throw InvalidInput("--crit vector has the wrong dimension");
                pass = is_critical_vector(in.family, Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size())), tol);
                what = "critical vector";
            }
            o.result["check"] = what;
            o.result["pass"] = pass;
            o.code = pass ? kPass : kFail;
            o.summary = what + (pass ? ": yes" : ": no");
        } else if (name == "detect-ospb") {
            const Input in = load(file);
            report["input_digest"] = in.digest;
            const OspbDetection det = detect_ospb(in.family, tol);
            if (det) {
                o.result = {{"ospb", true}, {"decomposition", io::decomposition_to_json(*det.decomposition)}};
                o.summary = "OSPB with s = " + std::to_string(det.decomposition->s());
            } else {
                o.code = kFail;
                o.result = {{"ospb", false}, {"reason", det.reason}};
                o.summary = "not an OSPB: " + det.reason;
            }
        } else if (name == "gen") {
            VectorFamily f;
            if (kind == "minimal") {
                f = gen_minimal(n);
            } else if (kind == "maximal") {
                f = gen_maximal(n);
            } else {
                if (blocks.empty())
                    throw InvalidInput("gen ospb needs --blocks");
                f = gen_ospb(n, parse_dims(blocks), seed);
                report["seed"] = seed;
            }
            const json fam = io::family_to_json(f);
            if (!out_path.empty())
                write_text(out_path, fam.dump(2) + "\n");
            o.result = {{"family", fam}};
            o.summary = "generated " + std::to_string(f.size()) + " vectors in R^" + std::to_string(f.dim());
        } else if (name == "build-pkss") {
            const Input in = load(file);
            report["input_digest"] = in.digest;
            VectorFamily f;
            if (build_method == "copies") {
                f = build_pkss_copies(in.family, k, tol);
            } else if (build_method == "global") {
                report["seed"] = seed;
                f = build_pkss_global_rotations(in.family, k, seed, tol);
            } else {
                report["seed"] = seed;
                const BlockwiseBuild b = build_pkbasis_blockwise(in.family, k, seed, tol, 32, enumeration);
                f = b.family;
                json plans = json::array();
                for (const RotationPlan& p : b.plans)
                    plans.push_back(io::to_json(p));
                o.result["rotation_plans"] = plans;
                o.result["cm_k"] = b.cm_k;
                o.result["cm_base"] = b.cm_base;
            }
            const json fam = io::family_to_json(f);
            if (!out_path.empty())
                write_text(out_path, fam.dump(2) + "\n");
            o.result["family"] = fam;
            o.result["method"] = build_method;
            o.summary = "built " + std::to_string(f.size()) + " vectors (" + build_method + ")";
        } else if (name == "gram") {
            const Input in = load(file);
            report["input_digest"] = in.digest;
            o.result = {{"gram", io::matrix_rows_to_json(gram(in.family))}};
            o.summary = "Gram matrix of " + std::to_string(in.family.size()) + " vectors";
        }
    } catch (const ConstructionError& e) {
        o.code = kFail;
        o.result = {{"error", e.what()}};
        o.summary = std::string("construction failed: ") + e.what();
    } catch (const Truncated& e) {
        o.code = kFail;
        o.result = {{"error", "truncated"}, {"detail", e.what()}};
        o.summary = std::string("truncated: ") + e.what();
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    const auto stop = std::chrono::steady_clock::now();
    report["result"] = o.result;
    report["tolerances"] = io::tolerances_to_json(tol);
    report["timing_ms"] = std::chrono::duration<double, std::milli>(stop - start).count();
    std::cout << report.dump(2) << "\n";
    std::cerr << o.summary << "\n";
    return o.code;
}
