// Command-line front end. Reports go to stdout (json by default); failures print one JSON line on
// stderr and exit with 1 (validation), 2 (cap exceeded) or 3 (invariant violation).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arith_mm.hpp"

using namespace arith_mm;
using json_io::Json;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kCap = 2, kInvariant = 3 };

void report_error(const char* kind, const std::string& reason)
{
    std::string oneline = reason;
    for (auto& ch : oneline)
        if (ch == '\n' || ch == '\r') ch = ' ';
    std::cerr << Json{{"error", kind}, {"reason", oneline}}.dump() << '\n';
}

// ---- output ----

std::string scalar_text(const Json& j)
{
    if (j.is_string()) return j.get<std::string>();
    if (j.is_null()) return "";
    return j.dump();
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out)
{
    if (j.is_object()) {
        if (j.empty()) out.emplace_back(prefix, "{}");
        for (const auto& item : j.items())
            flatten(item.value(), prefix.empty() ? item.key() : prefix + "." + item.key(), out);
    } else if (j.is_array()) {
        // arrays of scalars stay on one line
        bool flat = true;
        for (const auto& x : j) flat = flat && !x.is_structured();
        if (flat) {
            std::string s;
            for (std::size_t i = 0; i < j.size(); ++i) s += (i ? " " : "") + scalar_text(j[i]);
            out.emplace_back(prefix, s);
            return;
        }
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
    } else {
        out.emplace_back(prefix, scalar_text(j));
    }
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

void emit(const Json& report, const std::string& format)
{
    if (format == "json") {
        std::cout << report.dump() << '\n';
        return;
    }
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(report, "", rows);
    if (format == "csv") {
        std::cout << "key,value\n";
        for (const auto& [k, v] : rows) std::cout << csv_field(k) << ',' << csv_field(v) << '\n';
    } else {
        for (const auto& [k, v] : rows) std::cout << k << ": " << v << '\n';
    }
}

// ---- input helpers ----

Json load_json(const std::string& path)
{
    std::ifstream in(path);
    detail::require(static_cast<bool>(in), "cannot open input file: " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw validation_error(std::string("malformed JSON in ") + path + ": " + e.what());
    }
}

std::int64_t parse_coord(const std::string& s)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw validation_error("not an integer: '" + s + "'");
    }
    detail::require(used == s.size(), "not an integer: '" + s + "'");
    return v;
}

/// "1,0,2" -> point reduced mod N
Point parse_point_text(const ModelAmbient& amb, const std::string& text)
{
    Point p;
    std::stringstream ss(text);
    std::string item;
    const auto n = static_cast<std::int64_t>(amb.N);
    while (std::getline(ss, item, ',')) {
        const auto v = parse_coord(item);
        p.push_back(static_cast<std::uint64_t>(((v % n) + n) % n));
    }
    amb.check_point(p);
    return p;
}

/// "1,0;2,3" -> list of points
std::vector<Point> parse_points_text(const ModelAmbient& amb, const std::string& text)
{
    std::vector<Point> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!item.empty()) out.push_back(parse_point_text(amb, item));
    return out;
}

Point parse_point_json(const ModelAmbient& amb, const Json& j)
{
    detail::require(j.is_array(), "a point must be a list of integers");
    Point p;
    const auto n = static_cast<std::int64_t>(amb.N);
    for (const auto& x : j) {
        const auto v = json_io::parse_int(x, "point coordinate");
        p.push_back(static_cast<std::uint64_t>(((v % n) + n) % n));
    }
    amb.check_point(p);
    return p;
}

std::vector<Point> parse_points_json(const ModelAmbient& amb, const Json& j)
{
    detail::require(j.is_array(), "points must be a list of points");
    std::vector<Point> out;
    for (const auto& x : j) out.push_back(parse_point_json(amb, x));
    return out;
}

std::uint64_t json_uint(const Json& obj, const char* name)
{
    const auto v = json_io::parse_int(json_io::field(obj, name), name);
    detail::require(v >= 0, std::string(name) + " must be non-negative");
    return static_cast<std::uint64_t>(v);
}

/// Torsion-model arguments shared by lang-orbit, special-closure and keyprop-witness.
struct TorsionArgs {
    std::uint64_t N = 0;
    unsigned g = 0;
    unsigned c = 1;
    std::string input;
    std::string point;
    std::string points;
    std::string delta;

    void add(CLI::App* app, bool with_point, bool with_points)
    {
        app->add_option("--N", N, "torsion level N (ambient (Z/N)^(2g))");
        app->add_option("--g", g, "dimension g");
        app->add_option("--c", c, "Lang exponent c");
        if (with_point) app->add_option("--point", point, "point as comma-separated coordinates");
        if (with_points) app->add_option("--points", points, "points separated by ';'");
        app->add_option("--input", input, "JSON file with the same fields");
    }

    /// merges the JSON input (if any) into the flag values
    Json load(const std::vector<std::string>& allowed)
    {
        if (input.empty()) return Json::object();
        Json j = load_json(input);
        json_io::reject_unknown(j, allowed);
        if (j.contains("N")) N = json_uint(j, "N");
        if (j.contains("g")) g = static_cast<unsigned>(json_uint(j, "g"));
        if (j.contains("c")) c = static_cast<unsigned>(json_uint(j, "c"));
        return j;
    }

    ModelAmbient ambient(const Caps& caps) const
    {
        detail::require(c >= 1, "c must be >= 1");
        ModelAmbient amb{N, g};
        amb.validate();
        amb.checked_order(caps);
        return amb;
    }
};

BoundParams bound_params_from(std::uint64_t D, unsigned Delta, unsigned c, std::uint64_t d, std::uint64_t p,
                              const std::string& eps, const std::string& profile, const std::string& variant)
{
    BoundParams params;
    params.D = D;
    params.Delta = Delta;
    params.c = c;
    params.d = d;
    params.p = p;
    params.eps = json_io::parse_rational(Json(eps));
    if (profile == "stevens")
        params.profile = JacobsthalProfile::stevens();
    else
        detail::require(profile == "kanold", "unknown profile: " + profile);
    if (variant == "doubled")
        params.x_variant = XVariant::doubled;
    else
        detail::require(variant == "ceil_root", "unknown x variant: " + variant);
    params.validate();
    return params;
}

Json lift_inputs(const Json& j, bool central, SplitSemisimpleAlgebra& M, SplitSemisimpleAlgebra& N)
{
    std::vector<std::string> allowed{"M", "N", "embedding", "representation", "u", "w"};
    if (central) allowed.push_back("pi");
    json_io::reject_unknown(j, allowed);
    M = json_io::parse_algebra(json_io::field(j, "M"));
    N = json_io::parse_algebra(json_io::field(j, "N"));
    return j;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact arithmetic for effective Manin-Mumford bounds"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    std::string format = "json";
    std::string caps_list;
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--caps", caps_list, "caps override: ambient,group,lattice");

    // jacobsthal / coprime-shift
    std::uint64_t jd = 0;
    auto* jac = app.add_subcommand("jacobsthal", "Jacobsthal function g(d) and the Kanold bound");
    jac->add_option("d", jd, "d >= 1")->required();

    std::uint64_t sa = 0, sn = 0, sd = 0;
    auto* shift = app.add_subcommand("coprime-shift", "least k with gcd(a + k n, d) = 1");
    shift->add_option("a", sa)->required();
    shift->add_option("n", sn)->required();
    shift->add_option("d", sd)->required();

    // effective bounds
    std::uint64_t bD = 1, bd = 1, bp = 0;
    unsigned bDelta = 0, bc = 1;
    std::string beps = "1/2", bprofile = "kanold", bvariant = "ceil_root";
    auto add_bound_opts = [&](CLI::App* sub, bool need_all) {
        sub->add_option("--D", bD, "degree D >= 1")->required();
        auto* o = sub->add_option("--Delta", bDelta, "dimension Delta");
        auto* oc = sub->add_option("--c", bc, "Lang exponent c >= 1");
        if (need_all) {
            o->required();
            oc->required();
        }
        sub->add_option("--d", bd, "d >= 1");
        sub->add_option("--p", bp, "prime p, or 0 for none");
        sub->add_option("--eps", beps, "epsilon as p/q");
        sub->add_option("--profile", bprofile, "kanold | stevens");
        sub->add_option("--x-variant", bvariant, "ceil_root | doubled");
    };
    auto* delta = app.add_subcommand("delta-bound", "full constant ledger and order threshold");
    add_bound_opts(delta, true);
    auto* sigma = app.add_subcommand("sigma-set", "the set of c-th powers below N coprime to d p");
    add_bound_opts(sigma, false);

    // torsion model
    TorsionArgs lo_args, sc_args, kp_args;
    auto* lorbit = app.add_subcommand("lang-orbit", "orbit of a point under the Lang group");
    lo_args.add(lorbit, true, false);
    auto* closure = app.add_subcommand("special-closure", "smallest Lang-stable union of cosets containing S");
    sc_args.add(closure, false, true);
    auto* keyprop = app.add_subcommand("keyprop-witness", "coset L alpha + B between L a and V of least order");
    kp_args.add(keyprop, true, true);
    keyprop->add_option("--delta", kp_args.delta, "order cap for within_delta (default N)");

    // GL orbits and algebras
    std::string gl_input, lift_input, central_input;
    auto* glv = app.add_subcommand("gl-verify", "orbit-density bound for a matrix group over F_ell");
    glv->add_option("--input", gl_input, "JSON: ell, dim, generators, a, V [, C]")->required();
    auto* lift = app.add_subcommand("idempotent-lift", "idempotent v of M between w and u");
    lift->add_option("--input", lift_input, "JSON: M, N, embedding, representation, u, w")->required();
    auto* central = app.add_subcommand("idempotent-lift-central", "lift modulo a central idempotent pi");
    central->add_option("--input", central_input, "JSON: M, N, embedding, representation, pi, u, w")->required();

    std::uint64_t seed = acceptance::Options{}.seed;
    std::vector<int> only;
    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    selftest->add_option("--seed", seed, "seed for the randomized criteria");
    selftest->add_option("--only", only, "criterion ids to run")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("validation", e.what());
        return kValidation;
    }

    try {
        Caps caps;
        if (const char* env = std::getenv("ARITH_MM_CAPS")) caps = Caps::from_list(env, caps);
        if (!caps_list.empty()) caps = Caps::from_list(caps_list, caps);

        Json report;
        int status = kOk;
        if (*jac) {
            detail::require(jd >= 1, "d must be >= 1");
            report = json_io::jacobsthal_report(jd);
        } else if (*shift) {
            report = json_io::coprime_shift_report(minimal_coprime_shift(sa, sn, sd));
        } else if (*delta) {
            const auto params = bound_params_from(bD, bDelta, bc, bd, bp, beps, bprofile, bvariant);
            report = json_io::bound_report(bound_report(params, caps));
        } else if (*sigma) {
            const auto params = bound_params_from(bD, bDelta, bc, bd, bp, beps, bprofile, bvariant);
            Json elems = Json::array();
            for (const auto& s : sigma_set(params, caps)) elems.push_back(json_io::big(s));
            report = Json{{"params", json_io::bound_params(params)},
                          {"N", json_io::big(capital_n(params))},
                          {"size", json_io::big(sigma_size(params))},
                          {"elements", elems}};
        } else if (*lorbit) {
            const Json j = lo_args.load({"N", "g", "c", "point"});
            const auto amb = lo_args.ambient(caps);
            const Point a = j.contains("point") ? parse_point_json(amb, j.at("point"))
                                                : parse_point_text(amb, lo_args.point);
            const auto orb = lang_orbit(amb, a, lo_args.c);
            report = Json{{"N", amb.N}, {"g", amb.g},          {"c", lo_args.c},
                          {"point", json_io::point(a)}, {"order", amb.point_order(a)},
                          {"size", orb.size()},         {"orbit", json_io::points(orb)}};
        } else if (*closure) {
            const Json j = sc_args.load({"N", "g", "c", "points"});
            const auto amb = sc_args.ambient(caps);
            const auto S = j.contains("points") ? parse_points_json(amb, j.at("points"))
                                                : parse_points_text(amb, sc_args.points);
            const auto res = special_closure(amb, S, sc_args.c, caps);
            Json comps = Json::array();
            for (const auto& comp : res.components) comps.push_back(json_io::lang_coset(comp));
            report = Json{{"N", amb.N},
                          {"g", amb.g},
                          {"c", sc_args.c},
                          {"input_size", S.size()},
                          {"point_count", res.points.size()},
                          {"components", comps},
                          {"points", json_io::points(res.points)}};
        } else if (*keyprop) {
            const Json j = kp_args.load({"N", "g", "c", "point", "points", "delta"});
            const auto amb = kp_args.ambient(caps);
            const Point a = j.contains("point") ? parse_point_json(amb, j.at("point"))
                                                : parse_point_text(amb, kp_args.point);
            const auto V = j.contains("points") ? parse_points_json(amb, j.at("points"))
                                                : parse_points_text(amb, kp_args.points);
            BigInt cap(amb.N);
            if (j.contains("delta"))
                cap = j.at("delta").is_string() ? json_io::parse_big(j.at("delta").get<std::string>())
                                                : BigInt(json_uint(j, "delta"));
            else if (!kp_args.delta.empty())
                cap = json_io::parse_big(kp_args.delta);
            const auto wit = keyprop_witness(amb, V, a, kp_args.c, cap, caps);
            report = Json{{"N", amb.N},
                          {"g", amb.g},
                          {"c", kp_args.c},
                          {"point", json_io::point(a)},
                          {"delta", json_io::big(cap)},
                          {"found", wit.has_value()},
                          {"component", wit ? json_io::lang_coset(wit->component) : Json()},
                          {"within_delta", wit ? wit->within_delta : false}};
        } else if (*glv) {
            const Json j = load_json(gl_input);
            json_io::reject_unknown(j, {"ell", "dim", "generators", "a", "V", "C"});
            const auto ell = json_uint(j, "ell");
            const auto dim = json_uint(j, "dim");
            detail::require(ell >= 2 && ell <= 65521 && is_prime(ell), "ell must be a prime below 65536");
            detail::require(dim >= 1 && dim <= 8, "dim must be in 1..8");
            const FiniteSpace space{static_cast<std::uint32_t>(ell), static_cast<unsigned>(dim)};
            std::vector<FMatrix> gens;
            const auto& gj = json_io::field(j, "generators");
            detail::require(gj.is_array() && !gj.empty(), "generators must be a non-empty list of matrices");
            for (const auto& m : gj) gens.push_back(json_io::parse_fmatrix(space, m));
            const auto G = generate_group(gens, space.ell, space.dim, caps.group_size);
            const auto a = json_io::parse_fvector(space, json_io::field(j, "a"));
            std::vector<FVector> vbasis;
            const auto& vj = json_io::field(j, "V");
            detail::require(vj.is_array(), "V must be a list of spanning vectors");
            for (const auto& v : vj) vbasis.push_back(json_io::parse_fvector(space, v));
            std::optional<Rational> C;
            if (j.contains("C")) C = json_io::parse_rational(j.at("C"));
            const auto rep = verify_bound(G, a, span(space, vbasis), C, caps);
            report = json_io::orbit_report(G, rep);
            if (!(rep.bound_satisfied && rep.optimality_holds && rep.generated_by_orbit))
                status = kInvariant;
        } else if (*lift || *central) {
            const bool is_central = static_cast<bool>(*central);
            const Json j = load_json(is_central ? central_input : lift_input);
            SplitSemisimpleAlgebra M({1}), N({1});
            lift_inputs(j, is_central, M, N);
            const auto emb = json_io::parse_embedding(M, N, json_io::field(j, "embedding"));
            const auto rep = json_io::parse_representation(N, json_io::field(j, "representation"));
            const auto u = json_io::parse_element(N, json_io::field(j, "u"));
            const auto w = json_io::parse_element(M, json_io::field(j, "w"));
            if (!is_central) {
                const auto res = lift_idempotent(M, N, emb, rep, u, w);
                report = Json{{"v", json_io::element(res.v)},
                              {"idempotent", res.idempotent},
                              {"lower_inclusion", res.lower_inclusion},
                              {"upper_inclusion", res.upper_inclusion}};
                if (!(res.idempotent && res.lower_inclusion && res.upper_inclusion)) status = kInvariant;
            } else {
                const auto pi = json_io::parse_element(N, json_io::field(j, "pi"));
                const auto res = lift_idempotent_central(M, N, emb, rep, pi, u, w);
                report = Json{{"v", json_io::element(res.v)},
                              {"m", json_io::element(res.m)},
                              {"z", json_io::element(res.z)},
                              {"idempotent", res.idempotent},
                              {"lower_inclusion", res.lower_inclusion},
                              {"upper_inclusion", res.upper_inclusion},
                              {"uv_equals_v_mod_pi", res.uv_equals_v_mod_pi},
                              {"direct_sum_ok", res.direct_sum_ok}};
                if (!(res.idempotent && res.lower_inclusion && res.upper_inclusion && res.uv_equals_v_mod_pi &&
                      res.direct_sum_ok))
                    status = kInvariant;
            }
        } else if (*selftest) {
            acceptance::Options opts;
            opts.seed = seed;
            opts.only = only;
            opts.caps = caps;
            for (int id : only) detail::require(id >= 1 && id <= 8, "criterion ids are 1..8");
            const auto results = acceptance::run(opts, [&](const acceptance::CriterionResult& r) {
                if (format == "text") std::cout << acceptance::format_line(r) << std::endl;
            });
            Json crit = Json::array();
            bool all = true;
            for (const auto& r : results) {
                crit.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
                all = all && r.pass;
            }
            report = Json{{"seed", std::to_string(seed)}, {"all_pass", all}, {"criteria", crit}};
            if (!all) status = kInvariant;
            if (format == "text") {
                std::cout << (all ? "all criteria passed" : "some criteria FAILED") << '\n';
                if (!all) report_error("invariant", "acceptance criteria failed");
                return status;
            }
        }
        emit(report, format);
        if (status == kInvariant) report_error("invariant", "reported checks did not all hold");
        return status;
    } catch (const validation_error& e) {
        report_error("validation", e.what());
        return kValidation;
    } catch (const cap_exceeded& e) {
        report_error("cap_exceeded", e.what());
        return kCap;
    } catch (const invariant_violation& e) {
        report_error("invariant", e.what());
        return kInvariant;
    } catch (const Json::exception& e) {
        report_error("validation", e.what());
        return kValidation;
    } catch (const std::exception& e) {
        report_error("invariant", std::string("internal error: ") + e.what());
        return kInvariant;
    }
}
