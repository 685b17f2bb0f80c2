#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "padicrot/haar.hpp"
#include "padicrot/parallel.hpp"
#include "padicrot/quadform.hpp"
#include "padicrot/quaternion.hpp"
#include "padicrot/rotation.hpp"
#include "padicrot/so2.hpp"

#ifndef PADICROT_VERSION
#define PADICROT_VERSION "0.0.0"
#endif

namespace padicrot::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    unsigned prime = 7;
    int precision = kDefaultPrecision;
    std::uint64_t seed = 1;
    unsigned threads = default_threads();
    bool normalized = false;
    std::string format = "json";
    std::string manifest;
    std::optional<int> depth;
    std::optional<std::size_t> samples;
};

// ---------------------------------------------------------------------------
// Parsing helpers

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::string cur;
    int bracket = 0;
    for (char c : text) {
        if (c == '[') ++bracket;
        if (c == ']') --bracket;
        if (c == ',' && bracket == 0) {
            items.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty() || !items.empty()) items.push_back(cur);
    return items;
}

std::vector<PAdic> parse_padics(const Globals& g, const std::string& text, std::size_t expected) {
    auto items = split_list(text);
    if (expected && items.size() != expected)
        throw UsageError("expected " + std::to_string(expected) + " comma-separated values, got " +
                         std::to_string(items.size()));
    std::vector<PAdic> out;
    for (const auto& s : items) out.push_back(PAdic::parse(g.prime, s, g.precision));
    return out;
}

Quaternion parse_quaternion(const Globals& g, const std::string& text) {
    auto c = parse_padics(g, text, 4);
    return make_quaternion(g.prime, {c[0], c[1], c[2], c[3]});
}

PMatrix parse_matrix(const Globals& g, const std::string& text, std::size_t n) {
    auto c = parse_padics(g, text, n * n);
    std::vector<std::vector<PAdic>> rows(n, std::vector<PAdic>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rows[i][j] = c[i * n + j];
    return PMatrix::from_rows(rows);
}

Rational parse_rational_arg(const std::string& text) {
    try {
        return parse_rational(text);
    } catch (const DomainError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("not a rational number: '" + text + "'");
    }
}

json load_json_arg(const std::string& text) {
    std::string body = text;
    if (!text.empty() && text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw UsageError("cannot read " + text.substr(1));
        std::stringstream ss;
        ss << in.rdbuf();
        body = ss.str();
    }
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed JSON: ") + e.what());
    }
}

Rational json_rational(const json& v) {
    if (v.is_string()) return parse_rational_arg(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    throw UsageError("expected a rational as a string or integer");
}

MatrixCylinder parse_matrix_cylinder(const Globals& g, const json& j, int n) {
    int depth = j.value("depth", 1);
    if (j.contains("constraints")) {
        std::vector<EntryConstraint> cs;
        for (const auto& c : j.at("constraints")) {
            if (!c.is_array() || c.size() != 3) throw UsageError("constraints are [row, col, residue] triples");
            cs.push_back({c[0].get<int>(), c[1].get<int>(), c[2].get<std::uint32_t>()});
        }
        MatrixCylinder f = entry_cylinder(g.prime, n, depth, cs);
        if (j.contains("weight")) f.weight = json_rational(j.at("weight"));
        return f;
    }
    MatrixCylinder f;
    f.p = g.prime;
    f.n = n;
    f.depth = depth;
    if (j.contains("fallback")) f.fallback = json_rational(j.at("fallback"));
    if (j.contains("values"))
        for (const auto& [key, v] : j.at("values").items())
            f.values[parse_residue_key(key, n, upow(g.prime, depth))] = json_rational(v);
    return f;
}

So2Cylinder parse_so2_cylinder(const Globals& g, const json& j, const Rational& kappa) {
    So2Cylinder f;
    f.p = g.prime;
    f.kappa = kappa;
    f.depth = j.value("depth", 1);
    f.annulus_min = j.value("annulus_min", 0);
    f.annulus_max = j.value("annulus_max", 0);
    if (j.contains("tail")) {
        if (j.at("tail").is_null()) f.tail.reset();
        else f.tail = json_rational(j.at("tail"));
    }
    if (j.contains("inner")) f.inner = json_rational(j.at("inner"));
    if (j.contains("values"))
        for (const auto& [key, v] : j.at("values").items()) {
            std::string k = key;
            std::replace(k.begin(), k.end(), ':', ',');
            auto parts = split_list(k);
            if (parts.size() != 2) throw UsageError("so2 cylinder keys are \"m:r\"");
            f.values[{std::stoi(parts[0]), std::stoull(parts[1])}] = json_rational(v);
        }
    return f;
}

std::optional<PAdic> parse_param(const Globals& g, const std::string& text) {
    if (text == "inf" || text == "infinity") return std::nullopt;
    return PAdic::parse(g.prime, text, g.precision);
}

// ---------------------------------------------------------------------------
// Output helpers

std::string str(const PAdic& x) {
    return x.to_string();
}

std::string str(const Rational& q) {
    return rational_to_string(q);
}

json matrix_json(const PMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(str(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json quaternion_json(const Quaternion& x) {
    json q = json::array();
    for (const auto& c : x.q) q.push_back(str(c));
    return {{"prime", x.p}, {"v", str(x.v)}, {"q", q}};
}

json estimate_json(const Estimate& e, int depth) {
    return {{"estimate", e.value}, {"stderr", e.stderr_}, {"samples", e.samples}, {"seed", e.seed}, {"depth", depth}};
}

std::string csv_cell(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    return s;
}

void emit(const Globals& g, const json& result, std::ostream& out) {
    if (g.format == "csv") {
        std::string header, row;
        for (auto it = result.begin(); it != result.end(); ++it) {
            header += (header.empty() ? "" : ",") + it.key();
            row += (it == result.begin() ? "" : ",") + csv_cell(it.value());
        }
        out << header << "\n" << row << "\n";
        return;
    }
    out << result.dump() << "\n";
}

// ---------------------------------------------------------------------------
// Command table

struct PadicOptions {
    std::string x;
    int k = 0;
};

struct QuadformOptions {
    int dim = 2, index = 0, depth = 0;
    std::string x;
};

struct So2Options {
    std::string kappa = "1", a, b, alpha, cylinder, beta;
    std::size_t count = 10;
};

struct QuatOptions {
    std::string q, r;
    std::size_t count = 10;
    long long eps = 0;
};

struct RotationOptions {
    std::string q, xi, rho, m, w;
};

struct HaarOptions {
    std::string group = "so3", mode = "exact", cylinder, kappa = "1", linear;
    int depth = 1, dim = 2;
    std::size_t samples = 100000, translations = 10, count = 10;
};

struct Context {
    Globals g;
    PadicOptions padic;
    QuadformOptions qf;
    So2Options so2;
    QuatOptions quat;
    RotationOptions rot;
    HaarOptions haar;
    std::function<json()> action;
};

void add_padic(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("padic", "p-adic numbers: eval, sqrt, class, measure");
    cmd->require_subcommand(1);
    auto* o = &ctx.padic;

    auto* eval = cmd->add_subcommand("eval", "Parse a p-adic number and show its expansion");
    eval->add_option("--x", o->x, "rational, O(p^a) or compact v:[digits]@p")->required();
    eval->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            PAdic v = PAdic::parse(ctx.g.prime, o->x, ctx.g.precision);
            json r = {{"value", str(v)}, {"compact", v.to_compact()}, {"expansion", v.to_expansion()}};
            r["valuation"] = v.is_zero() ? json(nullptr) : json(v.valuation());
            r["abs"] = v.is_zero() ? json("0") : json(str(v.abs()));
            return r;
        };
    });

    auto* sq = cmd->add_subcommand("sqrt", "Hensel square root");
    sq->add_option("--x", o->x)->required();
    sq->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            PAdic r = hensel_sqrt(PAdic::parse(ctx.g.prime, o->x, ctx.g.precision));
            return json{{"value", str(r)}, {"compact", r.to_compact()}};
        };
    });

    auto* cls = cmd->add_subcommand("class", "Square class in Q_p^x / (Q_p^x)^2");
    cls->add_option("--x", o->x)->required();
    cls->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            SquareClass c = square_class(PAdic::parse(ctx.g.prime, o->x, ctx.g.precision));
            return json{{"class", square_class_name(c)}, {"rep", c.rep}};
        };
    });

    auto* meas = cmd->add_subcommand("measure", "Haar measure of the ball |x - c| <= p^k");
    meas->add_option("--k", o->k)->required();
    meas->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            return json{{"value", str(measure_ball(Ball{PAdic::zero(ctx.g.prime, ctx.g.precision), o->k}))}};
        };
    });
}

void add_quadform(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("quadform", "Definite quadratic forms: list, eval, check");
    cmd->require_subcommand(1);
    auto* o = &ctx.qf;

    auto* list = cmd->add_subcommand("list", "List the definite forms of a dimension");
    list->add_option("--dim", o->dim)->required();
    list->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            json forms = json::array();
            for (const auto& q : catalog(ctx.g.prime, o->dim, ctx.g.precision)) {
                json coeffs = json::array();
                for (const auto& c : q.coeffs) coeffs.push_back(str(c));
                forms.push_back({{"name", q.name}, {"prime", q.p}, {"dim", q.dim()}, {"coeffs", coeffs}});
            }
            json r = {{"forms", forms}};
            if (o->dim == 2) {
                json ks = json::array();
                for (const auto& k : kappa_catalog(ctx.g.prime)) ks.push_back(str(k));
                r["kappas"] = ks;
            }
            return r;
        };
    });

    auto* ev = cmd->add_subcommand("eval", "Evaluate a catalog form");
    ev->add_option("--dim", o->dim)->required();
    ev->add_option("--index", o->index, "position in the catalog");
    ev->add_option("--x", o->x)->required();
    ev->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            auto forms = catalog(ctx.g.prime, o->dim, ctx.g.precision);
            if (o->index < 0 || o->index >= static_cast<int>(forms.size())) throw UsageError("form index out of range");
            return json{{"value", str(evaluate(forms[static_cast<std::size_t>(o->index)], parse_padics(ctx.g, o->x, 0)))}};
        };
    });

    auto* chk = cmd->add_subcommand("check", "Search for isotropic vectors modulo p^depth");
    chk->add_option("--dim", o->dim)->required();
    chk->add_option("--index", o->index);
    chk->add_option("--depth", o->depth);
    chk->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            auto forms = catalog(ctx.g.prime, o->dim, ctx.g.precision);
            if (o->index < 0 || o->index >= static_cast<int>(forms.size())) throw UsageError("form index out of range");
            int k = o->depth > 0 ? o->depth : default_anisotropy_depth(ctx.g.prime);
            auto r = anisotropy_witness(forms[static_cast<std::size_t>(o->index)], k);
            return json{{"anisotropic", r.confirmed}, {"depth", k}, {"counterexample", r.counterexample}};
        };
    });
}

void add_so2(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("so2", "SO(2)_kappa: compose, matrix, density, mass, integrate, sample");
    cmd->require_subcommand(1);
    auto* o = &ctx.so2;
    auto kappa_padic = [&ctx, o] { return PAdic::from_rational(ctx.g.prime, parse_rational_arg(o->kappa), ctx.g.precision); };
    auto with_kappa = [o](CLI::App* c) { c->add_option("--kappa", o->kappa, "kappa as a rational"); };

    auto* comp = cmd->add_subcommand("compose", "Group law on parameters (inf for -I)");
    with_kappa(comp);
    comp->add_option("--a", o->a)->required();
    comp->add_option("--b", o->b)->required();
    comp->callback([&ctx, o, kappa_padic] {
        ctx.action = [&ctx, o, kappa_padic] {
            PAdic k = kappa_padic();
            Rotation2 r = compose(make_rotation2(k, parse_param(ctx.g, o->a)), make_rotation2(k, parse_param(ctx.g, o->b)));
            return json{{"value", r.is_infinite() ? std::string("inf") : str(*r.param)}};
        };
    });

    auto* mat = cmd->add_subcommand("matrix", "2x2 matrix of a parameter");
    with_kappa(mat);
    mat->add_option("--alpha", o->alpha)->required();
    mat->callback([&ctx, o, kappa_padic] {
        ctx.action = [&ctx, o, kappa_padic] {
            return json{{"matrix", matrix_json(so2_matrix(make_rotation2(kappa_padic(), parse_param(ctx.g, o->alpha))))}};
        };
    });

    auto* den = cmd->add_subcommand("density", "Haar density 1/|1 + kappa alpha^2|");
    with_kappa(den);
    den->add_option("--alpha", o->alpha)->required();
    den->callback([&ctx, o, kappa_padic] {
        ctx.action = [&ctx, o, kappa_padic] {
            return json{{"value", str(haar_density(make_rotation2(kappa_padic(), parse_param(ctx.g, o->alpha))))}};
        };
    });

    auto* mass = cmd->add_subcommand("mass", "Total Haar mass");
    with_kappa(mass);
    mass->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            Rational m = so2_total_mass(ctx.g.prime, parse_rational_arg(o->kappa));
            return json{{"value", str(ctx.g.normalized ? Rational(1) : m)}};
        };
    });

    auto* integ = cmd->add_subcommand("integrate", "Exact integral of a cylinder function");
    with_kappa(integ);
    integ->add_option("--cylinder", o->cylinder, "JSON text or @file")->required();
    integ->add_option("--beta", o->beta, "left-translate by R(beta) first (inf for -I)");
    integ->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            Rational k = parse_rational_arg(o->kappa);
            So2Integrator in(ctx.g.prime, k);
            So2Cylinder f = parse_so2_cylinder(ctx.g, load_json_arg(o->cylinder), k);
            std::optional<So2Translation> t;
            if (!o->beta.empty()) {
                t = So2Translation{};
                if (o->beta != "inf" && o->beta != "infinity") t->beta = parse_rational_arg(o->beta);
            }
            Rational v = in.integrate(f, t);
            if (ctx.g.normalized) v /= in.total_mass();
            return json{{"value", str(v)}, {"depth", f.depth}};
        };
    });

    auto* samp = cmd->add_subcommand("sample", "Draw Haar-distributed parameters");
    with_kappa(samp);
    samp->add_option("--count", o->count);
    samp->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            auto rng = make_rng(ctx.g.seed, 0);
            Rational k = parse_rational_arg(o->kappa);
            json out = json::array();
            for (std::size_t i = 0; i < o->count; ++i) {
                Rotation2 r = sample_haar(ctx.g.prime, k, rng, ctx.g.precision);
                out.push_back(r.is_infinite() ? std::string("inf") : str(*r.param));
            }
            return json{{"samples", out}, {"seed", ctx.g.seed}};
        };
    });
}

void add_quat(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("quat", "Quaternions: mul, conj, nrd, inv, matrix, jacdet, sample");
    cmd->require_subcommand(1);
    auto* o = &ctx.quat;

    auto unary = [&](const char* name, const char* help, std::function<json(const Quaternion&)> fn) {
        auto* c = cmd->add_subcommand(name, help);
        c->add_option("--q", o->q, "four comma-separated coordinates")->required();
        c->callback([&ctx, o, fn] { ctx.action = [&ctx, o, fn] { return fn(parse_quaternion(ctx.g, o->q)); }; });
    };

    auto* mul = cmd->add_subcommand("mul", "Product q*r");
    mul->add_option("--q", o->q)->required();
    mul->add_option("--r", o->r)->required();
    mul->callback([&ctx, o] {
        ctx.action = [&ctx, o] { return quaternion_json(quat_mul(parse_quaternion(ctx.g, o->q), parse_quaternion(ctx.g, o->r))); };
    });
    unary("conj", "Conjugate", [](const Quaternion& x) { return quaternion_json(conj(x)); });
    unary("nrd", "Reduced norm", [](const Quaternion& x) { return json{{"value", str(nrd(x))}}; });
    unary("inv", "Inverse", [](const Quaternion& x) { return quaternion_json(quat_inv(x)); });
    unary("matrix", "2x2 representation over the quadratic extension", [](const Quaternion& x) {
        QuadExtMatrix m = matrix_rep(x);
        json rows = json::array();
        for (int i = 0; i < 2; ++i) {
            json row = json::array();
            for (int j = 0; j < 2; ++j) {
                const auto& e = m[static_cast<std::size_t>(2 * i + j)];
                row.push_back({str(e.a), str(e.b)});
            }
            rows.push_back(row);
        }
        return json{{"matrix", rows}, {"d", str(m[0].d)}};
    });
    unary("jacdet", "Jacobian of left multiplication and its determinant", [](const Quaternion& x) {
        return json{{"matrix", matrix_json(left_translation_jacobian(x))}, {"value", str(jac_det(x))}};
    });

    auto* samp = cmd->add_subcommand("sample", "Draw from S, or from S(eps) with --eps");
    samp->add_option("--count", o->count);
    samp->add_option("--eps", o->eps, "square-class representative");
    samp->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            auto rng = make_rng(ctx.g.seed, 0);
            json out = json::array();
            for (std::size_t i = 0; i < o->count; ++i) {
                Quaternion x = o->eps ? sphere_eps(SquareClass{ctx.g.prime, o->eps}, rng, ctx.g.precision)
                                   : sample_sphere(ctx.g.prime, rng, ctx.g.precision);
                out.push_back(quaternion_json(x));
            }
            return json{{"samples", out}, {"seed", ctx.g.seed}};
        };
    });
}

json report_json(const OrthogonalityReport& r) {
    auto val = [](int v) { return v == kInfiniteValuation ? json(nullptr) : json(v); };
    return {{"form_deviation", val(r.form_deviation)},
            {"det_deviation", val(r.det_deviation)},
            {"vanishes", r.vanishes},
            {"precision", r.precision}};
}

void add_rotations(CLI::App& app, Context& ctx) {
    auto* o = &ctx.rot;

    auto* r3 = app.add_subcommand("rot3", "SO(3) from quaternions: from-quat, check, act");
    r3->require_subcommand(1);
    auto* fq = r3->add_subcommand("from-quat", "kappa3 of a quaternion");
    fq->add_option("--q", o->q)->required();
    fq->callback([&ctx, o] {
        ctx.action = [&ctx, o] { return json{{"matrix", matrix_json(kappa3(parse_quaternion(ctx.g, o->q)).m)}}; };
    });
    auto* c3 = r3->add_subcommand("check", "Deviation of M^T A M - A and det M - 1");
    c3->add_option("--m", o->m, "nine row-major entries")->required();
    c3->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            return report_json(verify_special_orthogonal(parse_matrix(ctx.g, o->m, 3), rotation3_form(ctx.g.prime, ctx.g.precision)));
        };
    });
    auto* a3 = r3->add_subcommand("act", "Apply kappa3(q) to a vector");
    a3->add_option("--q", o->q)->required();
    a3->add_option("--w", o->w, "three coordinates")->required();
    a3->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            json out = json::array();
            for (const auto& c : act(kappa3(parse_quaternion(ctx.g, o->q)).m, parse_padics(ctx.g, o->w, 3))) out.push_back(str(c));
            return json{{"value", out}};
        };
    });

    auto* r4 = app.add_subcommand("rot4", "SO(4) from quaternion pairs: from-pair, check");
    r4->require_subcommand(1);
    auto* fp = r4->add_subcommand("from-pair", "kappa4 of a pair");
    fp->add_option("--xi", o->xi)->required();
    fp->add_option("--rho", o->rho)->required();
    fp->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            auto pair = make_quaternion_pair(parse_quaternion(ctx.g, o->xi), parse_quaternion(ctx.g, o->rho));
            return json{{"matrix", matrix_json(kappa4(pair).m)}};
        };
    });
    auto* c4 = r4->add_subcommand("check", "Deviation of M^T A M - A and det M - 1");
    c4->add_option("--m", o->m, "sixteen row-major entries")->required();
    c4->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            return report_json(verify_special_orthogonal(parse_matrix(ctx.g, o->m, 4), rotation4_form(ctx.g.prime, ctx.g.precision)));
        };
    });
}

std::vector<Quaternion> random_quaternions(const Globals& g, std::size_t n) {
    auto rng = make_rng(g.seed, 1);
    std::vector<Quaternion> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_sphere(g.prime, rng, g.precision));
    return out;
}

std::vector<QuaternionPair> random_pairs(const Globals& g, std::size_t n) {
    auto rng = make_rng(g.seed, 1);
    std::vector<QuaternionPair> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(pair_sample(g.prime, rng, g.precision));
    return out;
}

json rationals_json(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(str(x));
    return out;
}

void add_haar(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("haar", "Haar measures: mass, integrate-so3, integrate-so4, invariance, covf");
    cmd->require_subcommand(1);
    auto* o = &ctx.haar;

    auto* mass = cmd->add_subcommand("mass", "Raw Haar mass of so2, so3 or so4");
    mass->add_option("--group", o->group)->required()->check(CLI::IsMember({"so2", "so3", "so4"}));
    mass->add_option("--kappa", o->kappa);
    mass->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            Rational m = haar_mass(o->group, ctx.g.prime, parse_rational_arg(o->kappa));
            return json{{"value", str(ctx.g.normalized ? Rational(1) : m)}};
        };
    });

    auto integrate_cmd = [&](const char* name, int n) {
        auto* c = cmd->add_subcommand(name, n == 3 ? "Integrate a cylinder function over SO(3)"
                                                   : "Integrate a cylinder function over SO(4)");
        c->add_option("--mode", o->mode)->check(CLI::IsMember({"exact", "mc"}));
        c->add_option("--depth", o->depth, "overrides the cylinder depth");
        c->add_option("--samples", o->samples);
        c->add_option("--cylinder", o->cylinder, "JSON text or @file")->required();
        c->callback([&ctx, o, c, n] {
            if (c->count("--depth")) ctx.g.depth = o->depth;
            if (o->mode == "mc") ctx.g.samples = o->samples;
            ctx.action = [&ctx, o, c, n] {
                json j = load_json_arg(o->cylinder);
                if (c->count("--depth")) j["depth"] = o->depth;
                MatrixCylinder f = parse_matrix_cylinder(ctx.g, j, n);
                ctx.g.depth = f.depth;
                IntegrationParams ip;
                ip.mode = o->mode == "mc" ? Mode::MonteCarlo : Mode::Exact;
                ip.depth = f.depth;
                ip.samples = o->samples;
                ip.seed = ctx.g.seed;
                ip.threads = ctx.g.threads;
                ip.normalized = ctx.g.normalized;
                IntegrationResult r = n == 3 ? integrate_so3(f, ip) : integrate_so4(f, ip);
                if (r.value) return json{{"value", str(*r.value)}, {"depth", r.depth}};
                json out = estimate_json(*r.estimate, r.depth);
                if (r.validated_by_invariance) out["validated_by_invariance"] = true;
                return out;
            };
        });
    };
    integrate_cmd("integrate-so3", 3);
    integrate_cmd("integrate-so4", 4);

    auto* inv = cmd->add_subcommand("invariance", "Compare an integral with those of random left translates");
    inv->add_option("--group", o->group)->required()->check(CLI::IsMember({"so2", "so3", "so4"}));
    inv->add_option("--mode", o->mode)->check(CLI::IsMember({"exact", "mc"}));
    inv->add_option("--cylinder", o->cylinder, "JSON text or @file")->required();
    inv->add_option("--kappa", o->kappa);
    inv->add_option("--translations", o->translations);
    inv->add_option("--samples", o->samples);
    inv->callback([&ctx, o] {
        if (o->mode == "mc") ctx.g.samples = o->samples;
        ctx.action = [&ctx, o] {
            json j = load_json_arg(o->cylinder);
            if (o->group == "so2") {
                if (o->mode != "exact") throw UsageError("so2 invariance is exact only");
                Rational k = parse_rational_arg(o->kappa);
                So2Integrator in(ctx.g.prime, k);
                auto rng = make_rng(ctx.g.seed, 1);
                std::vector<So2Translation> ts;
                for (std::size_t i = 0; i < o->translations; ++i) {
                    Rotation2 r = sample_haar(ctx.g.prime, k, rng, 12);
                    ts.push_back(r.is_infinite() ? So2Translation{} : So2Translation{r.param->to_rational()});
                }
                auto rep = so2_invariance(in, parse_so2_cylinder(ctx.g, j, k), ts);
                return json{{"base", str(rep.base)}, {"deviations", rationals_json(rep.deviations)}, {"invariant", rep.invariant}};
            }
            int n = o->group == "so3" ? 3 : 4;
            MatrixCylinder f = parse_matrix_cylinder(ctx.g, j, n);
            if (o->mode == "mc") {
                if (n != 3) throw UsageError("Monte Carlo invariance is available for so3");
                auto rep = so3_mc_invariance(f, random_quaternions(ctx.g, o->translations), o->samples, ctx.g.seed, ctx.g.threads);
                json est = json::array();
                for (const auto& e : rep.estimates) est.push_back(estimate_json(e, f.depth));
                return json{{"exact", str(rep.exact)}, {"estimates", est}, {"sigmas", rep.sigmas}, {"max_sigma", rep.max_sigma}};
            }
            InvarianceReport rep = n == 3 ? so3_invariance(f, random_quaternions(ctx.g, o->translations), ctx.g.threads)
                                          : so4_invariance(f, random_pairs(ctx.g, o->translations), ctx.g.threads);
            return json{{"base", str(rep.base)}, {"deviations", rationals_json(rep.deviations)}, {"invariant", rep.invariant}};
        };
    });

    auto* covf = cmd->add_subcommand("covf", "Change-of-variables harness on random or given maps");
    covf->add_option("--dim", o->dim);
    covf->add_option("--depth", o->depth);
    covf->add_option("--count", o->count, "number of random unit-Jacobian maps");
    covf->add_option("--linear", o->linear, "row-major integer matrix instead of random maps");
    covf->callback([&ctx, o] {
        ctx.g.depth = o->depth;
        ctx.action = [&ctx, o] {
            auto rng = make_rng(ctx.g.seed, 2);
            std::vector<PolyMap> maps;
            if (!o->linear.empty()) {
                auto items = split_list(o->linear);
                std::size_t n = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(items.size()))));
                if (n * n != items.size()) throw UsageError("--linear needs a square number of entries");
                std::vector<std::vector<long long>> a(n, std::vector<long long>(n));
                for (std::size_t i = 0; i < items.size(); ++i) a[i / n][i % n] = std::stoll(items[i]);
                maps.push_back(linear_map(a));
            } else {
                for (std::size_t i = 0; i < o->count; ++i) maps.push_back(random_unit_jacobian_map(ctx.g.prime, o->dim, rng));
            }
            json reports = json::array();
            bool all = true;
            for (const auto& m : maps) {
                CylinderRegion u{std::vector<std::uint64_t>(static_cast<std::size_t>(m.n), 0), 0};
                auto f = random_residue_function(ctx.g.prime, m.n, 1, rng);
                CovReport r = change_of_variables_check(ctx.g.prime, m, u, f, o->depth);
                all = all && r.equal;
                reports.push_back({{"lhs", str(r.lhs)}, {"rhs", str(r.rhs)}, {"jacobian_valuation", r.jacobian_valuation},
                                   {"equal", r.equal}});
            }
            return json{{"reports", reports}, {"all_equal", all}, {"depth", o->depth}};
        };
    });
}

void write_manifest(const Context& ctx, const std::vector<std::string>& args, double seconds) {
    std::vector<std::string> replay_args;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--manifest") {
            ++i;
            continue;
        }
        if (args[i].rfind("--manifest=", 0) == 0) continue;
        replay_args.push_back(args[i]);
    }
    json m = {{"argv", replay_args},
              {"prime", ctx.g.prime},
              {"precision", ctx.g.precision},
              {"seed", ctx.g.seed},
              {"threads", ctx.g.threads},
              {"version", PADICROT_VERSION},
              {"wall_clock_seconds", seconds}};
    m["depth"] = ctx.g.depth ? json(*ctx.g.depth) : json(nullptr);
    m["samples"] = ctx.g.samples ? json(*ctx.g.samples) : json(nullptr);
    std::ofstream out(ctx.g.manifest);
    if (!out) throw UsageError("cannot write manifest " + ctx.g.manifest);
    out << m.dump(2) << "\n";
}

void emit_error(std::ostream& out, const std::string& kind, const std::string& message) {
    out << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (!args.empty() && args[0] == "replay") {
        if (args.size() != 2) {
            err << "usage: padicrot replay <manifest.json>\n";
            emit_error(out, "UsageError", "replay takes exactly one manifest path");
            return 2;
        }
        std::ifstream in(args[1]);
        if (!in) {
            emit_error(out, "UsageError", "cannot read manifest " + args[1]);
            return 2;
        }
        json m;
        try {
            m = json::parse(in);
            return dispatch(m.at("argv").get<std::vector<std::string>>(), out, err);
        } catch (const json::exception& e) {
            emit_error(out, "UsageError", std::string("malformed manifest: ") + e.what());
            return 2;
        }
    }

    Context ctx;
    CLI::App app{"Haar measures on p-adic rotation groups", "padicrot"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", PADICROT_VERSION);
    app.add_option("--prime,-p", ctx.g.prime, "the prime p")->check(CLI::PositiveNumber);
    app.add_option("--precision,-N", ctx.g.precision, "p-adic digits carried");
    app.add_option("--seed", ctx.g.seed, "master seed for sampling");
    app.add_option("--threads", ctx.g.threads, "worker threads (default: logical cores)");
    app.add_flag("--normalized", ctx.g.normalized, "divide by the total mass");
    app.add_option("--format", ctx.g.format)->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--manifest", ctx.g.manifest, "write a reproducibility manifest to this path");
    app.footer("Run 'padicrot replay <manifest.json>' to reproduce a recorded run.");

    add_padic(app, ctx);
    add_quadform(app, ctx);
    add_so2(app, ctx);
    add_quat(app, ctx);
    add_rotations(app, ctx);
    add_haar(app, ctx);

    auto start = std::chrono::steady_clock::now();
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (!is_prime(ctx.g.prime)) throw UsageError("--prime must be prime");
        if (ctx.g.threads == 0) ctx.g.threads = 1;
        if (!ctx.action) throw UsageError("no command selected");
        json result = ctx.action();
        emit(ctx.g, result, out);
        if (!ctx.g.manifest.empty())
            write_manifest(ctx, args, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        return 0;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << PADICROT_VERSION << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        emit_error(out, "UsageError", e.what());
        return 2;
    } catch (const UsageError& e) {
        err << e.what() << "\n";
        emit_error(out, "UsageError", e.what());
        return 2;
    } catch (const DomainError& e) {
        emit_error(out, e.kind(), e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error(out, "InternalError", e.what());
        return 1;
    }
}

}  // namespace padicrot::cli
