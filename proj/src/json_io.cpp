#include <lck/json_io.hpp>

#include <fstream>
#include <set>

namespace lck {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw ParseError(where + ": " + what);
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> valid)
{
    if (!j.is_object()) fail(where, "expected an object");
    const std::set<std::string> ok(valid.begin(), valid.end());
    for (const auto& [k, v] : j.items()) {
        if (ok.count(k)) continue;
        std::string list;
        for (const auto& s : ok) list += (list.empty() ? "" : ", ") + s;
        fail(where, "unknown key '" + k + "' (valid keys: " + list + ")");
    }
}

const json& field(const json& j, const char* key, const std::string& where)
{
    auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing key '") + key + "'");
    return *it;
}

int int_field(const json& j, const char* key, const std::string& where)
{
    const json& v = field(j, key, where);
    if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
    return v.get<int>();
}

const char* op_name(Op op)
{
    switch (op) {
    case Op::constant: return "const";
    case Op::var: return "var";
    case Op::conj_var: return "conj_var";
    case Op::add: return "add";
    case Op::sub: return "sub";
    case Op::mul: return "mul";
    case Op::div: return "div";
    case Op::int_pow: return "pow";
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::implicit_t: return "implicit_t";
    }
    return "?";
}

} // namespace

Complex complex_from_json(const json& j, const std::string& where)
{
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    fail(where, "expected a number or an [re, im] pair");
}

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

// --- expressions -----------------------------------------------------------

json to_json(const Expression& e)
{
    json j{{"op", op_name(e.op())}};
    switch (e.op()) {
    case Op::constant: j["value"] = complex_to_json(e.value()); return j;
    case Op::var:
    case Op::conj_var: j["index"] = e.index(); return j;
    case Op::int_pow: j["value"] = e.index(); break;
    case Op::implicit_t: j["weights"] = e.implicit_spec().weights; break;
    default: break;
    }
    json args = json::array();
    for (const auto& a : e.args()) args.push_back(to_json(a));
    j["args"] = std::move(args);
    return j;
}

Expression expression_from_json(const json& j, const std::string& where)
{
    reject_unknown(j, where, {"op", "args", "value", "index", "weights"});
    const json& opj = field(j, "op", where);
    if (!opj.is_string()) fail(where + ".op", "expected a string");
    const std::string op = opj.get<std::string>();

    std::vector<Expression> args;
    if (auto it = j.find("args"); it != j.end()) {
        if (!it->is_array()) fail(where + ".args", "expected an array");
        for (std::size_t k = 0; k < it->size(); ++k) {
            args.push_back(expression_from_json((*it)[k], where + ".args[" + std::to_string(k) + "]"));
        }
    }
    const auto arity = [&](std::size_t n) {
        if (args.size() != n) fail(where, "'" + op + "' takes " + std::to_string(n) + " argument(s)");
    };

    if (op == "const") {
        arity(0);
        return Expression::constant(complex_from_json(field(j, "value", where), where + ".value"));
    }
    if (op == "var" || op == "conj_var") {
        arity(0);
        const int i = int_field(j, "index", where);
        if (i < 0 || i >= max_dimension) fail(where + ".index", "variable index out of range");
        return op == "var" ? Expression::var(i) : Expression::conj_var(i);
    }
    if (op == "add") { arity(2); return args[0] + args[1]; }
    if (op == "sub") { arity(2); return args[0] - args[1]; }
    if (op == "mul") { arity(2); return args[0] * args[1]; }
    if (op == "div") { arity(2); return args[0] / args[1]; }
    if (op == "exp") { arity(1); return exp(args[0]); }
    if (op == "log") { arity(1); return log(args[0]); }
    if (op == "pow") {
        arity(1);
        return pow(args[0], int_field(j, "value", where));
    }
    if (op == "implicit_t") {
        const json& w = field(j, "weights", where);
        if (!w.is_array()) fail(where + ".weights", "expected an array of numbers");
        ImplicitTSpec spec;
        for (const auto& x : w) {
            if (!x.is_number()) fail(where + ".weights", "expected numbers");
            spec.weights.push_back(x.get<double>());
        }
        try {
            if (args.empty()) return Expression::implicit_t(spec);
            const std::size_t n = spec.weights.size();
            arity(2 * n);
            return Expression::implicit_t(spec, {args.begin(), args.begin() + static_cast<long>(n)},
                                          {args.begin() + static_cast<long>(n), args.end()});
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            fail(where, e.what());
        }
    }
    fail(where + ".op", "unknown op '" + op +
                            "' (valid: const, var, conj_var, add, sub, mul, div, pow, exp, log, implicit_t)");
}

// --- forms -----------------------------------------------------------------

json to_json(const ExteriorForm& a)
{
    json terms = json::array();
    for (const auto& [idx, c] : a.terms()) terms.push_back({{"index", idx.ids()}, {"coeff", to_json(c)}});
    return {{"dim", a.dim()}, {"degree", a.degree()}, {"terms", std::move(terms)}};
}

ExteriorForm form_from_json(const json& j, const std::string& where)
{
    reject_unknown(j, where, {"dim", "degree", "terms"});
    const int dim = int_field(j, "dim", where);
    const int degree = int_field(j, "degree", where);
    const json& terms = field(j, "terms", where);
    if (!terms.is_array()) fail(where + ".terms", "expected an array");
    try {
        ExteriorForm out(dim, degree);
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const std::string w = where + ".terms[" + std::to_string(k) + "]";
            reject_unknown(terms[k], w, {"index", "coeff"});
            const json& idx = field(terms[k], "index", w);
            if (!idx.is_array()) fail(w + ".index", "expected an array of basis ids");
            std::vector<int> ids;
            for (const auto& x : idx) {
                if (!x.is_number_integer()) fail(w + ".index", "expected integers");
                ids.push_back(x.get<int>());
            }
            if (static_cast<int>(ids.size()) != degree) fail(w + ".index", "length differs from degree");
            const MultiIndex mi = MultiIndex::from_ids(ids);
            const Expression c = expression_from_json(field(terms[k], "coeff", w), w + ".coeff");
            out = out + ExteriorForm(dim, degree, {{mi, c}});
        }
        return out;
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(where, e.what());
    }
}

// --- maps and matrices -----------------------------------------------------

json to_json(const PolyAutomorphism& g)
{
    json comps = json::array();
    for (const auto& p : g.components()) {
        json terms = json::array();
        for (const auto& [m, c] : p.terms()) {
            terms.push_back({{"monomial", m}, {"coeff", complex_to_json(c.to_complex())}});
        }
        comps.push_back(std::move(terms));
    }
    return {{"dim", g.dim()}, {"components", std::move(comps)}};
}

PolyAutomorphism map_from_json(const json& j, const std::string& where)
{
    reject_unknown(j, where, {"dim", "components"});
    const int dim = int_field(j, "dim", where);
    if (dim < 1 || dim > max_dimension) fail(where + ".dim", "must be in [1, 16]");
    const json& comps = field(j, "components", where);
    if (!comps.is_array() || comps.size() != static_cast<std::size_t>(dim)) {
        fail(where + ".components", "expected " + std::to_string(dim) + " components");
    }
    try {
        std::vector<Polynomial> polys;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string wi = where + ".components[" + std::to_string(i) + "]";
            if (!comps[i].is_array()) fail(wi, "expected an array of terms");
            Polynomial p(dim);
            for (std::size_t k = 0; k < comps[i].size(); ++k) {
                const std::string w = wi + "[" + std::to_string(k) + "]";
                reject_unknown(comps[i][k], w, {"monomial", "coeff"});
                const json& mj = field(comps[i][k], "monomial", w);
                if (!mj.is_array() || mj.size() != static_cast<std::size_t>(dim)) {
                    fail(w + ".monomial", "expected " + std::to_string(dim) + " exponents");
                }
                Monomial m;
                for (const auto& x : mj) {
                    if (!x.is_number_integer()) fail(w + ".monomial", "expected integers");
                    m.push_back(x.get<int>());
                }
                const Complex c = complex_from_json(field(comps[i][k], "coeff", w), w + ".coeff");
                p = p + Polynomial(dim, {{m, ExactComplex::from(c)}});
            }
            polys.push_back(std::move(p));
        }
        return PolyAutomorphism(std::move(polys));
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(where, e.what());
    }
}

json matrix_to_json(const Eigen::MatrixXcd& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j, const std::string& where)
{
    if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    if (n > max_dimension) fail(where, "at most 16 rows supported");
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        const std::string w = where + "[" + std::to_string(i) + "]";
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            fail(w, "expected a row of " + std::to_string(n) + " entries (square matrix)");
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], w + "[" + std::to_string(k) + "]");
        }
    }
    return m;
}

PolyAutomorphism map_or_matrix_from_json(const json& j, const std::string& where)
{
    if (j.is_array()) {
        try {
            return PolyAutomorphism::linear(matrix_from_json(j, where));
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            fail(where, e.what());
        }
    }
    return map_from_json(j, where);
}

// --- entries ---------------------------------------------------------------

CatalogEntry entry_from_json(const json& j)
{
    const std::string where = "entry";
    reject_unknown(j, where, {"name", "dim", "forms", "invariant_forms", "potential", "group", "tolerance"});
    const int dim = int_field(j, "dim", where);
    if (dim < 2 || dim > max_dimension) fail(where + ".dim", "must be in [2, 16]");

    std::map<std::string, ExteriorForm> forms;
    if (auto it = j.find("forms"); it != j.end()) {
        if (!it->is_object()) fail(where + ".forms", "expected an object of named forms");
        for (const auto& [k, v] : it->items()) {
            ExteriorForm f = form_from_json(v, where + ".forms." + k);
            if (f.dim() != dim) fail(where + ".forms." + k, "dimension differs from entry dim");
            forms.emplace(k, std::move(f));
        }
    }
    std::vector<std::string> invariant;
    if (auto it = j.find("invariant_forms"); it != j.end()) {
        if (!it->is_array()) fail(where + ".invariant_forms", "expected an array of form names");
        for (const auto& x : *it) {
            if (!x.is_string() || !forms.count(x.get<std::string>())) {
                fail(where + ".invariant_forms", "names must refer to entries of 'forms'");
            }
            invariant.push_back(x.get<std::string>());
        }
    }
    std::optional<Expression> potential;
    if (auto it = j.find("potential"); it != j.end()) potential = expression_from_json(*it, where + ".potential");

    const json& gj = field(j, "group", where);
    reject_unknown(gj, where + ".group", {"finite_part", "generator"});
    PolyAutomorphism gen = map_or_matrix_from_json(field(gj, "generator", where + ".group"), where + ".group.generator");
    if (gen.dim() != dim) fail(where + ".group.generator", "dimension differs from entry dim");
    std::vector<Eigen::MatrixXcd> finite{Eigen::MatrixXcd::Identity(dim, dim)};
    if (auto it = gj.find("finite_part"); it != gj.end()) {
        if (!it->is_array()) fail(where + ".group.finite_part", "expected an array of matrices");
        finite.clear();
        for (std::size_t k = 0; k < it->size(); ++k) {
            finite.push_back(matrix_from_json((*it)[k], where + ".group.finite_part[" + std::to_string(k) + "]"));
        }
    }
    double tol = 1e-10;
    if (auto it = j.find("tolerance"); it != j.end()) {
        if (!it->is_number() || !(it->get<double>() > 0.0)) fail(where + ".tolerance", "expected a number > 0");
        tol = it->get<double>();
    }
    std::string name = "custom";
    if (auto it = j.find("name"); it != j.end()) {
        if (!it->is_string()) fail(where + ".name", "expected a string");
        name = it->get<std::string>();
    }
    try {
        return CatalogEntry{.name = name,
                            .dim = dim,
                            .forms = std::move(forms),
                            .invariant_forms = std::move(invariant),
                            .potential = std::move(potential),
                            .group = GroupSpec(std::move(finite), std::move(gen)),
                            .parameters = {},
                            .default_tolerance = tol};
    } catch (const Error& e) {
        fail(where + ".group", e.what());
    }
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": invalid JSON (" + std::string(e.what()) + ")");
    }
}

} // namespace lck
