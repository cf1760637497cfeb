#include <logtensor/io.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <logtensor/fixtures.hpp>
#include <logtensor/series_io.hpp>

namespace logtensor {

using nlohmann::json;

namespace {

template <class F>
auto guarded(const char *what, F &&f)
{
    try {
        return f();
    } catch (const ParseError &) {
        throw;
    } catch (const std::exception &e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

json grade_json(const Grade &g)
{
    json a = json::array();
    for (const auto &q : g) a.push_back(rational_json(q));
    return a;
}

Grade grade_from_json(const json &j)
{
    Grade g;
    for (const auto &q : j) g.push_back(rational_from_json(q));
    return g;
}

std::shared_ptr<const VertexAlgebra> algebra_by_label(const std::string &label)
{
    if (label.empty()) return nullptr;
    if (label == heisenberg_algebra()->label) return heisenberg_algebra();
    if (label == trivial_algebra()->label) return trivial_algebra();
    throw ParseError("unknown algebra " + label);
}

long small(const mpz_class &z)
{
    if (!z.fits_slong_p()) throw ParseError("exponent too large");
    return z.get_si();
}

} // namespace

json to_json(const SparseMatrix &m)
{
    json a = json::array();
    for (const auto &[rc, v] : m.by_column()) a.push_back({rc.second, rc.first, complex_json(v)});
    return a;
}

SparseMatrix matrix_from_json(const json &j)
{
    return guarded("matrix", [&] {
        SparseMatrix m;
        for (const auto &e : j) m.add(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), complex_from_json(e.at(2)));
        return m;
    });
}

json to_json(const GeneralizedModule &M)
{
    json basis = json::array();
    for (const auto &b : M.basis) basis.push_back({{"name", b.name}, {"grade", grade_json(b.grade)}, {"weight", complex_json(b.weight)}});
    json modes = json::array();
    for (const auto &[vm, mat] : M.modes) modes.push_back({{"v", vm.first}, {"m", vm.second}, {"matrix", to_json(mat)}});
    return json{{"schema", kModuleSchema},
                {"label", M.label},
                {"group", M.group.moduli},
                {"weight_hi", rational_json(M.weight_hi)},
                {"algebra", M.algebra ? M.algebra->label : ""},
                {"basis", basis},
                {"Lm1", to_json(M.Lm1)},
                {"L1", to_json(M.L1)},
                {"N", to_json(M.N)},
                {"modes", modes}};
}

ModulePtr module_from_json(const json &j)
{
    return guarded("module", [&] {
        if (j.contains("schema") && j.at("schema") != kModuleSchema) throw ParseError("unexpected module schema");
        auto M = std::make_shared<GeneralizedModule>();
        M->label = j.at("label").get<std::string>();
        M->group.moduli = j.at("group").get<std::vector<unsigned>>();
        M->weight_hi = rational_from_json(j.at("weight_hi"));
        M->algebra = algebra_by_label(j.value("algebra", std::string()));
        for (const auto &b : j.at("basis"))
            M->basis.push_back({grade_from_json(b.at("grade")), complex_from_json(b.at("weight")), b.at("name").get<std::string>()});
        M->Lm1 = matrix_from_json(j.at("Lm1"));
        M->L1 = matrix_from_json(j.at("L1"));
        M->N = matrix_from_json(j.at("N"));
        for (const auto &e : j.at("modes"))
            M->modes[{e.at("v").get<std::size_t>(), e.at("m").get<long>()}] = matrix_from_json(e.at("matrix"));
        return ModulePtr(M);
    });
}

json exponent_json(const ExactComplex &n)
{
    return json::array({small(n.re().get_num()), small(n.re().get_den()), small(n.im().get_num()), small(n.im().get_den())});
}

ExactComplex exponent_from_json(const json &j)
{
    if (!j.is_array() || j.size() != 4) throw ParseError("exponent must be [num, den, inum, iden]");
    return ExactComplex(rational(j[0].get<long>(), j[1].get<long>()), rational(j[2].get<long>(), j[3].get<long>()));
}

json to_json(const LogIntwOp &Y)
{
    json coeffs = json::array();
    for (const auto &[nk, entries] : Y.coefficients()) {
        json mat = json::array();
        for (const auto &[ab, vec] : entries)
            for (const auto &[c, v] : vec)
                if (!v.is_zero()) mat.push_back({ab.first, ab.second, c, complex_json(v)});
        if (!mat.empty()) coeffs.push_back({{"n", exponent_json(nk.first)}, {"k", nk.second}, {"matrix", mat}});
    }
    return json{{"schema", kOperatorSchema},
                {"type", {{"W1", to_json(*Y.W1)}, {"W2", to_json(*Y.W2)}, {"W3", to_json(*Y.W3)}}},
                {"coefficients", coeffs}};
}

LogIntwOp operator_from_json(const json &j)
{
    return guarded("operator", [&] {
        if (j.contains("schema") && j.at("schema") != kOperatorSchema) throw ParseError("unexpected operator schema");
        const json &t = j.at("type");
        LogIntwOp Y{module_from_json(t.at("W1")), module_from_json(t.at("W2")), module_from_json(t.at("W3")), {}};
        for (const auto &e : j.at("coefficients")) {
            const ExactComplex n = exponent_from_json(e.at("n"));
            const unsigned k = e.at("k").get<unsigned>();
            for (const auto &m : e.at("matrix")) {
                const std::size_t a = m.at(0), b = m.at(1), c = m.at(2);
                if (a >= Y.W1->dim() || b >= Y.W2->dim() || c >= Y.W3->dim()) throw ParseError("coefficient index out of range");
                LogSeries s = LogSeries::monomial(Var::x, -n - ExactComplex(1), k, complex_from_json(m.at(3)));
                auto &slot = Y.data[{a, b}][c];
                slot += s;
            }
        }
        return Y;
    });
}

json to_json(const FusionTable &T)
{
    json N = json::array();
    for (const auto &[j, a, b, v] : T.entries()) N.push_back({j, a, b, v});
    return json{{"labels", T.labels()}, {"unit", T.labels()[T.unit()]}, {"N", N}};
}

FusionTable table_from_json(const json &j)
{
    return guarded("fusion table", [&] {
        auto labels = j.at("labels").get<std::vector<std::string>>();
        const std::string unit = j.at("unit").get<std::string>();
        auto it = std::find(labels.begin(), labels.end(), unit);
        if (it == labels.end()) throw ParseError("unit label not among labels");
        std::vector<FusionTable::Entry> entries;
        for (const auto &e : j.at("N")) {
            if (!e.is_array() || e.size() != 4) throw ParseError("N entries are [j, a, b, value]");
            if (e[3].is_number_integer() && e[3].get<long long>() < 0) throw ParseError("negative fusion rule");
            entries.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<std::size_t>(),
                                 e[3].get<std::uint64_t>());
        }
        return FusionTable(labels, std::size_t(it - labels.begin()), entries);
    });
}

json to_json(const VerificationReport &r)
{
    json j{{"identity", r.identity},
           {"tag", r.tag},
           {"window", r.window},
           {"mode", r.exact_mode ? "exact" : "numeric"},
           {"tolerance", r.tolerance},
           {"scale", r.scale},
           {"checked", r.checked},
           {"skipped", r.skipped},
           {"failures", r.failures},
           {"max_deviation", r.max_deviation},
           {"pass", r.pass()},
           {"offending", r.offending},
           {"notes", r.notes}};
    if (r.keep_records) {
        json recs = json::array();
        for (const auto &c : r.records) recs.push_back({c.key, c.exact_zero, c.abs});
        j["records"] = recs;
    }
    return j;
}

json suite_json(const std::string &command, const std::vector<VerificationReport> &reports)
{
    bool pass = true;
    json arr = json::array();
    for (const auto &r : reports) {
        pass = pass && r.pass();
        arr.push_back(to_json(r));
    }
    return json{{"schema", kReportSchema}, {"command", command}, {"pass", pass}, {"reports", arr}};
}

std::string report_line(const VerificationReport &r)
{
    char dev[32];
    std::snprintf(dev, sizeof dev, "%.3g", r.max_deviation);
    std::ostringstream out;
    out << (r.pass() ? "PASS" : "FAIL") << "  [" << r.tag << "] " << r.identity << "  checked=" << r.checked
        << " skipped=" << r.skipped << " failures=" << r.failures << " max_dev=" << dev << " "
        << (r.exact_mode ? "exact" : "numeric");
    if (!r.window.empty()) out << " window=" << r.window;
    return out.str();
}

std::string suite_text(const std::vector<VerificationReport> &reports)
{
    std::ostringstream out;
    for (const auto &r : reports) {
        out << report_line(r) << "\n";
        for (const auto &k : r.offending) out << "      " << k << "\n";
        for (const auto &n : r.notes) out << "      note: " << n << "\n";
    }
    return out.str();
}

json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_json_file(const std::string &path, const json &j)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

} // namespace logtensor
