#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include <logtensor/acceptance.hpp>
#include <logtensor/fixtures.hpp>
#include <logtensor/fusion.hpp>
#include <logtensor/io.hpp>
#include <logtensor/transforms.hpp>
#include <logtensor/units.hpp>
#include <logtensor/verify.hpp>

using namespace logtensor;

namespace {

struct Window {
    Rational lo{0}, hi{6};
    unsigned max_logpower = 2;
    std::string str() const { return lo.get_str() + ":" + hi.get_str() + ":" + std::to_string(max_logpower); }
};

Window parse_window(const std::string &s)
{
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ':')) parts.push_back(tok);
    if (parts.size() != 3) throw ParseError("window must be lo:hi:maxlog, got " + s);
    Window w{parse_rational(parts[0]), parse_rational(parts[1]), unsigned(std::stoul(parts[2]))};
    if (w.lo > w.hi) throw ParseError("window needs lo <= hi");
    return w;
}

std::pair<long, long> parse_range(const std::string &s)
{
    auto c = s.find(':');
    if (c == std::string::npos) throw ParseError("range must be lo:hi, got " + s);
    long lo = std::stol(s.substr(0, c)), hi = std::stol(s.substr(c + 1));
    if (lo > hi) throw ParseError("range needs lo <= hi");
    return {lo, hi};
}

bool is_decimal(const std::string &s) { return s.find_first_of(".eE") != std::string::npos; }

BranchPoint parse_z(const std::string &s, long p)
{
    const auto comma = s.find(',');
    const std::string re = s.substr(0, comma), im = comma == std::string::npos ? "0" : s.substr(comma + 1);
    BranchPoint bp;
    if (is_decimal(re) || is_decimal(im))
        bp = BranchPoint(NumericComplex(std::stod(re), std::stod(im)), p);
    else
        bp = BranchPoint(ExactComplex(parse_rational(re), parse_rational(im)), p);
    if (bp.z == NumericComplex(0.0, 0.0)) throw ParseError("z must be nonzero");
    return bp;
}

std::vector<Rational> parse_rationals(const std::string &s)
{
    std::vector<Rational> out;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(parse_rational(tok));
    return out;
}

struct Config {
    std::string fixture;
    std::string input;
    std::string z = "1";
    long p = 0;
    std::string window;
    std::string range = "-3:3";
    double tol = 1e-9;
    std::string format = "text";
    std::string json_out;
    std::uint64_t seed = 0;
    unsigned jordan = 0;

    Window win() const { return parse_window(window); }
    BranchPoint bp() const { return parse_z(z, p); }
    VerifyOptions options() const
    {
        VerifyOptions o;
        o.tolerance = tol;
        auto [lo, hi] = parse_range(range);
        o.n_lo = o.m_lo = lo;
        o.n_hi = o.m_hi = hi;
        return o;
    }
};

struct Loaded {
    LogIntwOp Y;
    unsigned max_logpower = 0;
    std::string name;
};

Loaded load_operator(const Config &c)
{
    const Window w = c.win();
    if (!c.input.empty()) {
        LogIntwOp Y = operator_from_json(read_json_file(c.input));
        return {Y, std::max(Y.max_logpower(), w.max_logpower), c.input};
    }
    if (c.jordan) {
        JordanFamily spec;
        spec.r = c.jordan;
        spec.seed = c.seed;
        RandomFamily F = random_log_family(spec);
        return {F.Y, F.max_logpower, "jordan:" + std::to_string(c.jordan) + "," + std::to_string(c.seed)};
    }
    const std::string f = c.fixture.empty() ? "heis:0,0" : c.fixture;
    const auto colon = f.find(':');
    const std::string kind = f.substr(0, colon), args = colon == std::string::npos ? "" : f.substr(colon + 1);
    if (kind == "heis") {
        auto v = parse_rationals(args);
        if (v.size() != 2) throw ParseError("heis fixture takes two momenta, e.g. heis:1/2,1/2");
        return {heis_intw(v[0], v[1], w.hi), 0, f};
    }
    if (kind == "jordan") {
        auto v = parse_rationals(args);
        if (v.size() != 2) throw ParseError("jordan fixture takes r,seed");
        JordanFamily spec;
        spec.r = unsigned(v[0].get_num().get_ui());
        spec.seed = v[1].get_num().get_ui();
        RandomFamily F = random_log_family(spec);
        return {F.Y, F.max_logpower, f};
    }
    throw ParseError("unknown fixture " + f);
}

std::vector<std::size_t> generators(const LogIntwOp &Y)
{
    std::vector<std::size_t> out;
    const auto &A = *Y.W2->algebra;
    for (std::size_t v = 0; v < A.basis.size(); ++v)
        if (A.weight(v).re() <= 2) out.push_back(v);
    return out;
}

FusionTable load_table(const std::string &t)
{
    if (std::filesystem::exists(t)) return table_from_json(read_json_file(t));
    std::string name = t;
    if (name.size() > 5 && name.ends_with(".json")) name = name.substr(0, name.size() - 5);
    return bundled_table(name);
}

int emit(const Config &c, const std::string &command, const std::vector<VerificationReport> &reports)
{
    const nlohmann::json j = suite_json(command, reports);
    if (c.format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << suite_text(reports);
    if (!c.json_out.empty()) write_json_file(c.json_out, j);
    return j.at("pass").get<bool>() ? 0 : 1;
}

void add_common(CLI::App *s, Config &c, bool operator_input)
{
    if (operator_input) {
        s->add_option("--fixture", c.fixture, "heis:<lambda>,<mu> or jordan:<r>,<seed>");
        s->add_option("--input", c.input, "intertwining operator JSON file");
        s->add_option("--seed", c.seed, "seed for a random Jordan family");
        s->add_option("--jordan", c.jordan, "Jordan block size of a random family")->check(CLI::Range(1u, 3u));
    }
    s->add_option("--z", c.z, "rational p/q, pair re,im, or decimal");
    s->add_option("--p", c.p, "branch index");
    s->add_option("--window", c.window, "lo:hi:maxlog");
    s->add_option("--range", c.range, "N and M range lo:hi for Jacobi coefficients");
    s->add_option("--tol", c.tol, "numeric tolerance")->check(CLI::PositiveNumber);
    s->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    s->add_option("--json-out", c.json_out, "also write the JSON report here");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Logarithmic intertwining operators: verifiers, transforms and fusion tables"};
    app.require_subcommand(1);
    Config c;
    if (const char *w = std::getenv("LOGTENSOR_WINDOW")) c.window = w;
    if (c.window.empty()) c.window = "0:6:2";
    if (const char *t = std::getenv("LOGTENSOR_TOL")) {
        try {
            c.tol = std::stod(t);
        } catch (const std::exception &) {
            std::cerr << "LOGTENSOR_TOL is not a number\n";
            return 2;
        }
    }

    std::function<int()> action;
    auto cmd = [&](const std::string &name, const std::string &help, bool op, std::function<int()> f) {
        CLI::App *s = app.add_subcommand(name, help);
        add_common(s, c, op);
        s->callback([&action, f] { action = f; });
        return s;
    };

    cmd("verify-jacobi", "check the P(z) Jacobi identity for each generator", true, [&] {
        Loaded L = load_operator(c);
        PzMap I = i_from_y(L.Y, c.bp());
        std::vector<VerificationReport> reps;
        for (std::size_t v : generators(L.Y)) {
            auto r = verify_P_jacobi(I, basis_vector(v), c.options());
            r.window = c.window;
            reps.push_back(r);
        }
        return emit(c, "verify-jacobi", reps);
    });

    cmd("verify-sl2", "check the L(-1), L(0), L(1) relations in both forms", true, [&] {
        Loaded L = load_operator(c);
        PzMap I = i_from_y(L.Y, c.bp());
        std::vector<VerificationReport> reps;
        for (int j = -1; j <= 1; ++j)
            for (auto f : {Sl2Form::Lj, Sl2Form::Lj2}) reps.push_back(verify_P_sl2(I, j, f, c.options()));
        return emit(c, "verify-sl2", reps);
    });

    CLI::App *rt = cmd("roundtrip", "operator -> map -> operator and back, exact", true, [&] {
        Loaded L = load_operator(c);
        std::vector<BranchPoint> bps;
        if (c.z != "1" || c.p != 0)
            bps.push_back(c.bp());
        else
            bps = {BranchPoint(ExactComplex(1), 0), BranchPoint(ExactComplex(1), 1), BranchPoint(ExactComplex(-1), 0),
                   BranchPoint(ExactComplex(4), 0)};
        std::vector<VerificationReport> reps;
        for (const auto &bp : bps) {
            PzMap I = i_from_y(L.Y, bp);
            LogIntwOp Y2 = y_from_i(I, L.max_logpower);
            auto a = compare_operators(Y2, L.Y, "im:correspond");
            a.identity = L.name + " at p=" + std::to_string(bp.p) + ", z=" + (bp.exact ? bp.exact->str() : "numeric") +
                         ": y_from_i after i_from_y";
            auto b = compare_maps(i_from_y(Y2, bp), I, "im:correspond", c.tol);
            b.identity = L.name + ": i_from_y after y_from_i";
            reps.push_back(a);
            reps.push_back(b);
        }
        return emit(c, "roundtrip", reps);
    });
    (void)rt;

    std::vector<long> p_new;
    CLI::App *bs = cmd("branch-shift", "compare recovery at p' with the conjugation formula", true, [&] {
        Loaded L = load_operator(c);
        PzMap I = i_from_y(L.Y, c.bp());
        std::vector<long> targets = p_new;
        if (targets.empty())
            for (long d = -3; d <= 3; ++d) targets.push_back(c.p + d);
        std::vector<VerificationReport> reps;
        for (long q : targets) {
            BranchShift s = branch_shift(I, q, L.max_logpower);
            auto r = compare_operators(s.direct, s.via_formula, "YIp'YIp");
            r.identity = "branch shift p=" + std::to_string(c.p) + " -> p'=" + std::to_string(q);
            reps.push_back(r);
        }
        return emit(c, "branch-shift", reps);
    });
    bs->add_option("--p-new", p_new, "target branch indices");

    cmd("adjoint", "Q-Jacobi of the adjoint and the involution property", true, [&] {
        Loaded L = load_operator(c);
        PzMap I = i_from_y(L.Y, c.bp());
        QzMap J = adjoint(I);
        std::vector<VerificationReport> reps;
        for (std::size_t v : generators(L.Y)) reps.push_back(verify_Q_jacobi(J, basis_vector(v), c.options()));
        auto inv = compare_maps(adjoint(J), I, "qz:qtop", c.tol);
        inv.identity = "adjoint applied twice";
        reps.push_back(inv);
        return emit(c, "adjoint", reps);
    });

    long r_index = 0;
    bool rank = false;
    CLI::App *br = cmd("b-r", "B_r factorization check and optional rank", true, [&] {
        Loaded L = load_operator(c);
        std::vector<VerificationReport> reps{check_b_factorizations(L.Y, r_index)};
        if (rank) {
            const Window w = c.win();
            ModulePtr A = jordan_module("J", w.lo, 2, 2);
            ModulePtr B = jordan_module("K", w.lo, 2, unsigned(floor(Rational(w.hi - w.lo)).get_num().get_ui()));
            RankResult rk = b_r_rank(A, A, B, r_index, w.max_logpower);
            VerificationReport rep;
            rep.identity = "B_r rank " + std::to_string(rk.rank) + " of " + std::to_string(rk.domain_dim);
            rep.tag = "4.31";
            rep.window = c.window;
            if (rk.rank == rk.domain_dim)
                rep.add("rank", ExactComplex(0));
            else
                rep.add_failure("rank", "not injective");
            reps.push_back(rep);
        }
        return emit(c, "b-r", reps);
    });
    br->add_option("--r", r_index, "index r");
    br->add_flag("--rank", rank, "also check injectivity on Jordan unit families over the window");

    cmd("mu-check", "mu followed by its inverse", true, [&] {
        Loaded L = load_operator(c);
        PzMap I = i_from_y(L.Y, c.bp());
        std::vector<VerificationReport> reps{check_mu_roundtrip(I, c.tol)};
        return emit(c, "mu-check", reps);
    });

    std::string unit_fixture = "heis:1/2";
    CLI::App *uc = cmd("unit-check", "recover a planted module map from left and right unit maps", false, [&] {
        const BranchPoint bp = c.bp();
        const auto colon = unit_fixture.find(':');
        const std::string kind = unit_fixture.substr(0, colon);
        const auto args = parse_rationals(colon == std::string::npos ? "" : unit_fixture.substr(colon + 1));
        ModulePtr V, W, W3;
        SparseMatrix f;
        if (kind == "heis" && args.size() == 1) {
            V = build_fock(Rational(0), 2);
            W = build_fock(args[0], fock_cutoff(args[0], args[0] * args[0] / 2 + 3));
            W3 = direct_sum(W, W, "W+W");
            for (std::size_t b = 0; b < W->dim(); ++b) {
                f.add(b, b, ExactComplex(Rational(2)));
                f.add(b + W->dim(), b, ExactComplex(rational(-1, 3)));
            }
        } else if (kind == "jordan" && args.size() == 2) {
            V = trivial_vacuum_module();
            W3 = W = jordan_module("J", args[0], unsigned(args[1].get_num().get_ui()), 2);
            f = identity_matrix(W->dim()).scaled(ExactComplex(Rational(3)));
            f += W->N.scaled(ExactComplex(rational(1, 2)));
        } else {
            throw ParseError("unit-check fixture is heis:<lambda> or jordan:<h>,<r>");
        }
        UnitResult l = unit_eta_left(planted_left(V, W, W3, f, bp), c.tol);
        UnitResult r = unit_eta_right(planted_right(V, W, W3, f, bp), c.tol);
        for (UnitResult *u : {&l, &r})
            if (!u->matrix || !(*u->matrix == f)) u->report.add_failure("recovered map", "differs from the planted map");
        return emit(c, "unit-check", {l.report, r.report});
    });
    uc->add_option("--unit-fixture", unit_fixture, "heis:<lambda> or jordan:<h>,<r>");

    std::string m_range = "-2:2";
    CLI::App *ec = cmd("elm-check", "module action on tensor elements for v = alpha", true, [&] {
        Loaded L = load_operator(c);
        PzMap I = i_from_y(L.Y, c.bp());
        auto [lo, hi] = parse_range(m_range);
        const std::size_t v = L.Y.W2->algebra->basis.size() > 1 ? 1 : 0;
        std::vector<VerificationReport> reps;
        for (long m = lo; m <= hi; ++m) reps.push_back(verify_elm(I, basis_vector(v), m, c.options()));
        return emit(c, "elm-check", reps);
    });
    ec->add_option("--m", m_range, "mode range lo:hi");

    std::string table = "ising", va, vb, v3;
    CLI::App *fu = app.add_subcommand("fuse", "fusion product of two module vectors");
    fu->add_option("--table", table, "bundled name or JSON file");
    fu->add_option("--a", va, "e.g. sigma or 2*sigma+eps or [0,0,1]")->required();
    fu->add_option("--b", vb)->required();
    fu->callback([&] {
        action = [&] {
            FusionTable T = load_table(table);
            std::cout << T.format(fuse(T.parse_vector(va), T.parse_vector(vb), T)) << "\n";
            return 0;
        };
    });

    CLI::App *ac = app.add_subcommand("assoc-check", "associativity of fusion multiplicities");
    ac->add_option("--table", table, "bundled name or JSON file");
    ac->add_option("--format", c.format)->check(CLI::IsMember({"text", "json"}));
    ac->add_option("--json-out", c.json_out);
    ac->callback([&] {
        action = [&] {
            FusionTable T = load_table(table);
            AssocResult a = assoc_multiplicity_check(T);
            return emit(c, "assoc-check", {unit_law_check(T), a.report});
        };
    });

    CLI::App *tr = app.add_subcommand("triple", "W1 (W2 W3) and (W1 W2) W3");
    tr->add_option("--table", table);
    tr->add_option("--w1", va)->required();
    tr->add_option("--w2", vb)->required();
    tr->add_option("--w3", v3)->required();
    tr->callback([&] {
        action = [&] {
            FusionTable T = load_table(table);
            auto a = T.parse_vector(va), b = T.parse_vector(vb), d = T.parse_vector(v3);
            auto l = triple_decompose(a, b, d, T, Side::left), r = triple_decompose(a, b, d, T, Side::right);
            std::cout << "left:  " << T.format(l) << "\nright: " << T.format(r) << "\n";
            return l == r ? 0 : 1;
        };
    });

    std::string export_name, export_out;
    CLI::App *fx = app.add_subcommand("fixtures", "fixture utilities");
    CLI::App *ex = fx->add_subcommand("export", "write a fixture as JSON");
    fx->require_subcommand(1);
    ex->add_option("--name", export_name, "heis:<l>,<m>, jordan:<r>,<seed>, fock:<l>, or a fusion table name")->required();
    ex->add_option("--out", export_out, "output path (stdout when omitted)");
    ex->add_option("--window", c.window, "lo:hi:maxlog");
    ex->callback([&] {
        action = [&] {
            nlohmann::json j;
            const auto colon = export_name.find(':');
            const std::string kind = export_name.substr(0, colon);
            if (kind == "heis" || kind == "jordan") {
                c.fixture = export_name;
                j = to_json(load_operator(c).Y);
            } else if (kind == "fock") {
                const Rational l = parse_rational(export_name.substr(colon + 1));
                j = to_json(*build_fock(l, fock_cutoff(l, c.win().hi)));
            } else {
                j = to_json(bundled_table(export_name));
            }
            if (export_out.empty())
                std::cout << j.dump(2) << "\n";
            else
                write_json_file(export_out, j);
            return 0;
        };
    });

    std::vector<int> only;
    CLI::App *acc = app.add_subcommand("acceptance", "run the acceptance suite");
    acc->add_option("--only", only, "criterion numbers");
    acc->add_option("--json-out", c.json_out);
    acc->callback([&] {
        action = [&] {
            AcceptanceOptions o;
            o.only = only;
            o.tolerance = c.tol;
            bool all = true;
            nlohmann::json j = nlohmann::json::array();
            for (const auto &r : run_acceptance(o)) {
                std::cout << criterion_line(r) << std::endl;
                all = all && r.pass;
                j.push_back(suite_json("acceptance " + std::to_string(r.id), r.reports));
            }
            if (!c.json_out.empty()) write_json_file(c.json_out, j);
            return all ? 0 : 1;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        parse_window(c.window);
        return action ? action() : 2;
    } catch (const ResourceGuard &e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 3;
    } catch (const ParseError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
