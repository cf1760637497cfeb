#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include <logtensor/fixtures.hpp>
#include <logtensor/io.hpp>
#include <logtensor/verify.hpp>

using namespace logtensor;

namespace {

void same_module(const GeneralizedModule &a, const GeneralizedModule &b)
{
    CHECK(a.label == b.label);
    CHECK(a.group == b.group);
    CHECK(a.weight_hi == b.weight_hi);
    REQUIRE(a.dim() == b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        CHECK(a.basis[i].name == b.basis[i].name);
        CHECK(a.basis[i].grade == b.basis[i].grade);
        CHECK(a.basis[i].weight == b.basis[i].weight);
    }
    CHECK(a.Lm1 == b.Lm1);
    CHECK(a.L1 == b.L1);
    CHECK(a.N == b.N);
    CHECK(a.modes == b.modes);
    CHECK(a.algebra == b.algebra);
}

} // namespace

TEST_CASE("modules survive a JSON round trip", "[io]")
{
    for (const ModulePtr &M : {build_fock(rational(1, 2), 3), jordan_module("J", rational(1, 3), 3, 2),
                               contragredient(build_fock(rational(-1), 2)), trivial_vacuum_module()}) {
        auto j = to_json(*M);
        CHECK(j.at("schema") == kModuleSchema);
        auto back = module_from_json(nlohmann::json::parse(j.dump()));
        same_module(*M, *back);
        CHECK(check_strong_grading(*back).pass());
    }
}

TEST_CASE("operators survive a JSON round trip", "[io]")
{
    JordanFamily spec;
    spec.r = 3;
    spec.seed = 4;
    for (const LogIntwOp &Y : {heis_intw(rational(1, 2), rational(1, 3), rational(3)), random_log_family(spec).Y}) {
        auto j = to_json(Y);
        auto back = operator_from_json(nlohmann::json::parse(j.dump()));
        CHECK(back.data == Y.data);
        CHECK(to_json(back).dump() == j.dump());
        for (const auto &c : j.at("coefficients")) CHECK(c.at("n").size() == 4);
    }
    auto H = heis_intw(rational(1, 2), rational(1, 2), rational(2));
    auto back = operator_from_json(to_json(H));
    auto I = i_from_y(back, BranchPoint(ExactComplex(1), 0));
    VerifyOptions o;
    o.n_lo = o.m_lo = -1;
    o.n_hi = o.m_hi = 1;
    CHECK(verify_P_jacobi(I, basis_vector(1), o).pass());
}

TEST_CASE("exponents are written as four integers", "[io]")
{
    auto j = exponent_json(ExactComplex(rational(-3, 4), rational(1, 2)));
    CHECK(j == nlohmann::json::array({-3, 4, 1, 2}));
    CHECK(exponent_from_json(j) == ExactComplex(rational(-3, 4), rational(1, 2)));
    CHECK(exponent_from_json(nlohmann::json::array({2, 4, 0, 1})) == ExactComplex(rational(1, 2)));
    CHECK_THROWS_AS(exponent_from_json(nlohmann::json::array({1, 2})), ParseError);
}

TEST_CASE("fusion tables survive a JSON round trip", "[io]")
{
    for (const auto &name : bundled_table_names()) {
        auto T = bundled_table(name);
        auto back = table_from_json(nlohmann::json::parse(to_json(T).dump()));
        CHECK(back.labels() == T.labels());
        CHECK(back.unit() == T.unit());
        CHECK(back.entries() == T.entries());
    }
    auto j = nlohmann::json::parse(R"({"labels":["1","a"],"unit":"1","N":[[0,0,0,1],[1,0,1,1],[1,1,0,1],[0,1,1,-1]]})");
    CHECK_THROWS_AS(table_from_json(j), ParseError);
    j = nlohmann::json::parse(R"({"labels":["1","a"],"unit":"b","N":[]})");
    CHECK_THROWS_AS(table_from_json(j), ParseError);
    j = nlohmann::json::parse(R"({"labels":["1","a"],"unit":"1","N":[[0,0,0,1]]})");
    CHECK_THROWS_AS(table_from_json(j), ParseError);
}

TEST_CASE("reports are versioned and deterministic", "[io]")
{
    auto run = [] {
        auto I = i_from_y(heis_intw(rational(0), rational(0), rational(2)), BranchPoint(ExactComplex(1), 0));
        VerifyOptions o;
        o.n_lo = o.m_lo = -1;
        o.n_hi = o.m_hi = 1;
        return suite_json("verify-jacobi", {verify_P_jacobi(I, basis_vector(1), o)});
    };
    auto a = run(), b = run();
    CHECK(a.dump() == b.dump());
    CHECK(a.at("schema") == "logtensor-report/1");
    CHECK(a.at("pass") == true);
    CHECK(a.at("reports").at(0).at("tag") == "im:def");
    VerificationReport bad;
    bad.identity = "x";
    bad.tag = "t";
    bad.add_failure("k", "why");
    CHECK(suite_json("c", {bad}).at("pass") == false);
    CHECK(report_line(bad).rfind("FAIL", 0) == 0);
}

TEST_CASE("bad files raise parse errors", "[io]")
{
    CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), ParseError);
    const auto path = std::filesystem::temp_directory_path() / "logtensor_bad.json";
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    CHECK_THROWS_AS(read_json_file(path.string()), ParseError);
    CHECK_THROWS_AS(module_from_json(nlohmann::json::object()), ParseError);
    CHECK_THROWS_AS(operator_from_json(nlohmann::json::parse(R"({"type":{}})")), ParseError);
    std::filesystem::remove(path);
}
