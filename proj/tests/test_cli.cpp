#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <curvebetti/cli.hpp>

using namespace curvebetti;

namespace {

struct result {
    int code;
    std::string out;
    std::string err;
};

result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

}  // namespace

TEST(Betti, JsonRecordForPlaneCubics) {
    const auto r = run({"betti", "--k", "1", "--n", "3", "--d", "3", "--compactification", "S", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out,
              "{\"betti\":[1,0,2,0,3,0,3,0,3,0,3,0,3,0,2,0,1],\"compactification\":\"S\",\"components\":1,\"d\":3,"
              "\"dim\":8,\"euler\":21,\"k\":1,\"n\":3,\"palindromic\":true,\"q_coefficients\":[1,2,3,3,3,3,3,2,1],"
              "\"space\":\"S(Gr(1,3),3)\",\"trace\":null}\n");
}

TEST(Betti, RecordInvariants) {
    for (const char* space : {"Gr(2,4)", "S(Gr(2,5),3)", "M(Gr(1,4),2) + P(3)", "F2(Gr(2,4))"}) {
        const auto r = run({"betti", "--space", space, "--format", "json"});
        ASSERT_EQ(r.code, 0) << r.err;
        const auto j = nlohmann::json::parse(r.out);
        const auto q = j["q_coefficients"].get<std::vector<std::int64_t>>();
        const auto b = j["betti"].get<std::vector<std::int64_t>>();
        std::int64_t sum = 0;
        for (auto c : q) sum += c;
        EXPECT_EQ(j["euler"].get<std::int64_t>(), sum);
        ASSERT_EQ(b.size(), 2 * q.size() - 1);
        for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b[i], i % 2 ? 0 : q[i / 2]);
        EXPECT_EQ(j["dim"].get<int>(), static_cast<int>(q.size()) - 1);
    }
}

TEST(Betti, SpaceExpression) {
    const auto r = run({"betti", "--space", "Gr(2,4)", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["q_coefficients"], nlohmann::json({1, 1, 2, 1, 1}));
    EXPECT_EQ(j["euler"], 6);
    EXPECT_TRUE(j["k"].is_null());
    EXPECT_TRUE(j["compactification"].is_null());
}

TEST(Betti, ModuliSpaceExpressionFillsKey) {
    const auto r = run({"betti", "--space", " S( Gr(1,3), 3 )", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["space"], "S(Gr(1,3),3)");
    EXPECT_EQ(j["k"], 1);
    EXPECT_EQ(j["d"], 3);
}

TEST(Betti, TextAndCsvAgreeWithJson) {
    const std::vector<std::string> base = {"betti", "--k", "2", "--n", "5", "--d", "3", "--compactification", "H"};
    auto with = [&](const char* fmt) {
        auto a = base;
        a.insert(a.end(), {"--format", fmt});
        return run(a);
    };
    const auto j = nlohmann::json::parse(with("json").out);
    const auto csv = lines(with("csv").out);
    ASSERT_EQ(csv.size(), 2u);
    std::string expected = "2,5,3,H," + std::to_string(j["dim"].get<int>()) + "," + std::to_string(j["euler"].get<long>());
    for (auto c : j["q_coefficients"]) expected += "," + std::to_string(c.get<long>());
    EXPECT_EQ(csv[1], expected);
    const auto text = with("text");
    EXPECT_EQ(text.code, 0);
    EXPECT_NE(text.out.find("euler       " + std::to_string(j["euler"].get<long>())), std::string::npos);
    EXPECT_EQ(text.out.find('\x1b'), std::string::npos);
}

TEST(Betti, TraceListsSurgerySteps) {
    const auto r = run({"betti", "--k", "1", "--n", "4", "--d", "2", "--compactification", "S", "--format", "json",
                        "--trace"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["trace"].size(), 2u);
    EXPECT_EQ(j["trace"][0]["kind"], "blowup");
    EXPECT_EQ(j["trace"][1]["kind"], "blowdown");
    EXPECT_EQ(j["trace"][1]["cumulative"], j["q_coefficients"]);

    const auto m = run({"betti", "--k", "1", "--n", "4", "--d", "2", "--compactification", "M", "--format", "json",
                        "--trace"});
    EXPECT_TRUE(nlohmann::json::parse(m.out)["trace"].is_null());
}

TEST(Betti, ExitCodes) {
    const auto parse = run({"betti", "--space", "Gr(2 4)"});
    EXPECT_EQ(parse.code, 2);
    EXPECT_NE(parse.err.find("offset 5"), std::string::npos);
    EXPECT_TRUE(parse.out.empty());

    EXPECT_EQ(run({"betti", "--space", "P(0) - P(1)"}).code, 3);
    EXPECT_EQ(run({"betti", "--space", "blowup(P(3), P(1), 3)"}).code, 3);
    EXPECT_EQ(run({"betti", "--k", "1", "--n", "3", "--d", "3", "--compactification", "H"}).code, 2);
    EXPECT_EQ(run({"betti", "--k", "1", "--n", "3", "--d", "4", "--compactification", "S"}).code, 2);
    EXPECT_EQ(run({"betti", "--k", "1", "--n", "3", "--compactification", "Q", "--d", "2"}).code, 2);
    EXPECT_EQ(run({"betti", "--k", "1"}).code, 2);
    EXPECT_EQ(run({"betti", "--space", "P(1)", "--k", "1"}).code, 2);
    EXPECT_EQ(run({"betti", "--space", "P(1)", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Table, ConicsCsv) {
    const auto r = run({"table", "--d", "2", "--compactification", "S", "--k", "1", "--n", "3..5", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].rfind("k,n,d,compactification,dim,euler,b0,b2,b4", 0), 0u);
    // S(Gr(1,3),2) is P^5
    EXPECT_EQ(rows[1].rfind("1,3,2,S,5,6,1,1,1,1,1,1", 0), 0u);
    const std::size_t columns = std::count(rows[0].begin(), rows[0].end(), ',');
    for (const auto& row : rows) EXPECT_EQ(static_cast<std::size_t>(std::count(row.begin(), row.end(), ',')), columns);
}

TEST(Table, SkipsDegenerateCellsWithNote) {
    const auto r = run({"table", "--d", "3", "--compactification", "H", "--k", "1", "--n", "3..5", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["n"], 4);
    EXPECT_EQ(j[1]["n"], 5);
    EXPECT_NE(r.err.find("skipped H(Gr(1,3),3)"), std::string::npos);
    EXPECT_NE(r.err.find("Delta(X)"), std::string::npos);
}

TEST(Table, OutputFile) {
    const auto path = std::filesystem::temp_directory_path() / "curvebetti_table_test.csv";
    std::filesystem::remove(path);
    const auto r = run({"table", "--d", "2", "--compactification", "S", "--k", "1", "--n", "3..5", "--format", "csv",
                        "--out", path.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(),
              run({"table", "--d", "2", "--compactification", "S", "--k", "1", "--n", "3..5", "--format", "csv"}).out);
    std::filesystem::remove(path);
}

TEST(Table, BadRangeIsUsageError) {
    EXPECT_EQ(run({"table", "--d", "2", "--compactification", "S", "--k", "1", "--n", "5..3"}).code, 2);
    EXPECT_EQ(run({"table", "--d", "2", "--compactification", "S", "--k", "x", "--n", "3..5"}).code, 2);
    EXPECT_EQ(run({"table", "--d", "2", "--compactification", "S", "--k", "1"}).code, 2);
}

TEST(Verify, AllSuitesOnDefaultGrid) {
    const auto r = run({"verify", "--suite", "all"});
    EXPECT_EQ(r.code, 0) << r.out;
    const auto out = lines(r.out);
    ASSERT_FALSE(out.empty());
    EXPECT_EQ(out.back(), "381 checks, 0 failures");
}

TEST(Verify, SpecialReportsThreeFamilies) {
    const auto r = run({"verify", "--suite", "special"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("special identity families: 3"), std::string::npos);
}

TEST(Verify, SingleCellPipeline) {
    const auto r = run({"verify", "--grid", "k=1..1,n=4..4", "--suite", "pipeline"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out).back(), "3 checks, 0 failures");
}

TEST(Verify, JsonReport) {
    const auto path = std::filesystem::temp_directory_path() / "curvebetti_verify_report.json";
    const auto r = run({"verify", "--suite", "duality", "--grid", "k=1..2,n=k+1..5", "--report", path.string()});
    ASSERT_EQ(r.code, 0);
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["failures"], 0);
    EXPECT_EQ(j["checks"].size(), j["keys"].get<std::size_t>());
    std::filesystem::remove(path);
}

TEST(Verify, GridParsing) {
    EXPECT_EQ(cli::parse_grid("k=1..4,n=k+1..10").keys.size(), default_grid().keys.size());
    EXPECT_EQ(cli::parse_grid("k=1..1,n=4..4").keys.size(), 5u);
    EXPECT_EQ(cli::parse_grid(" k = 2..2 , n = k..4 ").keys, make_grid(2, 2, 3, 4).keys);
    EXPECT_THROW(cli::parse_grid("k=1..4"), usage_error);
    EXPECT_EQ(run({"verify", "--suite", "nonsense"}).code, 2);
    EXPECT_EQ(run({"verify", "--grid", "n=1..4"}).code, 2);
}
