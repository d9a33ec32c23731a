#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "subsel/cli.hpp"
#include "subsel/error.hpp"
#include "subsel/linalg.hpp"
#include "subsel/report.hpp"

using namespace subsel;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name, const std::string& body) {
    const auto dir = std::filesystem::temp_directory_path() / "subsel_cli_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / name).string();
    std::ofstream(path) << body;
    return path;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

TEST_CASE("matrix parsing") {
    const auto m = report::parse_matrix("1, 2.5,-3\n4,5e-1,6\n\n");
    CHECK(m.rows == 2);
    CHECK(m.cols == 3);
    CHECK(m.data == std::vector<double>{1, 2.5, -3, 4, 0.5, 6});
    CHECK(report::parse_matrix(R"({"rows": 1, "cols": 2, "data": [3, 4]})").data == std::vector<double>{3, 4});
    CHECK(report::parse_matrix(report::to_csv(m)) == m);
    CHECK_THROWS_AS(report::parse_matrix("1,2\n3\n"), InputError);
    CHECK_THROWS_AS(report::parse_matrix("1,x\n"), InputError);
    CHECK_THROWS_AS(report::parse_matrix(""), InputError);
    CHECK_THROWS_AS(report::parse_matrix(R"({"rows": 2, "cols": 2, "data": [1, 2, 3]})"), InputError);
}

TEST_CASE("select on the identity") {
    const auto path = scratch("id.csv", "1,0,0\n0,1,0\n0,0,1\n");
    const auto r = run({"select", "--input", path, "--k", "2"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("subset") == json::array({0, 1}));
    CHECK(j.at("sigma_min").get<double>() == doctest::Approx(1.0).epsilon(1e-14));
    for (const char* key : {"sigma_min_sq", "root_certificate", "bound_certificate", "alpha", "alpha_branch",
                            "epsilon", "wall_time_ms"})
        CHECK(j.contains(key));
}

TEST_CASE("select report round trips through JSON and verify") {
    const auto a = linalg::random_gaussian_matrix(3, 9, 5);
    const auto path = scratch("g39.csv", report::to_csv(report::from_target(a)));
    const auto r = run({"select", "--input", path, "--k", "4"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    const auto rep = report::select_report_from_json(j);
    CHECK(report::select_report_from_json(json::parse(report::to_json(rep).dump())) == rep);
    CHECK(report::to_json(rep) == j);

    const auto rep_path = scratch("g39.json", r.out);
    const auto v = run({"verify", "--report", rep_path});
    CHECK(v.code == 0);
    CHECK(v.out.find("FAIL") == std::string::npos);

    // Same report checked against the matrix file instead of the embedded copy.
    CHECK(run({"verify", "--report", rep_path, "--input", path}).code == 0);
    CHECK(run({"verify", "--input", rep_path}).code == 0);
}

TEST_CASE("tampered reports fail verification") {
    const auto r = run({"select", "--n", "3", "--m", "10", "--seed", "2", "--k", "3"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    const auto original = j.at("subset").get<std::vector<std::size_t>>();
    std::vector<std::size_t> other;
    for (std::size_t c = 0; other.size() < 3; ++c)
        if (std::find(original.begin(), original.end(), c) == original.end()) other.push_back(c);
    j["subset"] = other;
    CHECK(run({"verify", "--report", scratch("tampered.json", j.dump())}).code == 1);

    j["subset"] = json::array({0, 0, 1});
    CHECK(run({"verify", "--report", scratch("dup.json", j.dump())}).code == 1);
}

TEST_CASE("select errors map to exit codes") {
    CHECK(run({"select", "--input", scratch("ragged.csv", "1,2\n3\n"), "--k", "1"}).code == 2);
    CHECK(run({"select", "--input", scratch("ok.csv", "1,2\n3,4\n"), "--k", "3"}).code == 2);
    CHECK(run({"select", "--input", "/nonexistent/matrix.csv", "--k", "1"}).code == 2);
    CHECK(run({"select", "--k", "1"}).code == 2);
    CHECK(run({"select", "--n", "2", "--m", "4", "--k", "2", "--epsilon", "0.9"}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("bound command") {
    const auto r = run({"bound", "--m", "10", "--n", "3", "--k", "3"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(std::abs(j.at("baselines").at("hong_pan").get<double>() - 1.0 / 22.0) <= 1e-15);
    CHECK(report::to_json(report::bound_report_from_json(j)) == j);

    for (int n = 1; n <= 6; ++n) {
        const auto s = std::to_string(n);
        const auto b = json::parse(run({"bound", "--m", std::to_string(n + 1), "--n", s, "--k", s}).out);
        CHECK(std::abs(b.at("main_bound").get<double>() - 1.0 / (n + 1)) <= 1e-15);
        CHECK(b.at("alpha").get<double>() == 1.0);
    }

    const auto x = json::parse(run({"bound", "--m", "12", "--n", "4", "--k", "6"}).out);
    CHECK(x.at("dominance").at("main_gt_xu21").get<bool>());

    const auto csv = lines(run({"bound", "--m", "12", "--n", "4", "--k", "6", "--format", "csv"}).out);
    REQUIRE(csv.size() == 2);
    CHECK(csv[0] == report::bound_csv_header());
    CHECK(run({"bound", "--m", "3", "--n", "3", "--k", "1"}).code == 2);
    CHECK(run({"bound", "--m", "5", "--n", "2"}).code == 2);
}

TEST_CASE("sweep command") {
    const auto r = run({"sweep", "--grid", "6:12,4:4,4:4"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 8);
    const auto header = fields(rows[0]);
    const auto col = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
    };
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = fields(rows[i]);
        CHECK(std::stod(f[col("hong_pan")]) < std::stod(f[col("main_bound")]));
    }

    const auto ones = lines(run({"sweep", "--grid", "2:9,1:1,1:1"}).out);
    for (std::size_t i = 1; i < ones.size(); ++i) {
        const auto f = fields(ones[i]);
        CHECK(std::abs(std::stod(f[col("main_bound")]) - 1.0 / std::stod(f[col("m")])) <= 1e-15);
    }

    // Header is fixed.
    CHECK(rows[0] == lines(run({"sweep", "--grid", "3:3,1:1,1:2"}).out)[0]);
    CHECK(rows[0] ==
          "m,n,k,alpha,alpha_branch,main_bound,explicit_bound,hong_pan,hong_pan_n2,greedy,xu21,spielman17,"
          "main_gt_hong_pan,main_gt_hong_pan_n2,main_gt_greedy,main_gt_xu21,main_gt_spielman17");

    CHECK(run({"sweep", "--grid", "5:4,1:2,1:2"}).code == 2);
    CHECK(run({"sweep", "--grid", "3:3,3:3,1:2"}).code == 2);
    CHECK(run({"sweep", "--grid", "3:5,1:2"}).code == 2);
}

TEST_CASE("identity-check command") {
    const auto r = run({"identity-check"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("364 cases") != std::string::npos);
}

TEST_CASE("verify on a bare matrix") {
    const auto path = scratch("bare.csv", report::to_csv(report::from_target(linalg::random_gaussian_matrix(3, 8, 6))));
    const auto r = run({"verify", "--input", path, "--k", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("optimum_dominates") != std::string::npos);
    CHECK(run({"verify", "--input", path}).code == 2);
}

TEST_CASE("floating point output carries 17 significant digits") {
    CHECK(report::format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(report::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
