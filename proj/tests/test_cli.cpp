#include "onslab/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace onslab::cli;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "onslab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    Result r;
    r.code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string temp_path(const std::string& name) {
    const char* dir = std::getenv("TMPDIR");
    return std::string(dir ? dir : "/tmp") + "/onslab_test_" + name;
}

} // namespace

TEST_CASE("cli: gram of the cosine system is the identity") {
    const auto r = run_cli({"gram", "--system", "cosine", "--n", "8"});
    CHECK(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 65);
    CHECK(rows[0] == std::vector<std::string>{"j", "k", "inner_product", "deviation"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][3]) < 1e-8);
    CHECK(r.err.find("invariants_hold = true") != std::string::npos);
}

TEST_CASE("cli: moments of the reflected cosine system vanish") {
    const auto r = run_cli({"theorem4-moments", "--base", "cosine", "--n", "32"});
    CHECK(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 33);
    CHECK(rows[0][0] == "n");
    CHECK(rows[0][1] == "c_q");
    CHECK(rows[0][2] == "c_p");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::abs(std::stod(rows[i][1])) < 1e-9);
        CHECK(std::abs(std::stod(rows[i][2])) < 1e-9);
    }
}

TEST_CASE("cli: Haar M sweep in JSON is classified bounded") {
    const auto r = run_cli({"mn-sweep", "--system", "haar", "--x", "0.3", "--n-max", "256", "--format", "json"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.contains("config"));
    CHECK(doc["config"]["system"] == "haar");
    CHECK(doc["rows"].size() == 255);
    CHECK(doc["rows"][0].contains("M_n"));
    CHECK(doc["rows"][0].contains("running_max"));
    CHECK(doc["summary"]["classification"] == "bounded");
    CHECK(doc["summary"]["sweeps"][0]["classification"] == "bounded");
}

TEST_CASE("cli: usage errors name the field and exit 1") {
    auto r = run_cli({"gram", "--system", "walsh"});
    CHECK(r.code == 1);
    CHECK(r.err.find("system") != std::string::npos);
    CHECK(r.err.find('\n') == r.err.size() - 1);

    r = run_cli({"partial-sums", "--function", "sin"});
    CHECK(r.code == 1);
    CHECK(r.err.find("function") != std::string::npos);

    r = run_cli({"lemma4", "--system", "cosine"});
    CHECK(r.code == 1);
    CHECK(r.err.find("function") != std::string::npos);

    r = run_cli({"lemma4", "--function", "g-compressed", "--n-max", "2", "--x", "1.5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("x:") != std::string::npos);

    r = run_cli({"frobnicate"});
    CHECK(r.code == 1);
    CHECK(r.err.find("command") != std::string::npos);

    r = run_cli({"gram", "--format", "xml"});
    CHECK(r.code == 1);
    CHECK(r.err.find("format") != std::string::npos);

    r = run_cli({"eq11", "--function", "id", "--eq11-upper", "n+1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("eq11-upper") != std::string::npos);

    r = run_cli({"theorem3-extremal", "--grid-size", "10"});
    CHECK(r.code == 1);
    CHECK(r.err.find("grid-size") != std::string::npos);

    r = run_cli({"gram", "--n", "abc"});
    CHECK(r.code == 1);
    r = run_cli({});
    CHECK(r.code == 1);
}

TEST_CASE("cli: failed invariant exits 2") {
    const auto r = run_cli({"gram", "--system", "cosine", "--n", "4", "--tol", "1e-30"});
    CHECK(r.code == 2);
    CHECK(r.err.find("invariants_hold = false") != std::string::npos);
}

TEST_CASE("cli: help lists every command's columns") {
    const auto r = run_cli({"--help"});
    CHECK(r.code == 0);
    for (const char* text : {"gram", "bessel", "lemma1", "lemma3", "lemma4", "eq11", "mn-sweep", "partial-sums",
                             "e-phi", "theorem2", "theorem3-extremal", "theorem4-moments", "theorem5", "theorem6",
                             "x,n,M_n,running_max", "n,lhs,rhs,residual,residual_alt"}) {
        CHECK(r.out.find(text) != std::string::npos);
    }
}

TEST_CASE("cli: repeated runs are byte-identical, also across worker counts") {
    const std::vector<std::string> args{"lemma4", "--system", "haar", "--function", "cos-bump", "--n-max", "12",
                                        "--format", "json"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);

    const char* previous = std::getenv("ONS_LAB_THREADS");
    const std::string saved = previous ? previous : "";
    setenv("ONS_LAB_THREADS", "1", 1);
    const auto one = run_cli(args);
    setenv("ONS_LAB_THREADS", "4", 1);
    const auto four = run_cli(args);
    if (previous) {
        setenv("ONS_LAB_THREADS", saved.c_str(), 1);
    } else {
        unsetenv("ONS_LAB_THREADS");
    }
    CHECK(one.out == four.out);
    CHECK(one.out == a.out);
}

TEST_CASE("cli: numbers carry 17 significant digits") {
    const auto r = run_cli({"partial-sums", "--system", "cosine", "--function", "half-square", "--n-max", "3"});
    CHECK(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 4);
    const std::string c1 = rows[1][2];
    // √2/(4π²) printed round-trip.
    CHECK(std::stod(c1) == doctest::Approx(std::sqrt(2.0) / (4 * M_PI * M_PI)).epsilon(1e-12));
    std::string digits;
    for (char ch : c1.substr(0, c1.find('e'))) {
        if (ch >= '0' && ch <= '9') digits += ch;
    }
    while (!digits.empty() && digits.front() == '0') digits.erase(digits.begin());
    CHECK(digits.size() == 17);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", std::stod(c1));
    CHECK(c1 == buf);
}

TEST_CASE("cli: config file, flags take precedence") {
    const auto path = temp_path("config.ini");
    {
        std::ofstream cfg(path);
        cfg << "system=haar\nn=4\nformat=json\n";
    }
    auto r = run_cli({"gram", "--config", path});
    CHECK(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["config"]["system"] == "haar");
    CHECK(doc["rows"].size() == 16);

    r = run_cli({"gram", "--config", path, "--n", "3", "--system", "rademacher"});
    CHECK(r.code == 0);
    doc = nlohmann::json::parse(r.out);
    CHECK(doc["config"]["system"] == "rademacher");
    CHECK(doc["rows"].size() == 9);
    std::remove(path.c_str());

    r = run_cli({"gram", "--config", temp_path("missing.ini")});
    CHECK(r.code == 1);
}

TEST_CASE("cli: output file receives the table") {
    const auto path = temp_path("out.csv");
    const auto r = run_cli({"bessel", "--system", "haar", "--n-max", "16", "--output", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto rows = parse_csv(ss.str());
    CHECK(rows.size() == 34);
    CHECK(rows[0] == std::vector<std::string>{"u", "n", "bessel_sum", "slack"});
    std::remove(path.c_str());
}

TEST_CASE("cli: every command runs with small settings") {
    const std::vector<std::vector<std::string>> cases{
        {"gram", "--system", "reflect(haar)", "--n", "6"},
        {"bessel", "--system", "reflect2(cosine)", "--n-max", "32"},
        {"lemma1", "--system", "haar", "--x", "0.3,0.6", "--n-max", "64"},
        {"lemma3", "--system", "cosine", "--n", "8"},
        {"lemma4", "--system", "cosine", "--function", "half-square", "--n-max", "8"},
        {"eq11", "--function", "half-square", "--weight", "q-kernel", "--kernel-n", "8", "--x", "0.3"},
        {"eq11", "--function", "id", "--n", "4"},
        {"mn-sweep", "--system", "cosine", "--x", "0.3", "--n", "16"},
        {"partial-sums", "--system", "rademacher", "--n-max", "8"},
        {"e-phi", "--system", "reflect2(cosine)", "--function", "id", "--n-max", "32"},
        {"theorem2", "--system", "cosine", "--n-max", "32"},
        {"theorem3-extremal", "--n", "8", "--grid-size", "128"},
        {"theorem4-moments", "--base", "haar", "--n-max", "8"},
        {"theorem5", "--x", "0.3", "--n-max", "32"},
        {"theorem6", "--x", "0.3", "--n-max", "32"},
    };
    for (const auto& args : cases) {
        INFO(args.front());
        const auto r = run_cli(args);
        CHECK(r.code == 0);
        CHECK_FALSE(r.out.empty());
        auto json_args = args;
        json_args.insert(json_args.end(), {"--format", "json"});
        const auto j = run_cli(json_args);
        CHECK(j.code == 0);
        const auto doc = nlohmann::json::parse(j.out);
        CHECK(doc["rows"].size() + 1 == parse_csv(r.out).size());
        CHECK(doc["summary"].contains("invariants_hold"));
    }
}

TEST_CASE("cli: the cell sum stopping one early is reported, and fails as an identity") {
    const auto r = run_cli({"eq11", "--function", "half-square", "--weight", "q-kernel", "--eq11-upper", "n-1"});
    CHECK(r.code == 2);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][4]) < 1e-6);
}
