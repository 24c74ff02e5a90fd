#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "steenrod/cli.hpp"

using namespace steenrod;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "steenrod");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Outcome& r)
{
    return nlohmann::json::parse(r.out);
}

std::string fixture(const std::string& name)
{
    return std::string(STEENROD_DATA_DIR) + "/" + name;
}

} // namespace

TEST(Cli, NormalizeExample)
{
    const Outcome r = run({"normalize", "-p", "2", "Sq^2 Sq^2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "Sq^3 Sq^1\n");
}

TEST(Cli, NormalizeJsonAnywhere)
{
    for (const auto& args : {std::vector<std::string>{"--json", "normalize", "-p", "3", "P^1 P^1"},
                             std::vector<std::string>{"normalize", "-p", "3", "P^1 P^1", "--json"}}) {
        const Outcome r = run(args);
        ASSERT_EQ(r.code, 0);
        const auto j = json_of(r);
        EXPECT_EQ(j["schema"], "steenrod-report/1");
        EXPECT_EQ(j["command"], "normalize");
        EXPECT_EQ(j["normal_form"], "2 P^2");
        EXPECT_EQ(j["degree"], 8);
    }
}

TEST(Cli, ParseErrorExitsTwo)
{
    const Outcome text = run({"normalize", "-p", "2", "Sq^2 +"});
    EXPECT_EQ(text.code, 2);
    EXPECT_NE(text.err.find("1:7: syntax error"), std::string::npos);
    EXPECT_NE(text.err.find("        ^"), std::string::npos);

    const Outcome js = run({"normalize", "-p", "3", "Sq^1", "--json"});
    EXPECT_EQ(js.code, 2);
    const auto j = json_of(js);
    EXPECT_EQ(j["status"], "error");
    EXPECT_EQ(j["error"]["kind"], "semantic");
    EXPECT_EQ(j["error"]["column"], 1);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"normalize", "Sq^1"}).code, 2);
    EXPECT_EQ(run({"normalize", "-p", "4", "Sq^1"}).code, 2);
    EXPECT_EQ(run({"basis", "-p", "2", "-d", "-1"}).code, 2);
    EXPECT_EQ(run({"verify", "lemma-9"}).code, 2);
    EXPECT_EQ(run({"verify", "s4-family1", "-k", "12"}).code, 2);
    EXPECT_EQ(run({"verify", "claim1", "-p", "3", "--lambda", "4"}).code, 2);
    EXPECT_EQ(run({"verify", "candidate-16", "--cap", "20"}).code, 2);
    EXPECT_EQ(run({"--workers", "0", "basis", "-p", "2", "-d", "3"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, WorkerEnvironmentOverride)
{
    ASSERT_EQ(setenv("STEENROD_WORKERS", "many", 1), 0);
    EXPECT_EQ(run({"verify", "claim3", "-p", "3"}).code, 2);
    ASSERT_EQ(setenv("STEENROD_WORKERS", "3", 1), 0);
    const Outcome env = run({"verify", "claim1", "--json"});
    ASSERT_EQ(unsetenv("STEENROD_WORKERS"), 0);
    EXPECT_EQ(env.code, 0);
    EXPECT_EQ(env.out, run({"verify", "claim1", "--json"}).out);
}

TEST(Cli, Basis)
{
    const Outcome r = run({"basis", "-p", "2", "-d", "6"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "Sq^6\nSq^4 Sq^2\nSq^5 Sq^1\n");
    const auto j = json_of(run({"basis", "-p", "3", "-d", "5", "--json"}));
    EXPECT_EQ(j["dimension"], 2);
}

TEST(Cli, DecomposeRefusesPowersOfTwo)
{
    const Outcome r = run({"decompose", "-k", "16"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("power of two"), std::string::npos);
    EXPECT_EQ(json_of(run({"decompose", "-k", "16", "--json"}))["status"], "refused");

    const Outcome ok = run({"decompose", "-k", "6", "--json"});
    EXPECT_EQ(ok.code, 0);
    EXPECT_EQ(json_of(ok)["recombines"], true);
    EXPECT_EQ(run({"decompose", "-k", "0"}).code, 2);
}

TEST(Cli, Act)
{
    const std::string ring = fixture("candidate16.ring");
    Outcome r = run({"act", "-r", ring, "Sq^8 Sq^4", "y8"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "y4*x\n");
    EXPECT_EQ(run({"act", "-r", ring, "Sq^16", "x*y4"}).out, "y4*x^2\n");
    EXPECT_EQ(run({"act", "-r", ring, "Sq^1", "x"}).out, "0\n");
    EXPECT_EQ(run({"act", "-r", ring, "Sq^32", "x^2"}).out, "x^4\n");
    EXPECT_EQ(run({"act", "-r", ring, "Sq^32", "x^3"}).code, 2);
    EXPECT_EQ(run({"act", "-r", ring, "Sq^4", "z"}).code, 2);
    EXPECT_EQ(run({"act", "-r", ring, "P^1", "x"}).code, 2);
    EXPECT_EQ(run({"act", "-r", fixture("f3_u.ring"), "P^1", "u^2"}).out, "2 u^4\n");
    EXPECT_EQ(run({"act", "-r", "/nonexistent.ring", "Sq^1", "x"}).code, 2);
}

TEST(Cli, Periodicity)
{
    const std::vector<std::pair<std::string, int>> expected = {
        {"f2_x1.ring", 1}, {"f2_x2.ring", 2}, {"f2_x4.ring", 4}, {"f2_x8.ring", 8},
        {"f2_x16.ring", 16}, {"s1_cp.ring", 2}, {"t2_hp.ring", 4}, {"candidate16.ring", 16}};
    for (const auto& [file, k] : expected) {
        SCOPED_TRACE(file);
        const Outcome r = run({"periodicity", "-r", fixture(file), "--min", "--json"});
        EXPECT_EQ(r.code, 0);
        EXPECT_EQ(json_of(r)["minimal_period"], k);
    }
    const Outcome all = run({"periodicity", "-r", fixture("f2_x2.ring"), "--json"});
    const auto j = json_of(all);
    ASSERT_EQ(j["searches"].size(), 2u);
    EXPECT_EQ(j["searches"][1]["k"], 4);
    EXPECT_EQ(j["searches"][1]["elements"][0], "x^2");
}

TEST(Cli, PeriodicityNoneFound)
{
    const auto tmp = std::filesystem::temp_directory_path() / "steenrod_free.ring";
    {
        std::ofstream out(tmp);
        out << "[ring]\nprime = 2\ncap = 8\n[generators]\nx = 1\ny = 1\n";
    }
    const Outcome r = run({"periodicity", "-r", tmp.string(), "--min"});
    std::filesystem::remove(tmp);
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("minimal period: none"), std::string::npos);
}

TEST(Cli, Coherence)
{
    const Outcome ok = run({"coherence", "-r", fixture("t2_hp.ring"), "--json"});
    EXPECT_EQ(ok.code, 0);
    EXPECT_EQ(json_of(ok)["violations"].size(), 0u);
    EXPECT_EQ(run({"coherence", "-r", fixture("t2_hp.ring"), "--limit", "99"}).code, 2);

    const auto tmp = std::filesystem::temp_directory_path() / "steenrod_bad_action.ring";
    {
        std::ofstream out(tmp);
        out << "[ring]\nprime = 2\ncap = 12\n[generators]\nx = 2\ny = 3\n[action]\nSq^1(x) = y\nSq^1(y) = x^2\n"
               "Sq^2(y) = 0\n";
    }
    const Outcome bad = run({"coherence", "-r", tmp.string()});
    std::filesystem::remove(tmp);
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.out.find("FAIL"), std::string::npos);
}

TEST(Cli, VerifyCandidateJson)
{
    const Outcome r = run({"verify", "candidate-16", "--json"});
    EXPECT_EQ(r.code, 0);
    const auto j = json_of(r);
    EXPECT_EQ(j["status"], "pass");
    ASSERT_EQ(j["reports"].size(), 1u);
    EXPECT_EQ(j["reports"][0]["params"]["cap"], 64);
    EXPECT_GT(j["reports"][0]["checks"].size(), 8u);
    EXPECT_FALSE(j["reports"][0].contains("seconds"));
    EXPECT_TRUE(json_of(run({"verify", "candidate-16", "--json", "--timing"}))["reports"][0].contains("seconds"));
}

TEST(Cli, VerifyDispatch)
{
    EXPECT_EQ(run({"verify", "power-of-two", "--k-max", "20"}).code, 0);
    EXPECT_EQ(run({"verify", "s4-family1", "-k", "8", "16"}).code, 0);
    EXPECT_EQ(run({"verify", "s4-family2", "-k", "32"}).code, 0);
    EXPECT_EQ(run({"verify", "claim2", "-p", "7", "--lambda", "3", "-a", "1"}).code, 0);
    EXPECT_EQ(run({"verify", "final-coeff", "-p", "5", "--lambda", "2"}).code, 0);
    EXPECT_EQ(run({"verify", "s3-discussion"}).code, 0);
    EXPECT_EQ(run({"verify", "s3-discussion", "--model", "extra-degree-4"}).code, 1);
    EXPECT_EQ(run({"verify", "s3-discussion", "--model", "octonions"}).code, 2);
    const auto j = json_of(run({"verify", "claim3", "--json"}));
    EXPECT_EQ(j["summary"]["total"], 17);
}

TEST(Cli, TextAndJsonAgreeOnStatus)
{
    const std::vector<std::vector<std::string>> commands = {
        {"verify", "claim1", "-p", "3"},
        {"verify", "s3-discussion", "--model", "extra-degree-4"},
        {"verify", "s3-discussion"},
        {"decompose", "-k", "32"},
        {"coherence", "-r", fixture("s1_cp.ring")},
        {"periodicity", "-r", fixture("f2_x4.ring"), "--min"},
    };
    for (auto args : commands) {
        const Outcome text = run(args);
        args.push_back("--json");
        const Outcome js = run(args);
        EXPECT_EQ(text.code, js.code);
        const std::string status = json_of(js)["status"];
        const bool text_pass = text.out.find("FAIL") == std::string::npos && text.code == 0;
        EXPECT_EQ(text_pass, status == "pass" || status == "ok") << status;
    }
}

TEST(Cli, DeterministicAcrossWorkerCounts)
{
    const Outcome one = run({"verify", "final-coeff", "--json", "--workers", "1"});
    const Outcome four = run({"verify", "final-coeff", "--json", "--workers", "4"});
    EXPECT_EQ(one.code, 0);
    EXPECT_EQ(one.out, four.out);
    EXPECT_EQ(run({"verify", "candidate-16", "--workers", "4"}).out, run({"verify", "candidate-16"}).out);
}
