#include "unorm/config.hpp"
#include "unorm/verify.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

using namespace unorm;

namespace {

const std::string cli = UNORM_CLI_PATH;
const std::string data = UNORM_TEST_DATA;

NormSystem parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.conf");
}

std::string config_error(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

const char* e1_text = R"([primes]
3 5
[orders]
3 = 2
5 = 4
[frobenius]
3 5 = 3   # 3 = 2^3 mod 5
5 3 = 1
[poly]
3 = 1 -1
5 = 1 -1
)";

int run(const std::string& args, const std::string& out = "/dev/null") {
    const int status = std::system((cli + " " + args + " > " + out + " 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Status status_of(const std::vector<CheckResult>& rs, const std::string& name) {
    for (const auto& r : rs)
        if (r.name == name) return r.status;
    ADD_FAILURE() << "no check named " << name;
    return Status::fail;
}

}  // namespace

TEST(Config, ParsesAndMatchesPreset) {
    const auto s = parse(e1_text);
    const auto p = preset("cyclotomic:15");
    EXPECT_EQ(format_config(s), format_config(p));
    EXPECT_FALSE(s.modulus());
}

TEST(Config, FormatRoundTrip) {
    for (const char* name : {"cyclotomic:45", "predistribution:35", "trivial:2x3x4", "carlitz:3:T,T+1,T^2+1"}) {
        const auto s = preset(name);
        EXPECT_EQ(format_config(parse(format_config(s))), format_config(s)) << name;
    }
}

TEST(Config, LoadsFileWithModulus) {
    const auto s = load_system(data + "/mixed.conf");
    ASSERT_TRUE(s.modulus());
    EXPECT_EQ(*s.modulus(), 2);
    EXPECT_EQ(s.poly(PrimeId{0}), (std::vector<Int>{3, -1}));
    EXPECT_EQ(s.poly_at_one(PrimeId{0}), 2);
}

TEST(Config, FieldPreciseErrors) {
    EXPECT_NE(config_error("[primes]\n3 5\n[orders]\n3 = 2\n5 = 4\n[frobenius]\n3 5 = 3\n[poly]\n3 = 1 -1\n5 = 1 -1\n")
                  .find("missing entry '5 3'"),
              std::string::npos);
    EXPECT_NE(config_error("[primes]\n3\n[orders]\n3 = two\n[frobenius]\n[poly]\n3 = 1\n").find("test.conf:4: [orders] 3"),
              std::string::npos);
    EXPECT_NE(config_error("[primes]\n3\n[orders]\n3 = 2\n[poly]\n3 = 1\n").find("missing section [frobenius]"),
              std::string::npos);
    EXPECT_NE(config_error("[primes]\n3\n[colors]\n").find("unknown section"), std::string::npos);
    EXPECT_FALSE(config_error("[primes]\n3\n[orders]\n3 = 4 6\n[frobenius]\n[poly]\n3 = 1\n").empty());
    EXPECT_FALSE(config_error("[primes]\n3\n[orders]\n3 = 2\n[frobenius]\n[poly]\n7 = 1\n").empty());
    EXPECT_THROW(load_config(data + "/does-not-exist.conf"), ConfigError);
}

TEST(Config, Presets) {
    const auto c15 = preset("cyclotomic:15");
    EXPECT_EQ(c15.name(PrimeId{0}), "3");
    EXPECT_EQ(c15.order(PrimeId{0}, 1), 2);
    EXPECT_EQ(c15.order(PrimeId{1}, 1), 4);
    EXPECT_EQ(c15.frobenius_exponent(PrimeId{0}, PrimeId{1}), 3);
    EXPECT_EQ(c15.frobenius_exponent(PrimeId{1}, PrimeId{0}), 1);
    EXPECT_EQ(preset("trivial:2x3").poly(PrimeId{1}), std::vector<Int>{1});
    EXPECT_EQ(preset("predistribution:15").poly(PrimeId{0}), (std::vector<Int>{0, -1}));
    EXPECT_THROW(preset("cyclotomic:16"), ConfigError);
    EXPECT_THROW(preset("bogus:3"), ConfigError);
    EXPECT_THROW(load_system("gaussian:5"), ConfigError);
}

TEST(Config, TargetSyntax) {
    const auto s = preset("cyclotomic:45");
    EXPECT_EQ(parse_z(s, "3^2*5"), FormalProduct::from_exponents({2, 1}));
    EXPECT_EQ(parse_z(s, "5 * 3"), FormalProduct::from_exponents({1, 1}));
    EXPECT_EQ(parse_z(s, "1"), FormalProduct{});
    EXPECT_EQ(format_z(s, parse_z(s, "3^2*5")), "3^2*5");
    EXPECT_THROW(parse_z(s, "7"), ConfigError);
    EXPECT_THROW(parse_z(s, "3^3"), ConfigError);
    EXPECT_THROW(parse_z(s, "3^0"), ConfigError);
    const auto t = preset("trivial:2x3");
    EXPECT_EQ(parse_z(t, "x1*x2"), FormalProduct::from_exponents({1, 1}));
}

TEST(Run, AllChecksPassOnE1) {
    RunSpec spec;
    spec.z = FormalProduct::from_exponents({1, 1});
    spec.modulus = Int(2);
    const auto rs = run_checks(preset("cyclotomic:15"), spec);
    ASSERT_EQ(rs.size(), all_checks().size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
        EXPECT_EQ(rs[i].name, all_checks()[i]);
        EXPECT_EQ(rs[i].status, Status::pass) << rs[i].name;
    }
}

TEST(Run, InapplicableChecksAreSkipped) {
    RunSpec spec;
    spec.z = FormalProduct::from_exponents({1, 1});
    spec.checks = {"theorem_b", "theorem_a"};
    const auto rs = run_checks(preset("trivial:2x3"), spec);
    EXPECT_EQ(status_of(rs, "theorem_b"), Status::skipped);
    EXPECT_EQ(status_of(rs, "theorem_a"), Status::skipped);
    spec.modulus = Int(3);
    EXPECT_EQ(status_of(run_checks(preset("cyclotomic:15"), spec), "theorem_a"), Status::skipped);
}

TEST(Run, RejectsBadSpecs) {
    RunSpec spec;
    spec.z = FormalProduct::from_exponents({1, 1});
    spec.checks = {"nonsense"};
    EXPECT_THROW(run_checks(preset("cyclotomic:15"), spec), ConfigError);
    spec.checks = {};
    spec.z = FormalProduct::from_exponents({1, 1, 1});
    EXPECT_THROW(run_checks(preset("cyclotomic:15"), spec), ConfigError);
}

TEST(Run, FailuresAreReported) {
    CheckResult r{"x"};
    r.require(true, "fine");
    EXPECT_EQ(r.status, Status::pass);
    r.require(false, "broken");
    EXPECT_EQ(r.status, Status::fail);
    EXPECT_EQ(r.notes, std::vector<std::string>{"broken"});
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("verify --system cyclotomic:15 --z 3*5 --modulus 2"), 0);
    EXPECT_EQ(run("verify --system trivial:2x3 --z x1*x2 --checks theorem_b"), 0);
    EXPECT_EQ(run("verify --system " + data + "/mixed.conf --z 5*7"), 0);
    EXPECT_EQ(run("cohomology --system cyclotomic:15 --z 3*5 --modulus 2"), 0);
    EXPECT_EQ(run("basis --system cyclotomic:15 --z 3*5"), 0);
    EXPECT_EQ(run("presets"), 0);
    EXPECT_EQ(run("verify --system cyclotomic:15 --z 3*7"), 2);
    EXPECT_EQ(run("verify --system cyclotomic:15 --z 3*5 --checks nonsense"), 2);
    EXPECT_EQ(run("verify --system " + data + "/missing.conf --z 3"), 2);
    EXPECT_EQ(run("cohomology --system cyclotomic:15 --z 3*5 --modulus 0"), 2);
}

TEST(Cli, ReportsAreDeterministic) {
    const std::string dir = ::testing::TempDir();
    const std::string a = dir + "unorm_report_a.json", b = dir + "unorm_report_b.json";
    const std::string args = "verify --system cyclotomic:15 --z 3*5 --modulus 2 --format json --out ";
    ASSERT_EQ(run(args + a), 0);
    ASSERT_EQ(run(args + b), 0);
    const auto first = slurp(a);
    EXPECT_FALSE(first.empty());
    EXPECT_EQ(first, slurp(b));
    EXPECT_NE(first.find("\"summary\""), std::string::npos);
    EXPECT_NE(first.find("\"theorem_a\""), std::string::npos);
}

TEST(Cli, SkippedCheckInJson) {
    const std::string out = ::testing::TempDir() + "unorm_skip.json";
    ASSERT_EQ(run("verify --system trivial:2x3 --z x1*x2 --checks theorem_b --format json --out " + out), 0);
    const auto doc = slurp(out);
    EXPECT_NE(doc.find("\"skipped\""), std::string::npos);
    EXPECT_NE(doc.find("inapplicable"), std::string::npos);
}
