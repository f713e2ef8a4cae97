#include "unorm/config.hpp"
#include "unorm/system.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace unorm;

namespace {

NormSystem e1() {
    NormSystem s;
    const auto a = s.add_prime("3", {2}, {1, -1});
    const auto b = s.add_prime("5", {4}, {1, -1});
    s.set_frobenius(a, b, 3);
    s.set_frobenius(b, a, 1);
    return s;
}

NormSystem parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test");
}

const char* e1_config = R"(
# E1
[primes]
3 5
[orders]
3 = 2
5 = 4
[frobenius]
3 5 = 3
5 3 = 1
[poly]
3 = 1 -1
5 = 1 -1
)";

}  // namespace

TEST(System, GroupOrders) {
    const auto s = e1();
    const PrimeId a{0}, b{1};
    EXPECT_EQ(group_order(s, FormalProduct::prime(a) * FormalProduct::prime(b)), 8);
    EXPECT_EQ(s.order(a, 0), 1);
    EXPECT_THROW(s.order(a, 2), ConfigError);
    EXPECT_EQ(group_elements(s, FormalProduct::prime(b)).size(), 4U);
    EXPECT_EQ(s.poly_at_one(a), 0);
}

TEST(System, RestrictionFollowsTowers) {
    NormSystem s;
    const auto x = s.add_prime("x", {2, 6}, {1});
    const FormalProduct z2 = FormalProduct::prime(x, 2), z1 = FormalProduct::prime(x);
    GroupElement g{z2, {5}};
    EXPECT_EQ(restrict(s, g, z1).residues, std::vector<long>{1});
    EXPECT_TRUE(restrict(s, g, FormalProduct{}).is_identity());
}

TEST(System, TowerViolationIsRejected) {
    NormSystem s;
    s.add_prime("x", {4, 6}, {1});
    EXPECT_THROW(s.validate(), ConfigError);
}

TEST(System, FrobeniusPolynomialInGroupRing) {
    const auto s = e1();
    const PrimeId a{0}, b{1};
    // p(3; Fr^{-1}) on G_5 = 1 - sigma^{-3} = 1 - sigma
    const auto p = frobenius_poly(s, a, FormalProduct::prime(b));
    EXPECT_EQ(p.terms.coefficient({0}), 1);
    EXPECT_EQ(p.terms.coefficient({1}), -1);
    EXPECT_EQ(p.terms.size(), 2U);
    const auto n = norm_element(s, FormalProduct::prime(b), b);
    EXPECT_EQ(n.terms.size(), 4U);
}

TEST(Config, ParsesFileFormat) {
    const auto s = parse(e1_config);
    EXPECT_EQ(s, e1());
    EXPECT_EQ(parse(format_config(s)), s);
}

TEST(Config, ModulusSection) {
    const auto s = parse(std::string(e1_config) + "[modulus]\nM = 2\n");
    ASSERT_TRUE(s.modulus());
    EXPECT_EQ(*s.modulus(), 2);
}

TEST(Config, FieldPreciseErrors) {
    auto message = [](const std::string& text) {
        try {
            parse(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    const std::string base = "[primes]\na b\n[orders]\na = 2\nb = 3\n[poly]\na = 1\nb = 1\n";
    EXPECT_NE(message(base + "[frobenius]\na b = 1\n").find("missing entry 'b a'"), std::string::npos);
    EXPECT_NE(message(base + "[frobenius]\na b = x\nb a = 0\n").find("expected an integer"), std::string::npos);
    EXPECT_NE(message(base + "[frobenius]\na c = 1\n").find("unknown prime 'c'"), std::string::npos);
    EXPECT_NE(message("[primes]\na\n[orders]\na = 4 6\n[poly]\na = 1\n[frobenius]\n").find("tower violation"),
              std::string::npos);
    EXPECT_NE(message("[primes]\na\n[orders]\na = 2\n[frobenius]\n").find("missing section [poly]"),
              std::string::npos);
    EXPECT_NE(message("[colors]\n").find("unknown section"), std::string::npos);
    EXPECT_THROW(load_config("/nonexistent/file.cfg"), ConfigError);
}

TEST(Config, ParseTarget) {
    const auto s = e1();
    EXPECT_EQ(parse_z(s, "3*5"), FormalProduct::prime(PrimeId{0}) * FormalProduct::prime(PrimeId{1}));
    EXPECT_THROW(parse_z(s, "3^2*5"), ConfigError);  // exponent 2 is not configured
    const auto c = preset("cyclotomic:45");
    EXPECT_EQ(parse_z(c, "3^2*5"), FormalProduct::prime(PrimeId{0}, 2) * FormalProduct::prime(PrimeId{1}));
    EXPECT_EQ(format_z(s, parse_z(s, "5*3")), "3*5");
    EXPECT_TRUE(parse_z(s, "1").is_unit());
    EXPECT_THROW(parse_z(s, "7"), ConfigError);
    EXPECT_THROW(parse_z(s, "3^0"), ConfigError);
}

TEST(Preset, Cyclotomic15) {
    // (Z/3)^x = <2>, (Z/5)^x = <2>; 3 = 2^3 mod 5 and 5 = 2 mod 3
    const auto s = preset("cyclotomic:15");
    EXPECT_EQ(s, e1());
}

TEST(Preset, CyclotomicTowers) {
    const auto s = preset("cyclotomic:63");
    const PrimeId p3{0}, p7{1};
    EXPECT_EQ(s.tower(p3), (std::vector<long>{2, 6}));
    EXPECT_EQ(s.tower(p7), (std::vector<long>{6}));
    // primitive root 2 mod 9: 7 = 2^4 mod 9; primitive root 3 mod 7: 3 = 3^1
    EXPECT_EQ(s.frobenius_exponent(p7, p3), 4);
    EXPECT_EQ(s.frobenius_exponent(p3, p7), 1);
    EXPECT_THROW(preset("cyclotomic:16"), ConfigError);
}

TEST(Preset, TrivialAndPredistribution) {
    const auto t = preset("trivial:2x3");
    EXPECT_EQ(t.num_primes(), 2);
    EXPECT_EQ(t.poly(PrimeId{0}), std::vector<Int>{1});
    EXPECT_EQ(t.order(PrimeId{1}, 1), 3);
    const auto p = preset("predistribution:15");
    EXPECT_EQ(p.poly(PrimeId{0}), (std::vector<Int>{0, -1}));
    EXPECT_EQ(p.frobenius_exponent(PrimeId{0}, PrimeId{1}), 3);
    EXPECT_THROW(preset("nonsense:3"), ConfigError);
    EXPECT_THROW(load_system("bogus:1"), ConfigError);
}

TEST(Preset, Carlitz) {
    // F_3[T]: T and T+1 have residue fields F_3; T^2+1 gives F_9
    const auto s = preset("carlitz:3:T,T+1,T^2+1");
    EXPECT_EQ(s.order(PrimeId{2}, 1), 8);
    // T = -1 mod (T+1) and -1 generates F_3^x
    EXPECT_EQ(s.frobenius_exponent(PrimeId{0}, PrimeId{1}), 1);
    EXPECT_THROW(preset("carlitz:3:T^2+2"), ConfigError);  // T^2 - 1 is reducible
    EXPECT_THROW(preset("carlitz:4:T"), ConfigError);
}
