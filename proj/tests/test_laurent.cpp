#include <fibinv/laurent.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace fibinv;

namespace {

LaurentPoly randomPoly(std::mt19937& rng, int maxTerms = 4, int expLo = -3, int expHi = 3)
{
    std::uniform_int_distribution<int> nTerms(0, maxTerms);
    std::uniform_int_distribution<int> exp(expLo, expHi);
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 3);
    LaurentPoly p;
    int k = nTerms(rng);
    for (int i = 0; i < k; ++i) p += LaurentPoly::monomial(Rational(num(rng), den(rng)), exp(rng));
    return p;
}

} // namespace

TEST_CASE("arithmetic basics")
{
    LaurentPoly t = LaurentPoly::t();
    LaurentPoly p = LaurentPoly::one() - t; // 1 - t
    LaurentPoly q = LaurentPoly::one() + t;
    CHECK((p * q) == (LaurentPoly::one() - t * t));
    CHECK((p + q) == LaurentPoly::monomial(2, 0));
    CHECK((p - p).isZero());
    CHECK(p.shifted(2) == LaurentPoly::monomial(1, 2) - LaurentPoly::monomial(1, 3));
    CHECK(LaurentPoly::t(3) * LaurentPoly::t(-3) == LaurentPoly::one());
}

TEST_CASE("commutativity and associativity on random inputs")
{
    std::mt19937 rng(12345);
    for (int i = 0; i < 200; ++i) {
        LaurentPoly a = randomPoly(rng), b = randomPoly(rng), c = randomPoly(rng);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("derivative and evaluation")
{
    // d/dt (3 - t - t^-1) = -1 + t^-2
    LaurentPoly p = LaurentPoly::monomial(3, 0) - LaurentPoly::t() - LaurentPoly::t(-1);
    CHECK(p.derivative() == LaurentPoly::monomial(-1, 0) + LaurentPoly::monomial(1, -2));
    CHECK(p.evaluate(1) == 1);
    CHECK(p.inverted() == p);
}

TEST_CASE("printing ascending exponents")
{
    LaurentPoly d = LaurentPoly::one() - LaurentPoly::monomial(3, 1) + LaurentPoly::monomial(1, 2);
    CHECK(d.str() == "1 - 3*t + t^2");
    LaurentPoly p = LaurentPoly::monomial(3, 0) - LaurentPoly::t() - LaurentPoly::t(-1);
    CHECK(p.str() == "-t^-1 + 3 - t");
    CHECK(LaurentPoly::zero().str() == "0");
    CHECK(LaurentPoly::monomial(Rational(-3, 2), 2).str() == "-3/2*t^2");
    CHECK(LaurentPoly::t(-2).str() == "t^-2");
}

TEST_CASE("polynomial division")
{
    LaurentPoly d = LaurentPoly::one() - LaurentPoly::monomial(3, 1) + LaurentPoly::monomial(1, 2);
    LaurentPoly q = LaurentPoly::one() + LaurentPoly::t();
    auto [quot, rem] = polyDivMod(d * q, d);
    CHECK(quot == q);
    CHECK(rem.isZero());
    CHECK(polyDivExact(d * q, q) == d);
    CHECK_THROWS_AS(polyDivExact(d + LaurentPoly::one(), d), ComputeError);
}

TEST_CASE("gcd via subresultant sequence")
{
    LaurentPoly oneMinusT = LaurentPoly::one() - LaurentPoly::t();
    LaurentPoly g = polyGcd(oneMinusT * oneMinusT, oneMinusT * (LaurentPoly::one() + LaurentPoly::t()));
    // primitive with positive leading coefficient: t - 1
    CHECK(polyDivExact(oneMinusT, g).isConstant());
    CHECK(polyGcd(oneMinusT, LaurentPoly::one() + LaurentPoly::t()).isConstant());

    std::mt19937 rng(777);
    for (int i = 0; i < 100; ++i) {
        LaurentPoly a = randomPoly(rng, 3, 0, 3), b = randomPoly(rng, 3, 0, 3), c = randomPoly(rng, 2, 0, 2);
        if (a.isZero() || b.isZero() || c.isZero()) continue;
        LaurentPoly g2 = polyGcd(a * c, b * c);
        // c divides the gcd
        auto [q2, r2] = polyDivMod(g2, c);
        CHECK(r2.isZero());
        // and the gcd divides both products
        CHECK(polyDivMod(a * c, g2).second.isZero());
        CHECK(polyDivMod(b * c, g2).second.isZero());
    }
}
