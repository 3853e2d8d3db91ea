#include <fibinv/factor.hpp>
#include <fibinv/ratfun.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <random>

using namespace fibinv;

namespace {

// long-division series oracle: coefficients of num/den with den(0) != 0,
// independent of RatFun::seriesWindow
std::vector<Rational> longDivisionSeries(const LaurentPoly& num, const LaurentPoly& den, int upTo)
{
    REQUIRE(den.coeff(0) != 0);
    std::vector<Rational> c(static_cast<size_t>(upTo) + 1, Rational(0));
    LaurentPoly rem = num;
    for (int k = 0; k <= upTo; ++k) {
        Rational v = rem.coeff(k) / den.coeff(0);
        c[static_cast<size_t>(k)] = v;
        rem -= den.shifted(k).scaled(v);
    }
    return c;
}

// 2x2 integer matrix powers, independent of the linalg module
std::array<long, 4> mul2(const std::array<long, 4>& a, const std::array<long, 4>& b)
{
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

long tracePow2(std::array<long, 4> a, int n)
{
    std::array<long, 4> p = {1, 0, 0, 1};
    for (int i = 0; i < n; ++i) p = mul2(p, a);
    return p[0] + p[3];
}

RatFun randomRatFun(std::mt19937& rng)
{
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::uniform_int_distribution<int> exp(-2, 2);
    std::uniform_int_distribution<int> deg(0, 2);
    auto poly = [&](bool unitConstant) {
        LaurentPoly p = unitConstant ? LaurentPoly::one() : LaurentPoly::zero();
        int d = deg(rng);
        for (int i = 0; i <= d; ++i) p += LaurentPoly::monomial(coeff(rng), unitConstant ? i + 1 : exp(rng));
        return p;
    };
    LaurentPoly den = poly(true);
    LaurentPoly num = poly(false);
    return RatFun(num, den);
}

const LaurentPoly kD = LaurentPoly::one() - LaurentPoly::monomial(3, 1) + LaurentPoly::monomial(1, 2);

} // namespace

TEST_CASE("field arithmetic")
{
    RatFun a(LaurentPoly::one(), LaurentPoly::one() - LaurentPoly::t());
    RatFun b(LaurentPoly::one(), LaurentPoly::one() + LaurentPoly::t());
    RatFun sum = a + b;
    CHECK(sum == RatFun(LaurentPoly::monomial(2, 0), LaurentPoly::one() - LaurentPoly::monomial(1, 2)));
    CHECK(sum.str() == "2/(1 - t^2)");

    CHECK(RatFun::t() * RatFun::t(-1) == RatFun::one());

    RatFun c(LaurentPoly::one() - LaurentPoly::t(), kD);
    CHECK(c * RatFun(kD) == RatFun(LaurentPoly::one() - LaurentPoly::t()));

    CHECK_THROWS_AS(a / RatFun::zero(), ComputeError);
}

TEST_CASE("canonical form and printing")
{
    RatFun c(LaurentPoly::one() - LaurentPoly::t(), kD);
    CHECK(c.str() == "(1 - t)/(1 - 3*t + t^2)");
    // reduction kills common factors
    LaurentPoly oneMinusT = LaurentPoly::one() - LaurentPoly::t();
    RatFun r(oneMinusT * oneMinusT, oneMinusT * (LaurentPoly::one() + LaurentPoly::t()));
    CHECK(r == RatFun(oneMinusT, LaurentPoly::one() + LaurentPoly::t()));
    // denominator t-powers move to the numerator
    RatFun s(LaurentPoly::one(), LaurentPoly::t(2));
    CHECK(s == RatFun::t(-2));
    CHECK(s.str() == "t^-2");
    CHECK(RatFun::zero().str() == "0");
}

TEST_CASE("parser round trips")
{
    for (const char* text : {"(1 - t)/(1 - 3*t + t^2)", "t^-2", "0", "-t^-1 + 3 - t", "2/(1 - t^2)",
                             "(-1 - t)/(1 - t)", "3/2*t^2", "t/(1 - 3*t + t^2)"}) {
        RatFun f = parseRatFun(text);
        CHECK(f.str() == text);
        CHECK(parseRatFun(f.str()) == f);
    }
    // alternate spellings
    CHECK(parseRatFun("t*t*t") == RatFun::t(3));
    CHECK(parseRatFun("(1-t)^2") == RatFun(parseLaurent("1 - 2*t + t^2")));
    CHECK(parseRatFun("1/(1-t)") == RatFun(LaurentPoly::one(), LaurentPoly::one() - LaurentPoly::t()));
    CHECK(parseRatFun(" - t ^ -1 ") == RatFun(LaurentPoly::monomial(-1, -1)));
    CHECK_THROWS_AS(parseRatFun("1 +"), ValidationError);
    CHECK_THROWS_AS(parseRatFun("x"), ValidationError);
    CHECK_THROWS_AS(parseLaurent("1/(1-t)"), ValidationError);
}

TEST_CASE("series expansion")
{
    RatFun geo(LaurentPoly::one(), LaurentPoly::one() - LaurentPoly::t());
    auto w = geo.seriesWindow(0, 3);
    for (int k = 0; k <= 3; ++k) CHECK(w[static_cast<size_t>(k)].second == 1);

    RatFun ramp(LaurentPoly::t(), (LaurentPoly::one() - LaurentPoly::t()) * (LaurentPoly::one() - LaurentPoly::t()));
    auto w2 = ramp.seriesWindow(0, 3);
    for (int k = 0; k <= 3; ++k) CHECK(w2[static_cast<size_t>(k)].second == k);

    // oracle: long division of (1 - t) by 1 - 3t + t^2
    LaurentPoly num = LaurentPoly::one() - LaurentPoly::t();
    auto oracle = longDivisionSeries(num, kD, 2);
    CHECK(oracle[0] == 1);
    CHECK(oracle[1] == 2);
    CHECK(oracle[2] == 5);
    auto w3 = RatFun(num, kD).seriesWindow(0, 2);
    for (int k = 0; k <= 2; ++k) CHECK(w3[static_cast<size_t>(k)].second == oracle[static_cast<size_t>(k)]);

    CHECK_THROWS_AS(geo.seriesWindow(3, 1), ValidationError);
}

TEST_CASE("log derivative")
{
    CHECK(RatFun::t(5).logDerivative() == RatFun(Rational(5)));
    CHECK(RatFun::t(-2).logDerivative() == RatFun(Rational(-2)));

    RatFun oneMinusT(LaurentPoly::one() - LaurentPoly::t());
    CHECK(oneMinusT.logDerivative() == RatFun(-LaurentPoly::t(), LaurentPoly::one() - LaurentPoly::t()));

    // f = (1 - 3t + t^2)/(1 - t)^2 has t f'/f coefficients 2 - tr(A0^n)
    LaurentPoly oneMinusTSq = (LaurentPoly::one() - LaurentPoly::t()) * (LaurentPoly::one() - LaurentPoly::t());
    RatFun zeta(kD, oneMinusTSq);
    RatFun ld = zeta.logDerivative();
    std::array<long, 4> a0 = {2, 1, 1, 1};
    for (int n = 1; n <= 10; ++n) CHECK(ld.seriesCoeff(n) == Rational(2 - tracePow2(a0, n)));

    CHECK_THROWS_AS(RatFun::zero().logDerivative(), ComputeError);
}

TEST_CASE("bar involution")
{
    // Alexander polynomial of the standard example, computed by hand:
    // -t^-1 (1 - 3t + t^2) = 3 - t - t^-1, symmetric under t -> 1/t
    RatFun delta(kD.shifted(-1).scaled(-1));
    CHECK(delta == parseRatFun("-t^-1 + 3 - t"));
    CHECK(delta.bar() == delta);

    CHECK(RatFun::t(2).bar() == RatFun::t(-2));

    RatFun f(LaurentPoly::one() + LaurentPoly::t(), LaurentPoly::one() - LaurentPoly::t());
    CHECK(f.bar() == -f);
    CHECK(f.bar().str() == "(-1 - t)/(1 - t)");
}

TEST_CASE("polynomial factorization over Q")
{
    // (1 - t^2) d(t)^2 splits into linear factors and the irreducible d
    LaurentPoly f = parseLaurent("1 - t^2") * kD * kD;
    Factorization fact = factorPoly(f);
    REQUIRE(fact.factors.size() == 3);
    LaurentPoly rebuilt = LaurentPoly(fact.unit).shifted(fact.tPower);
    for (const auto& pf : fact.factors) {
        rebuilt *= pf.prime.pow(static_cast<unsigned>(pf.multiplicity));
        // each factor is irreducible: re-factoring returns itself
        Factorization again = factorPoly(pf.prime);
        CHECK(again.factors.size() == 1);
        CHECK(again.factors.front().multiplicity == 1);
    }
    CHECK(rebuilt == f);

    // t-powers split off
    Factorization tf = factorPoly(parseLaurent("t^3 - t^4"));
    CHECK(tf.tPower == 3);
    REQUIRE(tf.factors.size() == 1);
    CHECK(tf.factors.front().prime == parseLaurent("-1 + t"));
    CHECK(tf.unit == -1);

    // irreducible quadratic stays whole
    Factorization qf = factorPoly(parseLaurent("1 + t + t^2"));
    REQUIRE(qf.factors.size() == 1);
    CHECK(qf.factors.front().prime == parseLaurent("1 + t + t^2"));

    // larger reducible case
    Factorization big = factorPoly(kD * parseLaurent("1 + t + t^2") * parseLaurent("2 - t") * kD);
    size_t total = 0;
    for (const auto& pf : big.factors) total += static_cast<size_t>(pf.multiplicity);
    CHECK(total == 4);
}

TEST_CASE("partial fraction atoms")
{
    std::mt19937 rng(314159);
    std::vector<RatFun> cases = {
        parseRatFun("(1 - t)/(1 - 3*t + t^2)"),
        parseRatFun("2/(1 - t^2)"),
        parseRatFun("1/(1 - t)") + parseRatFun("1/(1 + t)"),
        parseRatFun("t^-3/(1 - t)"),
        parseRatFun("(1 + t)^2/(1 - t)^2") ,
        parseRatFun("3 - t - t^-1"),
        RatFun::zero(),
        RatFun::one(),
    };
    for (int i = 0; i < 60; ++i) cases.push_back(randomRatFun(rng));
    for (const auto& f : cases) {
        auto atoms = atomize(f);
        CHECK(atomSum(atoms) == f);
        for (const auto& [c, a] : atoms) {
            CHECK(c != 0);
            // atom shape: monomial, or t^j over an irreducible prime power
            if (!a.isPolynomial()) {
                CHECK(a.num().termCount() == 1);
            } else {
                CHECK(a.num().termCount() == 1);
                CHECK(a.num().trailingCoeff() == 1);
            }
        }
    }
    // linearity: atoms of a sum match the merged atoms of the parts
    RatFun p = parseRatFun("1/(1 - t)"), q = parseRatFun("1/(1 + t)");
    auto sumAtoms = atomize(p + q);
    CHECK(sumAtoms.size() == 2);
    CHECK(atomSum(sumAtoms) == parseRatFun("2/(1 - t^2)"));
}

TEST_CASE("algebraic properties on random inputs")
{
    std::mt19937 rng(424242);
    int logChecks = 0, cauchyChecks = 0;
    for (int i = 0; i < 300; ++i) {
        RatFun f = randomRatFun(rng), g = randomRatFun(rng);
        CHECK(f.bar().bar() == f);
        if (f.isZero() || g.isZero()) continue;
        CHECK((f * g).logDerivative() == f.logDerivative() + g.logDerivative());
        ++logChecks;
        // Cauchy product on a window, mindful of truncation from below
        int fLo = f.num().minExp(), gLo = g.num().minExp();
        auto fw = f.seriesWindow(fLo, 6);
        auto gw = g.seriesWindow(gLo, 6);
        auto pw = (f * g).seriesWindow(fLo + gLo, 4);
        for (const auto& [k, want] : pw) {
            Rational acc = 0;
            for (const auto& [i1, c1] : fw)
                for (const auto& [i2, c2] : gw)
                    if (i1 + i2 == k) acc += c1 * c2;
            CHECK(acc == want);
        }
        ++cauchyChecks;
    }
    CHECK(logChecks > 100);
    CHECK(cauchyChecks > 100);
}
