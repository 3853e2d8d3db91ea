#include <fibinv/monodromy.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace fibinv;

namespace {

MonodromyData md(int genus, const std::vector<std::vector<long>>& rows)
{
    MonodromyData m;
    m.genus = genus;
    std::vector<std::vector<Integer>> r;
    for (const auto& row : rows) r.emplace_back(row.begin(), row.end());
    m.action = rows.empty() ? IntMatrix(0, 0) : IntMatrix::fromRows(r);
    return m;
}

MonodromyData torusExample() { return md(1, {{2, 1}, {1, 1}}); }

MonodromyData blockSum3()
{
    IntMatrix a(6, 6, Integer(0));
    IntMatrix a0 = torusExample().action;
    for (size_t b = 0; b < 3; ++b)
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 2; ++j) a(2 * b + i, 2 * b + j) = a0(i, j);
    MonodromyData m;
    m.genus = 3;
    m.action = a;
    return m;
}

// random product of elementary symplectic transvections x -> x + <x,v> v
// for the form with pairs (e_i, f_i) = (2i, 2i+1)
IntMatrix randomSymplectic(std::mt19937& rng, int g, int length)
{
    size_t n = static_cast<size_t>(2 * g);
    // symplectic form
    IntMatrix j(n, n, Integer(0));
    for (int i = 0; i < g; ++i) {
        j(static_cast<size_t>(2 * i), static_cast<size_t>(2 * i + 1)) = 1;
        j(static_cast<size_t>(2 * i + 1), static_cast<size_t>(2 * i)) = -1;
    }
    std::uniform_int_distribution<size_t> idx(0, n - 1);
    std::uniform_int_distribution<int> sgn(0, 1);
    IntMatrix a = IntMatrix::identity(n);
    for (int step = 0; step < length; ++step) {
        // v = basis vector or sum of two
        std::vector<Integer> v(n, Integer(0));
        v[idx(rng)] += 1;
        if (sgn(rng)) v[idx(rng)] += 1;
        int s = sgn(rng) ? 1 : -1;
        // transvection T(x) = x + s <x, v> v; matrix T = I + s v (Jv)^T ... computed columnwise
        IntMatrix t = IntMatrix::identity(n);
        // <e_k, v> = (J v)_k with our convention <x,y> = x^T J y
        std::vector<Integer> jv(n, Integer(0));
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c) jv[r] += j(r, c) * v[c];
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c) t(r, c) += s * v[r] * jv[c];
        a = a * t;
    }
    return a;
}

bool isSymplectic(const IntMatrix& a, int g)
{
    size_t n = static_cast<size_t>(2 * g);
    IntMatrix j(n, n, Integer(0));
    for (int i = 0; i < g; ++i) {
        j(static_cast<size_t>(2 * i), static_cast<size_t>(2 * i + 1)) = 1;
        j(static_cast<size_t>(2 * i + 1), static_cast<size_t>(2 * i)) = -1;
    }
    return a.transposed() * j * a == j;
}

} // namespace

TEST_CASE("lefschetz zeta")
{
    CHECK(lefschetzZeta(torusExample()).str() == "(1 - 3*t + t^2)/(1 - 2*t + t^2)");
    CHECK(lefschetzZeta(md(0, {})).str() == "1/(1 - 2*t + t^2)");
    CHECK(lefschetzZeta(md(1, {{1, 0}, {0, 1}})) == RatFun::one());
}

TEST_CASE("lefschetz numbers")
{
    auto l = lefschetzNumbers(torusExample(), 2);
    CHECK(l == std::vector<Integer>{Integer(-1), Integer(-5)});
    CHECK(lefschetzNumbers(md(1, {{1, 0}, {0, 1}}), 3) == std::vector<Integer>(3, Integer(0)));
    CHECK(lefschetzNumbers(md(0, {}), 2) == std::vector<Integer>(2, Integer(2)));
    CHECK_THROWS_AS(lefschetzNumbers(torusExample(), 0), ValidationError);
}

TEST_CASE("alexander polynomial")
{
    CHECK(alexanderPolynomial(torusExample()) == parseLaurent("-t^-1 + 3 - t"));

    // block sum: -t^-3 (1 - 3t + t^2)^3
    LaurentPoly d = parseLaurent("1 - 3*t + t^2");
    LaurentPoly expect = (d * d * d).shifted(-3).scaled(-1);
    CHECK(alexanderPolynomial(blockSum3()) == expect);
    CHECK(expect.evaluate(1) == 1);
    CHECK(expect.inverted() == expect);

    CHECK_THROWS_WITH(alexanderPolynomial(md(1, {{1, 0}, {0, 1}})),
                      Catch::Matchers::ContainsSubstring("b_1 > 1"));
}

TEST_CASE("i delta")
{
    CHECK(iDelta(LaurentPoly::one()).str() == "(1 + t)/(1 - t)");

    // Delta = 3 - t - t^-1: I = (1+t)/(1-t) + (t^-1 - t)/(3 - t - t^-1), by symbolic differentiation
    LaurentPoly delta = parseLaurent("-t^-1 + 3 - t");
    RatFun expected = RatFun(parseLaurent("1 + t"), parseLaurent("1 - t")) +
                      RatFun(parseLaurent("t^-1 - t")) / RatFun(delta);
    CHECK(iDelta(delta) == expected);

    // Delta = -t^-1 (1-t)^2 = -t^-1 + 2 - t
    LaurentPoly d2 = parseLaurent("-t^-1 + 2 - t");
    RatFun expected2 = RatFun(parseLaurent("1 + t"), parseLaurent("1 - t")) + RatFun(Rational(-1)) +
                       RatFun(parseLaurent("-2*t"), parseLaurent("1 - t"));
    CHECK(iDelta(d2) == expected2);

    CHECK_THROWS_AS(iDelta(LaurentPoly::zero()), ComputeError);
}

TEST_CASE("zeta alexander identity")
{
    IdentityReport rep = zetaAlexanderIdentity(torusExample());
    CHECK(rep.zetaAlexanderHolds);
    CHECK(rep.iDeltaHolds);

    IdentityReport rep3 = zetaAlexanderIdentity(blockSum3());
    CHECK(rep3.zetaAlexanderHolds);
    CHECK(rep3.iDeltaHolds);

    CHECK_THROWS_AS(zetaAlexanderIdentity(md(1, {{1, 0}, {0, 1}})), ComputeError);
}

TEST_CASE("identity on random symplectic monodromies")
{
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> glist(1, 3);
    std::uniform_int_distribution<int> len(3, 10);
    int done = 0;
    while (done < 40) {
        int g = glist(rng);
        IntMatrix a = randomSymplectic(rng, g, len(rng));
        REQUIRE(isSymplectic(a, g));
        MonodromyData m;
        m.genus = g;
        m.action = a;
        if (determinant(a - IntMatrix::identity(a.rows())) == 0) continue;
        IdentityReport rep = zetaAlexanderIdentity(m);
        CHECK(rep.zetaAlexanderHolds);
        CHECK(rep.iDeltaHolds);
        auto delta = alexanderPolynomial(m);
        CHECK(delta.evaluate(1) == 1);
        CHECK(delta.inverted() == delta);
        ++done;
    }
}

TEST_CASE("h1 of the mapping torus")
{
    AbelianGroup g = h1MappingTorus(torusExample());
    CHECK(g.freeRank == 1);
    CHECK(g.torsion.empty());
    CHECK(g.str() == "Z");

    AbelianGroup t3 = h1MappingTorus(md(1, {{1, 0}, {0, 1}}));
    CHECK(t3.freeRank == 3);
    CHECK(t3.torsion.empty());
    CHECK(t3.str() == "Z^3");

    AbelianGroup sh = h1MappingTorus(md(1, {{1, 1}, {0, 1}}));
    CHECK(sh.freeRank == 2);
    CHECK(sh.torsion.empty());

    // free rank 1 exactly when det(A - 1) != 0, matching Alexander normalizability
    std::mt19937 rng(5150);
    for (int rep = 0; rep < 30; ++rep) {
        IntMatrix a = randomSymplectic(rng, 2, 6);
        MonodromyData m;
        m.genus = 2;
        m.action = a;
        bool nondeg = determinant(a - IntMatrix::identity(4)) != 0;
        CHECK((h1MappingTorus(m).freeRank == 1) == nondeg);
        if (nondeg)
            CHECK_NOTHROW(alexanderPolynomial(m));
        else
            CHECK_THROWS_AS(alexanderPolynomial(m), ComputeError);
    }
}

TEST_CASE("delta polynomial from the minimal polynomial")
{
    CHECK(deltaPolynomial(torusExample()) == parseLaurent("-t^-1 + 3 - t"));
    CHECK(deltaPolynomial(blockSum3()) == parseLaurent("-t^-1 + 3 - t"));
    // identity monodromy: minimal polynomial t - 1 has odd span, not normalizable
    CHECK_THROWS_AS(deltaPolynomial(md(1, {{1, 0}, {0, 1}})), ComputeError);
}

TEST_CASE("monodromy from slides")
{
    IntMatrix a = monodromyFromSlides(2, {{1, 2, 1}, {2, 1, 1}});
    CHECK(a == torusExample().action);
    CHECK(monodromyFromSlides(2, {}) == IntMatrix::identity(2));
    IntMatrix e = monodromyFromSlides(2, {{2, 1, -1}});
    CHECK(e(1, 0) == -1);
    CHECK_THROWS_AS(monodromyFromSlides(2, {{1, 1, 1}}), ValidationError);
}

TEST_CASE("lefschetz coefficients match the series of the zeta log derivative")
{
    std::mt19937 rng(6174);
    std::vector<MonodromyData> cases = {torusExample(), blockSum3(), md(1, {{1, 0}, {0, 1}}), md(0, {})};
    for (int rep = 0; rep < 10; ++rep) {
        MonodromyData m;
        m.genus = 2;
        m.action = randomSymplectic(rng, 2, 6);
        cases.push_back(m);
    }
    for (const auto& m : cases) {
        RatFun ld = lefschetzZeta(m).logDerivative();
        auto nums = lefschetzNumbers(m, 20);
        auto window = ld.seriesWindow(1, 20);
        for (int n = 1; n <= 20; ++n)
            CHECK(window[static_cast<size_t>(n - 1)].second == Rational(nums[static_cast<size_t>(n - 1)]));
    }
}
