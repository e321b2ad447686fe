#include "horocount/orbit.hpp"
#include "oracles/sieve_oracle.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace horo;

namespace {

OrbitRequest request(const GroupPreset& g, Rational min_d, Window region) {
    OrbitRequest r;
    r.generators = g.generators;
    r.seeds = {g.base_horoball};
    r.min_diameter = std::move(min_d);
    r.region = std::move(region);
    return r;
}

std::vector<Horoball> ford_closed_form(long qmax, const Rational& lo, const Rational& hi) {
    std::vector<Horoball> out;
    for (long q = 1; q <= qmax; ++q) {
        for (long p = -5 * q; p <= 5 * q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            Rational x(p, q);
            x.canonicalize();
            if (x < lo || x > hi) continue;
            out.push_back({BoundaryPoint::rational(p, q), Rational(1, q * q)});
        }
    }
    std::sort(out.begin(), out.end(), [](const Horoball& a, const Horoball& b) { return a.tangent < b.tangent; });
    return out;
}

}  // namespace

TEST_CASE("modular orbit to diameter 1/25") {
    const auto& g = preset("modular");
    const auto set = expand_orbit(request(g, Rational(1, 25), Window::interval(0, 1)));
    CHECK_FALSE(set.truncated);
    CHECK(set.count() == 11);
    CHECK(set.horoballs() == ford_closed_form(5, 0, 1));
    CHECK(set.horoballs() == ford_reference(g, Window::interval(0, 1), Rational(1, 25)).horoballs());
    CHECK(set.min_diameter() == Rational(1, 25));
    CHECK(set.max_diameter() == 1);
}

TEST_CASE("nothing finite survives min_diameter above one") {
    const auto& g = preset("modular");
    CHECK(expand_orbit(request(g, Rational(3, 2), Window::interval(0, 1))).count() == 0);
    CHECK(ford_reference(g, Window::interval(0, 1), 2).count() == 0);
    CHECK(ford_reference(preset("picard"), Window::box(0, 1, 0, 1), 2).count() == 0);
}

TEST_CASE("ford_reference on a subinterval") {
    const auto set = ford_reference(preset("modular"), Window::interval(Rational(1, 3), Rational(1, 2)), Rational(1, 25));
    REQUIRE(set.count() == 3);
    CHECK(set.entries[0].horoball.tangent == BoundaryPoint::rational(1, 3));
    CHECK(set.entries[1].horoball.tangent == BoundaryPoint::rational(2, 5));
    CHECK(set.entries[2].horoball.tangent == BoundaryPoint::rational(1, 2));
}

TEST_CASE("picard orbit to diameter 1/4") {
    const auto& g = preset("picard");
    const Window box = Window::box(0, 1, 0, 1);
    const auto set = expand_orbit(request(g, Rational(1, 4), box));
    std::vector<BoundaryPoint> tangents;
    for (const auto& e : set.entries) tangents.push_back(e.horoball.tangent);
    // Diameter 1/N(q) >= 1/4 means N(q) <= 4.
    CHECK(tangents == oracle::gaussian_sieve(box, 0, 4));
    for (const auto& e : set.entries) CHECK(e.horoball.size == Rational(1, e.horoball.tangent.den().norm()));
}

TEST_CASE("orbit equals the closed form") {
    const auto& m = preset("modular");
    for (Rational d : {Rational(1, 100), Rational(1, 2500), Rational(1, 10000)}) {
        const auto set = expand_orbit(request(m, d, Window::interval(0, 1)));
        CHECK(set.horoballs() == ford_reference(m, Window::interval(0, 1), d).horoballs());
    }
    const auto shifted = Window::interval(Rational(-7, 3), Rational(-5, 4));
    CHECK(expand_orbit(request(m, Rational(1, 900), shifted)).horoballs() ==
          ford_reference(m, shifted, Rational(1, 900)).horoballs());
    const auto& p = preset("picard");
    for (Rational d : {Rational(1, 12), Rational(1, 50), Rational(1, 150)}) {
        const auto set = expand_orbit(request(p, d, Window::box(0, 1, 0, 1)));
        CHECK(set.horoballs() == ford_reference(p, Window::box(0, 1, 0, 1), d).horoballs());
    }
    const auto off = Window::box(Rational(-1, 2), Rational(1, 3), Rational(1, 4), Rational(3, 2));
    CHECK(expand_orbit(request(p, Rational(1, 60), off)).horoballs() ==
          ford_reference(p, off, Rational(1, 60)).horoballs());
}

TEST_CASE("orbit interiors are disjoint") {
    std::mt19937_64 rng(9);
    for (const char* name : {"modular", "picard"}) {
        const auto& g = preset(name);
        const Window w = g.boundary_dimension == 1 ? Window::interval(0, 1) : Window::box(0, 1, 0, 1);
        auto hs = expand_orbit(request(g, Rational(1, g.boundary_dimension == 1 ? 2500 : 100), w)).horoballs();
        hs.push_back(g.base_horoball);
        std::uniform_int_distribution<std::size_t> pick(0, hs.size() - 1);
        int bad = 0;
        for (int i = 0; i < 100000; ++i) {
            const std::size_t a = pick(rng), b = pick(rng);
            if (a == b) continue;
            bad += !interiors_disjoint(hs[a], hs[b]);
        }
        CHECK(bad == 0);
    }
}

TEST_CASE("monotone in min_diameter") {
    const auto& m = preset("modular");
    const auto big = expand_orbit(request(m, Rational(1, 400), Window::interval(0, 1))).horoballs();
    const auto small = expand_orbit(request(m, Rational(1, 100), Window::interval(0, 1))).horoballs();
    auto tangent_less = [](const Horoball& a, const Horoball& b) { return a.tangent < b.tangent; };
    CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end(), tangent_less));
    CHECK(big.size() > small.size());
}

TEST_CASE("independent of generator order and presentation") {
    const auto& p = preset("picard");
    auto req = request(p, Rational(1, 40), Window::box(0, 1, 0, 1));
    const auto base = expand_orbit(req);
    std::vector<MoebiusMap> gens = p.generators;
    std::reverse(gens.begin(), gens.end());
    for (auto& g : gens) g = g.inverse();
    req.generators = gens;
    const auto other = expand_orbit(req);
    REQUIRE(base.count() == other.count());
    for (std::size_t i = 0; i < base.count(); ++i) {
        CHECK(base.entries[i].horoball == other.entries[i].horoball);
        CHECK(base.entries[i].word_length == other.entries[i].word_length);
    }
}

TEST_CASE("errors and truncation") {
    const auto& m = preset("modular");
    auto req = request(m, 0, Window::interval(0, 1));
    CHECK_THROWS_AS(expand_orbit(req), Error);
    req = request(m, Rational(1, 10000), Window::interval(0, 1));
    req.max_nodes = 50;
    const auto t = expand_orbit(req);
    CHECK(t.truncated);
    CHECK(t.nodes_visited == 50);
    req = request(m, Rational(1, 100), Window::interval(0, 1));
    req.seeds = {{BoundaryPoint::rational(0, 1), 1}};
    CHECK_THROWS_AS(expand_orbit(req), Error);
}

TEST_CASE("orbit csv") {
    const auto set = expand_orbit(request(preset("modular"), Rational(1, 4), Window::interval(0, 1)));
    std::ostringstream os;
    write_orbit_csv(os, set);
    CHECK(os.str() ==
          "tangent_num,tangent_den,diameter_num,diameter_den,word_length\n"
          "0,1,1,1,1\n"
          "1,2,1,4,2\n"
          "1,1,1,1,1\n");
    std::ostringstream empty;
    write_orbit_csv(empty, HoroballSet{});
    CHECK(empty.str() == "tangent_num,tangent_den,diameter_num,diameter_den,word_length\n");
}
