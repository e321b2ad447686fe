#include "acceptance.hpp"

#include "horocount/orbit.hpp"
#include "oracles/geometry_oracle.hpp"
#include "oracles/probe_oracle.hpp"
#include "oracles/sieve_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#ifndef HOROCOUNT_FIXTURE_DIR
#define HOROCOUNT_FIXTURE_DIR "fixtures"
#endif

namespace horo::acceptance {

std::filesystem::path default_fixture_dir() { return HOROCOUNT_FIXTURE_DIR; }

namespace {

using constants::golden;
using constants::inv_e;
using constants::silver;

std::string num(double x) { return fmt12(x); }

// Band fixtures per group: observed bands must stay within 2x of the stored ones.
class Fixtures {
public:
    Fixtures(const Options& o, const std::string& group)
        : path_(o.fixture_dir / ("bands_" + group + ".json")), record_(o.record) {
        if (std::filesystem::exists(path_)) data_ = Json::parse(read_text(path_));
        else data_ = Json::object();
    }
    ~Fixtures() {
        if (record_ && dirty_) {
            try {
                write_text(path_, dump(data_));
            } catch (...) {
            }
        }
    }

    bool band(const std::string& key, const ComparabilityBand& obs, std::string& note) {
        if (record_) {
            data_[key] = band_json(obs);
            dirty_ = true;
            return true;
        }
        if (!data_.contains(key)) {
            note += " [fixture " + key + " missing]";
            return false;
        }
        const ComparabilityBand ref = band_from_json(data_[key]);
        const bool ok = within_band(obs, ref, 2.0);
        note += " [fixture " + key + " " + num(ref.c_lo) + ".." + num(ref.c_hi) + (ok ? " ok]" : " EXCEEDED]");
        return ok;
    }

    // Scalar upper constants: observed must not exceed 2x the fixture.
    bool scalar(const std::string& key, double obs, std::string& note) {
        if (record_) {
            data_[key] = round12(obs);
            dirty_ = true;
            return true;
        }
        if (!data_.contains(key)) {
            note += " [fixture " + key + " missing]";
            return false;
        }
        const double ref = data_[key].get<double>();
        const bool ok = obs <= 2 * ref && obs >= ref / 2;
        note += " [fixture " + key + " " + num(ref) + (ok ? " ok]" : " EXCEEDED]");
        return ok;
    }

private:
    std::filesystem::path path_;
    bool record_;
    bool dirty_ = false;
    Json data_;
};

Calibration load_calibration(const Options& o, const std::string& group) {
    const auto path = o.fixture_dir / ("calibration_" + group + ".json");
    return calibration_from_json(Json::parse(read_text(path)));
}

OrbitRequest orbit_request(const GroupPreset& g, Rational min_d, Window region) {
    OrbitRequest r;
    r.generators = g.generators;
    r.seeds = {g.base_horoball};
    r.min_diameter = std::move(min_d);
    r.region = std::move(region);
    return r;
}

std::size_t mismatches(const std::vector<Horoball>& a, const std::vector<Horoball>& b) {
    std::size_t n = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        if (!(a[i] == b[i])) ++n;
    return n;
}

// ---------------------------------------------------------------- A1
Result a1(const Options&) {
    Result r{"A1"};
    const auto& m = preset("modular");
    const auto orbit_m = expand_orbit(orbit_request(m, Rational(1, 2500), Window::interval(0, 1))).horoballs();
    const auto ford_m = ford_reference(m, Window::interval(0, 1), Rational(1, 2500)).horoballs();
    const auto oracle_m = oracle::ford_circles(50, 0, 1);
    const std::size_t dm = mismatches(orbit_m, ford_m) + mismatches(orbit_m, oracle_m);

    const auto& p = preset("picard");
    const auto box = Window::box(0, 1, 0, 1);
    const auto orbit_p = expand_orbit(orbit_request(p, Rational(1, 12), box)).horoballs();
    const auto ford_p = ford_reference(p, box, Rational(1, 12)).horoballs();
    std::vector<Horoball> oracle_p;
    for (const auto& x : oracle::gaussian_sieve(box, 0, 12))
        oracle_p.push_back({x, Rational(1) / Rational(x.den().norm())});
    const std::size_t dp = mismatches(orbit_p, ford_p) + mismatches(orbit_p, oracle_p);

    r.pass = dm == 0 && dp == 0;
    r.summary = "modular 1/2500: " + std::to_string(orbit_m.size()) + " horoballs, " + std::to_string(dm) +
                " discrepancies; picard N(q)<=12: " + std::to_string(orbit_p.size()) + " horoballs, " +
                std::to_string(dp) + " discrepancies";
    r.metrics = {{"modular_count", orbit_m.size()}, {"modular_discrepancies", dm},
                 {"picard_count", orbit_p.size()}, {"picard_discrepancies", dp}};
    return r;
}

// ---------------------------------------------------------------- A2
Result a2(const Options& o) {
    Result r{"A2"};
    const Rational tau(1, 2);
    const auto gm = global_count(preset("modular"), tau, 8, 20);
    const auto gp = global_count(preset("picard"), tau, 8, 16);

    // counts against the direct double loop / the Gaussian numerator walk
    std::size_t bad = 0;
    for (const auto& rec : gm.records) {
        const auto b = scale_band(tau, rec.query.k);
        if (oracle::rational_ball_sieve({Rational(1, 2), 0}, Rational(1, 2), b.qnorm_min, b.qnorm_max) != rec.count)
            ++bad;
    }
    for (const auto& rec : gp.records) {
        if (rec.query.k > 11) continue;
        const auto b = scale_band(tau, rec.query.k);
        if (oracle::gaussian_square_count(b.qnorm_min, b.qnorm_max) != rec.count) ++bad;
    }
    Fixtures fm(o, "modular");
    std::string note;
    const bool fix = fm.band("A2_global", gm.band, note);
    const double sm = gm.fit.slope, sp = gp.fit.slope;
    r.pass = sm >= 0.95 && sm <= 1.05 && gm.band.spread() <= 10 && sp >= 1.9 && sp <= 2.1 && bad == 0 && fix;
    r.summary = "modular slope " + num(sm) + " in [0.95,1.05], band spread " + num(gm.band.spread()) +
                " <= 10; picard slope " + num(sp) + " in [1.9,2.1]; oracle count mismatches " +
                std::to_string(bad) + note;
    r.metrics = {{"modular_slope", round12(sm)}, {"modular_band", band_json(gm.band)}, {"picard_slope", round12(sp)},
                 {"picard_band", band_json(gp.band)}, {"oracle_mismatches", bad}};
    return r;
}

// Exact counts of a record set, re-derived per (z, R) from one census.
std::size_t recount_mismatches(const std::vector<const CountRecord*>& recs) {
    std::map<std::pair<ExactPoint, Rational>, std::vector<const CountRecord*>> groups;
    for (const auto* rec : recs) groups[{rec->query.z, rec->query.R}].push_back(rec);
    std::size_t bad = 0;
    for (const auto& [key, list] : groups) {
        std::int64_t qmax2 = 0;
        for (const auto* rec : list) qmax2 = std::max(qmax2, scale_band(rec->query.tau, rec->query.k).qnorm_max);
        const auto census = oracle::rational_census(key.first.re - key.second, key.first.re + key.second,
                                                    isqrt64(qmax2));
        for (const auto* rec : list) {
            const auto b = scale_band(rec->query.tau, rec->query.k);
            if (oracle::census_band(census, b.qnorm_min, b.qnorm_max) != rec->count) ++bad;
        }
    }
    return bad;
}

std::vector<Rational> dyadic(int from, int to) { return dyadic_scales(from, to); }

// ---------------------------------------------------------------- A3
Result a3(const Options& o) {
    Result r{"A3"};
    const auto& g = preset("modular");
    const Calibration cal = load_calibration(o, "modular");
    const std::vector<ExactPoint> zs{{silver(), 0}, {golden(), 0}, {inv_e(), 0}};
    const auto Rs = dyadic(4, 8);
    const auto ex = local_count_experiment(g, zs, Rs, cal.tau, cal.C);

    std::vector<const CountRecord*> all;
    for (const auto& x : ex.records) all.push_back(&x);
    for (const auto& x : ex.theoretical) all.push_back(&x);
    const std::size_t bad = recount_mismatches(all);

    // upper-bound constant on a grid with twice the radii
    std::vector<Rational> refined;
    for (const auto& R : Rs) {
        refined.push_back(R);
        refined.push_back(R * Rational(17, 24));
    }
    const auto ex2 = local_count_experiment(g, zs, refined, cal.tau, cal.C);
    const double drift = ex2.c_upper / ex.c_upper;

    Fixtures fx(o, "modular");
    std::string note;
    const bool fix = fx.band("A3_local", ex.band, note);
    r.pass = ex.band.spread() <= 20 && bad == 0 && std::isfinite(ex.c_upper) && drift <= 2 && drift >= 0.5 && fix;
    r.summary = "tau=" + to_string(cal.tau) + " C=" + to_string(cal.C) + ": " + std::to_string(ex.band.n_records) +
                " local records, band [" + num(ex.band.c_lo) + ", " + num(ex.band.c_hi) + "] spread " +
                num(ex.band.spread()) + " <= 20; sieve mismatches " + std::to_string(bad) + "; C_upper " +
                num(ex.c_upper) + " (refined grid " + num(ex2.c_upper) + ")" + note;
    r.metrics = {{"band", band_json(ex.band)}, {"c_upper", round12(ex.c_upper)},
                 {"c_upper_refined", round12(ex2.c_upper)}, {"sieve_mismatches", bad}};
    return r;
}

// ---------------------------------------------------------------- A4
Result a4(const Options& o) {
    Result r{"A4"};
    const auto& g = preset("modular");
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<long> qd(1, 6), lamd(1, 16), cd(0, 3), ud(3 * 8, 11 * 8);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    const Rational cs[] = {Rational(1), Rational(3, 2), Rational(2), Rational(3)};

    std::size_t queries = 0, violations = 0, disagreements = 0, attempts = 0, max_count = 0;
    std::string witness;
    while (queries < 10000 && attempts < 1000000) {
        ++attempts;
        const long q0 = qd(rng);
        std::uniform_int_distribution<long> ad(0, q0);
        const long a = ad(rng);
        if (std::gcd(a, q0) != 1) continue;
        const BoundaryPoint p0 = BoundaryPoint::rational(a, q0);
        const Rational lambda = 1 + Rational(lamd(rng), 16);
        Rational c = cs[cd(rng)];
        if (lambda == 2) c += q0 * q0;  // needs c > 1/|H_p0|
        const Rational R = from_double(std::exp2(-ud(rng) / 8.0));
        // admissible offsets: (d + R)^2 <= c|H|R^l - c^2 R^2l
        const double Rl = std::pow(R.get_d(), lambda.get_d()), H = 1.0 / (q0 * q0);
        const double room = c.get_d() * H * Rl - c.get_d() * c.get_d() * Rl * Rl;
        if (room <= 0) continue;
        const double dmax = std::sqrt(room) - R.get_d();
        if (dmax <= 0) continue;
        const double d = dmax * frac(rng) * (frac(rng) < 0.5 ? -1 : 1);
        const ExactPoint z{Rational(a, q0) + from_double(d), 0};
        const auto query = ProximityQuery::make(g, lambda, c, z, R, p0);
        const auto v = proximity_check(query);
        if (!v.hypothesis_met) continue;
        ++queries;
        // certify by the direct loop over every q with q^2 <= bound
        const std::uint64_t want = oracle::rational_ball_sieve(z, R, 0, v.qnorm_bound);
        if (want != v.count) ++disagreements;
        max_count = std::max<std::size_t>(max_count, v.count);
        if (!v.ok() && witness.empty())
            witness = "z=" + to_string(z.re) + " R=" + to_string(R) + " lambda=" + to_string(lambda) +
                      " c=" + to_string(c) + " count=" + std::to_string(v.count);
        if (!v.ok()) ++violations;
    }

    // Disjointness clause: tau^(k+1) > 2R leaves room for at most one horoball.
    std::size_t clause = 0, clause_bad = 0;
    const Rational taus[] = {Rational(1, 2), Rational(1, 3), Rational(1, 4)};
    std::uniform_int_distribution<int> td(0, 2);
    std::uniform_int_distribution<long> zd(0, 1L << 30);
    for (int i = 0; i < 2000; ++i) {
        const Rational tau = taus[td(rng)];
        const Rational R = from_double(std::exp2(-ud(rng) / 8.0));
        int kmax = 0;
        for (Rational t = tau * tau; t > 2 * R; t *= tau) ++kmax;
        if (kmax < 1) continue;
        std::uniform_int_distribution<int> kd(1, kmax);
        const int k = kd(rng);
        const ExactPoint z{Rational(zd(rng), 1L << 30), 0};
        const auto rec = count_in_ball(CountQuery::make(g, z, R, tau, k));
        const auto b = scale_band(tau, k);
        ++clause;
        if (rec.count > 1 || oracle::rational_ball_sieve(z, R, b.qnorm_min, b.qnorm_max) != rec.count) ++clause_bad;
    }

    r.pass = queries == 10000 && violations == 0 && disagreements == 0 && clause_bad == 0;
    r.summary = std::to_string(queries) + " hypothesis-satisfying queries (seed " + std::to_string(o.seed) +
                "): violations " + std::to_string(violations) + ", max count " + std::to_string(max_count) +
                ", enumeration/oracle disagreements " + std::to_string(disagreements) + "; " +
                std::to_string(clause) + " tau^(k+1)>2R queries, failures " + std::to_string(clause_bad) +
                (witness.empty() ? "" : "; first violation " + witness);
    r.metrics = {{"queries", queries}, {"violations", violations}, {"disagreements", disagreements},
                 {"clause_queries", clause}, {"clause_failures", clause_bad}, {"seed", o.seed}};
    return r;
}

// ---------------------------------------------------------------- A5
Result a5(const Options& o) {
    Result r{"A5"};
    const auto& g = preset("modular");
    const Calibration cal = load_calibration(o, "modular");
    const auto grid = CalibrationGrid::standard(g);
    const auto family = intermediate_family(g, grid.z0s, grid.ns, grid.intermediate_Rs, cal.tau, cal.c1, cal.c2);
    std::vector<CountRecord> recs;
    for (const auto& q : family) recs.push_back(intermediate_experiment(q));
    std::vector<const CountRecord*> ptrs;
    for (const auto& x : recs) ptrs.push_back(&x);
    const std::size_t bad = recount_mismatches(ptrs);
    if (recs.empty()) {
        r.summary = "no query satisfies the hypothesis window";
        return r;
    }
    const auto band = band_fit(recs);
    Fixtures fx(o, "modular");
    std::string note;
    const bool fix = fx.band("A5_intermediate", band, note);
    r.pass = recs.size() >= 50 && band.spread() <= 50 && band.c_lo > 0 && bad == 0 && fix;
    r.summary = std::to_string(recs.size()) + " queries z=f^n(z0) near 0 (tau=" + to_string(cal.tau) +
                ", c1=" + to_string(cal.c1) + ", c2=" + to_string(cal.c2) + "): band [" + num(band.c_lo) + ", " +
                num(band.c_hi) + "] spread " + num(band.spread()) + " <= 50; sieve mismatches " +
                std::to_string(bad) + note;
    r.metrics = {{"queries", recs.size()}, {"band", band_json(band)}, {"sieve_mismatches", bad}};
    return r;
}

// ---------------------------------------------------------------- A6
Result a6(const Options& o) {
    Result r{"A6"};
    const auto& g = preset("modular");
    const Calibration cal = load_calibration(o, "modular");
    const Rational tau(1, 2);
    const std::vector<ExactPoint> zs{{silver(), 0}, {golden(), 0},       {inv_e(), 0},
                                     {0, 0},        {Rational(1, 2), 0}, {Rational(1, 3), 0}};
    struct Job {
        double s;
        int j;
        std::size_t zi;
    };
    std::vector<Job> jobs;
    for (double s : {1.1, 1.25, 1.5})
        for (int j = 6; j <= 12; ++j)
            for (std::size_t zi = 0; zi < zs.size(); ++zi) jobs.push_back({s, j, zi});
    struct Out {
        FormulaTerms t;
        MassInterval m;
        Rational R;
    };
    std::vector<Out> outs;
    for (const auto& job : jobs) {
        const Rational R(1, 1L << job.j);
        const Ball b{zs[job.zi], R};
        const std::int64_t Q = std::max<std::int64_t>(std::int64_t(1) << (job.j + 6), std::int64_t(1) << 16);
        outs.push_back({global_formula_s(g, b, job.s, tau, cal.C), mu_s_ball_refined(g, b, job.s, Q), R});
    }
    double lo = HUGE_VAL, hi = 0, c2 = 0, widest = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& x = outs[i];
        lo = std::min(lo, x.m.lower / x.t.total);
        hi = std::max(hi, x.m.upper / x.t.total);
        widest = std::max(widest, x.m.width() / x.m.lower);
        const double Rd = x.R.get_d();
        c2 = std::max(c2, x.t.term2 / (std::pow(Rd, jobs[i].s - g.delta) * 2 * Rd));
    }
    const ComparabilityBand band{lo, hi, jobs.size()};

    // oracles: term2 at R = 2^-6 from the census; partial atom sums by direct loop
    std::size_t bad_t2 = 0, bad_sum = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (jobs[i].j != 6) continue;
        const ExactPoint& z = zs[jobs[i].zi];
        const Rational& R = outs[i].R;
        const auto& t = outs[i].t;
        std::int64_t qmax2 = scale_band(tau, std::max(t.k_last, t.k_first)).qnorm_max;
        const auto census = oracle::rational_census(z.re - R, z.re + R, isqrt64(qmax2));
        double t2 = 0;
        Rational tk = pow_q(tau, static_cast<unsigned>(t.k_first));
        for (int k = t.k_first; k <= t.k_last; ++k, tk *= tau) {
            const auto b = scale_band(tau, k);
            t2 += static_cast<double>(oracle::census_band(census, b.qnorm_min, b.qnorm_max)) *
                  std::pow(tk.get_d(), jobs[i].s);
        }
        if (std::abs(t2 - t.term2) > 1e-12 * std::max(1.0, t2)) ++bad_t2;
        const double direct = oracle::atom_sum_sieve(z.re, R, jobs[i].s, 4096);
        const double lib = mu_s_ball(g, {z, R}, jobs[i].s, 4096).lower;
        if (std::abs(direct - lib) > 1e-12 * direct) ++bad_sum;
    }

    Fixtures fx(o, "modular");
    std::string note;
    bool fix = fx.band("A6_formula", band, note);
    fix = fx.scalar("A6_term2_C", c2, note) && fix;
    r.pass = band.spread() <= 50 && std::isfinite(c2) && bad_t2 == 0 && bad_sum == 0 && fix;
    r.summary = std::to_string(jobs.size()) + " (z,R,s) cells, tau=1/2, C=" + to_string(cal.C) +
                ": certified mass / formula in [" + num(lo) + ", " + num(hi) + "] spread " + num(band.spread()) +
                " <= 50; term2 <= " + num(c2) + " R^(s-delta) mu_delta(B); widest interval " + num(widest) +
                "; oracle mismatches term2 " + std::to_string(bad_t2) + ", atom sums " + std::to_string(bad_sum) +
                note;
    r.metrics = {{"band", band_json(band)}, {"term2_C", round12(c2)}, {"max_rel_width", round12(widest)},
                 {"term2_mismatches", bad_t2}, {"atom_sum_mismatches", bad_sum}};
    return r;
}

// ---------------------------------------------------------------- A7
Result a7(const Options&) {
    Result r{"A7"};
    const auto& g = preset("modular");
    const std::vector<double> ss{1.2, 1.1, 1.05, 1.01};
    const Rational R(1, 64);
    const std::int64_t Q = std::int64_t(1) << 18;
    const auto bad_z = continuity_experiment(g, {{golden(), 0}, R}, ss, Q);
    const auto cusp = continuity_experiment(g, {{0, 0}, R}, ss, Q);
    const double tol = 20;

    // Assertions on the model normalized to unit mass per period.
    const bool golden_ok = bad_z.raw_normalized_band.spread() <= tol && !bad_z.atom;
    const bool removed_ok = cusp.atom && cusp.atom_removed_normalized_band.spread() <= tol;
    const bool grows = cusp.raw_normalized_increasing;
    r.pass = golden_ok && removed_ok && grows;

    std::ostringstream sn, su;
    for (const auto& row : cusp.rows) sn << " " << num(row.raw_normalized);
    for (const auto& row : cusp.rows) su << " " << num(row.raw);
    r.summary = "normalized model, s=1.2..1.01, R=1/64: golden raw spread " +
                num(bad_z.raw_normalized_band.spread()) + " <= 20 " + (golden_ok ? "ok" : "FAIL") +
                "; z=0 atom-removed spread " + num(cusp.atom_removed_normalized_band.spread()) + " <= 20 " +
                (removed_ok ? "ok" : "FAIL") + "; z=0 raw increasing " + (grows ? "ok" : "FAIL") + " (raw:" +
                sn.str() + "). Unnormalized: golden spread " + num(bad_z.raw_band.spread()) +
                ", atom-removed spread " + num(cusp.atom_removed_band.spread()) + ", raw increasing " +
                (cusp.raw_increasing ? "yes" : "no") + " (raw:" + su.str() + ")";
    Json rows = Json::array();
    for (std::size_t i = 0; i < ss.size(); ++i)
        rows.push_back({{"s", ss[i]},
                        {"golden_raw", round12(bad_z.rows[i].raw)},
                        {"golden_raw_normalized", round12(bad_z.rows[i].raw_normalized)},
                        {"zero_raw", round12(cusp.rows[i].raw)},
                        {"zero_raw_normalized", round12(cusp.rows[i].raw_normalized)},
                        {"zero_atom_removed", round12(cusp.rows[i].atom_removed)},
                        {"zero_atom_removed_normalized", round12(cusp.rows[i].atom_removed_normalized)}});
    r.metrics = {{"rows", rows}, {"golden_band_ok", golden_ok}, {"atom_removed_band_ok", removed_ok},
                 {"raw_increasing", grows}};
    return r;
}

// ---------------------------------------------------------------- A8
Result a8(const Options&) {
    Result r{"A8"};
    const auto& g = preset("modular");
    const auto model = MeasureModel::conformal(g, 1.25);
    const auto grid = CenterGrid::standard(g);
    const auto rs = dyadic_scales(5, 12);
    const auto box = box_dim_estimate(model, rs, grid);
    std::vector<double> thetas{0.25, 0.5, 0.75, 0.9}, est;
    std::vector<SpectrumEstimate> spectra;
    for (double th : thetas) {
        spectra.push_back(assouad_spectrum_estimate(model, th, rs, grid));
        est.push_back(spectra.back().estimate);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < est.size(); ++i) monotone = monotone && est[i] > est[i - 1];

    // the witness ball at 2^-8 against a direct atom sum
    const Rational r8(1, 256);
    const Rational x = grid.offset * r8;
    const double direct = oracle::atom_sum_sieve(x, r8, 1.25, 1 << 14);
    const double lib = mu_s_ball(g, {{x, 0}, r8}, 1.25, 1 << 14).lower;
    const bool oracle_ok = std::abs(direct - lib) <= 1e-12 * direct;

    const bool box_ok = box.upper >= 1.35 && box.upper <= 1.65 && box.lower <= box.upper;
    const bool q_ok = est[0] >= 1.75 && est[0] <= 2.25;
    const bool h_ok = est[1] >= 2.7 && est[1] <= 3.3;
    r.pass = box_ok && q_ok && h_ok && monotone && oracle_ok;
    std::string sweep;
    for (std::size_t i = 0; i < thetas.size(); ++i)
        sweep += " " + num(thetas[i]) + ":" + num(est[i]) + "(target " + num(spectra[i].target) + ", pointwise " +
                 num(spectra[i].pointwise_max) + ")";
    r.summary = "s=1.25, r=2^-5..2^-12: box [" + num(box.lower) + ", " + num(box.upper) +
                "] upper in [1.35,1.65]; spectrum theta=1/4 " + num(est[0]) + " in [1.75,2.25], theta=1/2 " +
                num(est[1]) + " in [2.7,3.3]; sweep" + sweep + (monotone ? " increasing" : " NOT increasing") +
                (oracle_ok ? "" : "; witness atom sum disagrees with direct loop");
    Json sp = Json::array();
    for (const auto& s : spectra)
        sp.push_back({{"theta", s.theta}, {"estimate", round12(s.estimate)}, {"target", round12(s.target)},
                      {"pointwise_max", round12(s.pointwise_max)}, {"witness", s.witness}});
    r.metrics = {{"box_lower", round12(box.lower)}, {"box_upper", round12(box.upper)}, {"spectrum", sp}};
    return r;
}

// ---------------------------------------------------------------- A9
MoebiusMap random_word(const std::vector<MoebiusMap>& gens, std::mt19937_64& rng, int max_len) {
    std::uniform_int_distribution<int> len_d(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, 2 * gens.size() - 1);
    MoebiusMap w = MoebiusMap::identity();
    for (int i = len_d(rng); i > 0; --i) {
        const std::size_t j = pick(rng);
        w = compose(w, j % 2 ? gens[j / 2].inverse() : gens[j / 2]);
    }
    return w;
}

Result a9(const Options& o) {
    Result r{"A9"};
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<long> scale(1, 9);
    double worst = 0;
    int cases = 0;
    for (const char* name : {"modular", "picard"}) {
        const auto& g = preset(name);
        for (int i = 0; i < 500; ++i, ++cases) {
            const MoebiusMap m = random_word(g.generators, rng, 5);
            Horoball h = horoball_image(random_word(g.generators, rng, 4), g.base_horoball);
            h.size *= Rational(scale(rng), scale(rng));
            worst = std::max(worst, oracle::image_discrepancy(m, h, horoball_image(m, h), g.boundary_dimension));
        }
    }
    std::uniform_int_distribution<long> den(1, 3000), ylog(0, 14), ynum(1, 9);
    int probes = 0, inside = 0, mism = 0;
    while (probes < 100) {
        const long d = den(rng);
        std::uniform_int_distribution<long> nd(0, d);
        Rational x(nd(rng), d), y(ynum(rng), 3L << ylog(rng));
        x.canonicalize();
        y.canonicalize();
        ++probes;
        const ProbeResult got = probe(preset("modular"), {x, 0}, y);
        const auto want = oracle::conjugation_probe(x, y);
        if (got.cusp.has_value() != want.has_value()) {
            ++mism;
            continue;
        }
        if (!want) {
            if (got.ratio != 1) ++mism;
            continue;
        }
        ++inside;
        const bool same_cusp = want->q == 0 ? got.cusp->at_infinity()
                                            : got.cusp->tangent == BoundaryPoint::rational(want->p, want->q);
        if (got.ratio != want->ratio || !same_cusp) ++mism;
    }
    r.pass = worst <= 1e-9 && mism == 0;
    r.summary = std::to_string(cases) + " horoball images vs circle/sphere fit: worst relative error " + num(worst) +
                " <= 1e-9; " + std::to_string(probes) + " probes (" + std::to_string(inside) +
                " inside a horoball) vs conjugation oracle: " + std::to_string(mism) + " inexact";
    r.metrics = {{"worst_fit_error", worst}, {"probes", probes}, {"inside", inside}, {"mismatches", mism}};
    return r;
}

}  // namespace

std::vector<Result> run(const Options& opts) {
    const std::vector<std::pair<std::string, std::function<Result(const Options&)>>> all{
        {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
        {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}};
    std::vector<Result> out;
    for (const auto& [id, fn] : all) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Result res;
        try {
            res = fn(opts);
        } catch (const std::exception& e) {
            res = Result{id, false, std::string("error: ") + e.what()};
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(res));
    }
    return out;
}

std::string line(const Result& r) { return r.id + (r.pass ? " PASS " : " FAIL ") + r.summary; }

}  // namespace horo::acceptance
