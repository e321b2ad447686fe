#include "cli.hpp"

#include "acceptance/acceptance.hpp"
#include "horocount/orbit.hpp"
#include "horocount/report.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#ifndef HOROCOUNT_FIXTURE_DIR
#define HOROCOUNT_FIXTURE_DIR "fixtures"
#endif

namespace horo::cli {

namespace {

struct AssertionFailure : std::runtime_error {
    AssertionFailure(std::string inv, std::string wit)
        : std::runtime_error(inv), invariant(std::move(inv)), witness(std::move(wit)) {}
    std::string invariant, witness;
};

std::string quoted(std::string_view s) {
    std::string q = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') q += '\\';
        if (c == '\n') {
            q += "\\n";
            continue;
        }
        q += c;
    }
    return q + "\"";
}

std::string opt_name(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

// Every option is a string; lists are comma separated (points in the plane use ';').
struct Option {
    std::string name, def, help;
};
struct Command {
    std::string name, help;
    std::vector<Option> options;
    std::vector<Option> flags;
};

using Params = std::map<std::string, std::string>;

class Args {
public:
    Args(Params p, std::set<std::string> set_flags, std::filesystem::path fixtures)
        : p_(std::move(p)), flags_(std::move(set_flags)), fixtures_(std::move(fixtures)) {}

    const std::string& str(const std::string& k) const { return p_.at(k); }
    bool has(const std::string& k) const {
        const auto it = p_.find(k);
        return it != p_.end() && !it->second.empty();
    }
    bool flag(const std::string& k) const { return flags_.count(k) > 0; }
    const std::filesystem::path& fixtures() const { return fixtures_; }

    const GroupPreset& group() const { return preset(str("group")); }
    int dim() const { return group().boundary_dimension; }

    Rational rational(const std::string& k) const { return guard(k, [&] { return parse_rational(str(k)); }); }
    double real(const std::string& k) const { return rational(k).get_d(); }
    long integer(const std::string& k) const {
        return guard(k, [&] {
            std::size_t used = 0;
            const long v = std::stol(str(k), &used);
            if (used != str(k).size()) throw std::invalid_argument("trailing characters");
            return v;
        });
    }
    ExactPoint point(const std::string& k) const { return guard(k, [&] { return parse_point(str(k), dim()); }); }
    std::vector<std::string> list(const std::string& k, char sep = ',') const {
        std::vector<std::string> out;
        std::stringstream ss(str(k));
        for (std::string item; std::getline(ss, item, sep);)
            if (!item.empty()) out.push_back(item);
        if (out.empty()) usage(k, "needs at least one value");
        return out;
    }
    std::vector<Rational> rationals(const std::string& k) const {
        std::vector<Rational> out;
        for (const auto& s : list(k)) out.push_back(guard(k, [&] { return parse_rational(s); }));
        return out;
    }
    std::vector<double> reals(const std::string& k) const {
        std::vector<double> out;
        for (const auto& q : rationals(k)) out.push_back(q.get_d());
        return out;
    }
    std::vector<int> ints(const std::string& k) const {
        std::vector<int> out;
        for (const auto& s : list(k)) out.push_back(guard(k, [&] { return std::stoi(s); }));
        return out;
    }
    std::vector<ExactPoint> points(const std::string& k) const {
        std::vector<ExactPoint> out;
        for (const auto& s : list(k, dim() == 2 ? ';' : ','))
            out.push_back(guard(k, [&] { return parse_point(s, dim()); }));
        return out;
    }

    [[noreturn]] static void usage(const std::string& k, const std::string& why) {
        throw Error(ErrorKind::Usage, "--" + k + ": " + why);
    }

private:
    template <typename F>
    auto guard(const std::string& k, F f) const -> decltype(f()) {
        try {
            return f();
        } catch (const Error& e) {
            usage(k, e.what());
        } catch (const std::exception& e) {
            usage(k, "cannot parse '" + str(k) + "'");
        }
    }

    Params p_;
    std::set<std::string> flags_;
    std::filesystem::path fixtures_;
};

// Main artifact to --output (stdout when empty), summary JSON to --summary or
// to stdout when the artifact went to a file.
void finish(const Args& a, std::ostream& out, const std::string& artifact, const Json* summary = nullptr) {
    const bool to_file = a.has("output") && a.str("output") != "-";
    if (to_file) write_text(a.str("output"), artifact);
    else out << artifact;
    if (!summary) return;
    if (a.has("summary")) write_text(a.str("summary"), dump(*summary));
    else if (to_file) out << dump(*summary);
}

Calibration calibration_for(const Args& a) {
    const auto path = a.fixtures() / ("calibration_" + a.group().name + ".json");
    if (!std::filesystem::exists(path))
        throw Error(ErrorKind::Usage, "no calibration fixture for " + a.group().name + " (" + path.string() +
                                          "); run `horocount calibrate --group " + a.group().name + "`");
    return calibration_from_json(Json::parse(read_text(path)));
}

// tau must be the calibrated one; C may shrink but not grow.
Rational calibrated_tau(const Args& a, const Calibration& cal) {
    if (!a.has("tau")) return cal.tau;
    const Rational tau = a.rational("tau");
    if (tau != cal.tau)
        Args::usage("tau", to_string(tau) + " is not calibrated for " + a.group().name + " (calibrated tau " +
                               to_string(cal.tau) + ")");
    return tau;
}

void check_fixture_band(const ComparabilityBand& obs, const ComparabilityBand& ref, const std::string& what) {
    if (!within_band(obs, ref, 2.0))
        throw AssertionFailure(what + " band within 2x of the calibration fixture",
                               "observed [" + fmt12(obs.c_lo) + ", " + fmt12(obs.c_hi) + "] vs fixture [" +
                                   fmt12(ref.c_lo) + ", " + fmt12(ref.c_hi) + "]");
}

Window window_arg(const Args& a) {
    if (!a.has("window")) return a.group().fundamental_window;
    const auto v = a.rationals("window");
    if (a.dim() == 1 && v.size() == 2) return Window::interval(v[0], v[1]);
    if (a.dim() == 2 && v.size() == 4) return Window::box(v[0], v[1], v[2], v[3]);
    Args::usage("window", a.dim() == 1 ? "expects lo,hi" : "expects x0,x1,y0,y1");
}

// ---------------------------------------------------------------- commands

int cmd_enumerate(const Args& a, std::ostream& out) {
    const auto& g = a.group();
    OrbitRequest req;
    req.generators = g.generators;
    req.seeds = {g.base_horoball};
    req.min_diameter = a.rational("min-diam");
    req.region = window_arg(a);
    req.max_nodes = static_cast<std::size_t>(a.integer("max-nodes"));
    const auto set = expand_orbit(req);
    std::string text;
    if (a.str("format") == "json") {
        Json rows = Json::array();
        for (const auto& e : set.entries)
            rows.push_back({{"tangent", e.horoball.tangent.str()},
                            {"diameter", to_string(e.horoball.size)},
                            {"word_length", e.word_length}});
        text = dump(Json{{"group", g.name}, {"count", set.count()}, {"truncated", set.truncated}, {"horoballs", rows}});
    } else if (a.str("format") == "csv") {
        std::ostringstream ss;
        write_orbit_csv(ss, set);
        text = ss.str();
    } else {
        Args::usage("format", "expects csv or json");
    }
    finish(a, out, text);
    return set.truncated ? AssertionFailed : Ok;
}

int cmd_count_global(const Args& a, std::ostream& out) {
    const auto gc = global_count(a.group(), a.rational("tau"), static_cast<int>(a.integer("k-min")),
                                 static_cast<int>(a.integer("k-max")));
    const Json summary{{"group", a.group().name},
                       {"tau", a.str("tau")},
                       {"slope", round12(gc.fit.slope)},
                       {"intercept", round12(gc.fit.intercept)},
                       {"residual", round12(gc.fit.residual)},
                       {"delta", a.group().delta},
                       {"band", band_json(gc.band)}};
    finish(a, out, count_csv(gc.records), &summary);
    return Ok;
}

std::vector<Rational> radii_or_default(const Args& a, const CalibrationGrid& grid) {
    return a.has("R") ? a.rationals("R") : grid.Rs;
}

int cmd_count_local(const Args& a, std::ostream& out) {
    const auto& g = a.group();
    const Calibration cal = calibration_for(a);
    const Rational tau = calibrated_tau(a, cal);
    const Rational C = a.has("C") ? a.rational("C") : cal.C;
    if (C > cal.C) Args::usage("C", to_string(C) + " exceeds the calibrated C " + to_string(cal.C));
    const auto grid = CalibrationGrid::standard(g);
    const auto zs = a.has("z") ? a.points("z") : grid.zs;
    const auto ex = local_count_experiment(g, zs, radii_or_default(a, grid), tau, C,
                                           static_cast<int>(a.integer("scales")));
    std::vector<CountRecord> all = ex.records;
    all.insert(all.end(), ex.theoretical.begin(), ex.theoretical.end());
    const Json summary{{"group", g.name},           {"tau", to_string(tau)},
                       {"C", to_string(C)},         {"band", band_json(ex.band)},
                       {"c_upper", round12(ex.c_upper)}, {"fixture_band", band_json(cal.local_band)}};
    finish(a, out, count_csv(all), &summary);
    check_fixture_band(ex.band, cal.local_band, "local");
    return Ok;
}

int cmd_intermediate(const Args& a, std::ostream& out) {
    const auto& g = a.group();
    const Calibration cal = calibration_for(a);
    const Rational tau = calibrated_tau(a, cal);
    const Rational c1 = a.has("c1") ? a.rational("c1") : cal.c1;
    const Rational c2 = a.has("c2") ? a.rational("c2") : cal.c2;
    std::vector<CountRecord> recs;
    if (a.has("z")) {
        // one query; a violated window is a usage error
        const auto q = IntermediateQuery::make(g, a.point("z"), a.rational("R"), tau, static_cast<int>(a.integer("k")),
                                               BoundaryPoint::rational(0, 1), c1, c2);
        recs.push_back(intermediate_experiment(q));
    } else {
        const auto grid = CalibrationGrid::standard(g);
        const auto family = intermediate_family(g, a.has("z0") ? a.points("z0") : grid.z0s,
                                                a.has("n") ? a.ints("n") : grid.ns,
                                                a.has("R") ? a.rationals("R") : grid.intermediate_Rs, tau, c1, c2);
        for (const auto& q : family) recs.push_back(intermediate_experiment(q));
    }
    const auto band = band_fit(recs);
    const Json summary{{"group", g.name}, {"tau", to_string(tau)}, {"c1", to_string(c1)}, {"c2", to_string(c2)},
                       {"band", band_json(band)}, {"fixture_band", band_json(cal.intermediate_band)}};
    finish(a, out, count_csv(recs), &summary);
    if (recs.size() > 1) check_fixture_band(band, cal.intermediate_band, "intermediate");
    return Ok;
}

int cmd_proximity(const Args& a, std::ostream& out) {
    const auto& g = a.group();
    const ExactPoint p0 = a.point("p0");
    // p0 as a reduced fraction
    const Rational re = p0.re, im = p0.im;
    const Integer den = lcm(re.get_den(), im.get_den());
    const BoundaryPoint cusp = BoundaryPoint::fraction(Gaussian(Integer(re * den), Integer(im * den)), Gaussian(den));
    ProximityQuery q;
    try {
        q = ProximityQuery::make(g, a.rational("lambda"), a.rational("c"), a.point("z"), a.rational("R"), cusp);
    } catch (const Error& e) {
        throw Error(ErrorKind::Usage, std::string("proximity hypothesis: ") + e.what());
    }
    const auto v = proximity_check(q);
    Json w = Json::array();
    for (const auto& p : v.witnesses) w.push_back(p.str());
    const Json res{{"group", g.name},
                   {"hypothesis_met", v.hypothesis_met},
                   {"count", v.count},
                   {"qnorm_bound", v.qnorm_bound},
                   {"witnesses", w},
                   {"verdict", !v.hypothesis_met ? "hypothesis-not-met" : v.ok() ? "ok" : "violation"}};
    finish(a, out, dump(res));
    if (!v.ok()) throw AssertionFailure("at most one cusp with |H_p| >= c R^lambda", dump(res));
    return Ok;
}

std::int64_t q_cut_for(const Args& a, const Rational& R) {
    if (a.has("q-cut")) return a.integer("q-cut");
    return std::max<std::int64_t>(std::int64_t(1) << 16, 64 * ceil_q(1 / R).get_si());
}

int cmd_measure_ball(const Args& a, std::ostream& out) {
    const auto& g = a.group();
    const Ball b{a.point("z"), a.rational("R")};
    Json res{{"group", g.name}, {"z", point_str(b.center, g.boundary_dimension)}, {"R", to_string(b.radius)}};
    if (!a.has("s")) {
        res["s"] = g.delta;
        const double m = mu_delta_ball(g, b, a.flag("clip"));
        res["lower"] = round12(m);
        res["upper"] = round12(m);
    } else {
        const double s = a.real("s");
        const std::int64_t Q = q_cut_for(a, b.radius);
        const MassInterval m = a.flag("crude") ? mu_s_ball(g, b, s, Q) : mu_s_ball_refined(g, b, s, Q);
        res["s"] = round12(s);
        res["q_cut"] = Q;
        res["lower"] = round12(m.lower);
        res["upper"] = round12(m.upper);
    }
    finish(a, out, dump(res));
    return Ok;
}

int cmd_global_formula(const Args& a, std::ostream& out) {
    const auto& g = a.group();
    Rational C;
    if (a.has("C")) C = a.rational("C");
    else C = calibration_for(a).C;
    const Rational tau = a.rational("tau");
    std::vector<MeasureRecord> recs;
    for (const auto& z : a.points("z"))
        for (const auto& R : a.rationals("R"))
            for (double s : a.reals("s")) {
                const Ball b{z, R};
                MeasureRecord m{z, R, s, global_formula_s(g, b, s, tau, C), {}};
                m.mass = mu_s_ball_refined(g, b, s, q_cut_for(a, R));
                recs.push_back(std::move(m));
            }
    std::string text;
    if (a.str("format") == "csv") {
        text = measure_csv(recs);
    } else if (a.str("format") == "json") {
        Json arr = Json::array();
        for (const auto& m : recs) {
            Json j = measure_json(m);
            if (m.terms.p_prime) j["p_prime"] = m.terms.p_prime->str();
            arr.push_back(j);
        }
        text = dump(arr);
    } else {
        Args::usage("format", "expects csv or json");
    }
    finish(a, out, text);
    return Ok;
}

int cmd_continuity(const Args& a, std::ostream& out) {
    const auto& g = a.group();
    const Ball b{a.point("z"), a.rational("R")};
    const auto res = continuity_experiment(g, b, a.reals("s"), a.integer("q-cut"));
    std::string csv = "s,lower,upper,atom,raw,atom_removed,raw_normalized,atom_removed_normalized\n";
    for (const auto& r : res.rows)
        csv += fmt12(r.s) + "," + fmt12(r.mass.lower) + "," + fmt12(r.mass.upper) + "," + fmt12(r.atom) + "," +
               fmt12(r.raw) + "," + fmt12(r.atom_removed) + "," + fmt12(r.raw_normalized) + "," +
               fmt12(r.atom_removed_normalized) + "\n";
    Json summary{{"group", g.name},
                 {"z", point_str(b.center, g.boundary_dimension)},
                 {"R", to_string(b.radius)},
                 {"atom", res.atom ? Json(res.atom->str()) : Json(nullptr)},
                 {"raw_band", band_json(res.raw_band)},
                 {"atom_removed_band", band_json(res.atom_removed_band)},
                 {"raw_increasing", res.raw_increasing}};
    if (g.boundary_dimension == 1) {
        summary["raw_normalized_band"] = band_json(res.raw_normalized_band);
        summary["atom_removed_normalized_band"] = band_json(res.atom_removed_normalized_band);
        summary["raw_normalized_increasing"] = res.raw_normalized_increasing;
    }
    finish(a, out, csv, &summary);
    return Ok;
}

int cmd_dimension(const Args& a, std::ostream& out) {
    const auto& g = a.group();
    const auto model = a.has("s") ? MeasureModel::conformal(g, a.real("s")) : MeasureModel::lebesgue(g);
    const auto grid = CenterGrid::standard(g);
    const auto rs = dyadic_scales(static_cast<int>(a.integer("r-from")), static_cast<int>(a.integer("r-to")));
    const auto box = box_dim_estimate(model, rs, grid);
    const double s = model.s.value_or(g.delta);
    Json res{{"group", g.name},
             {"box", {{"s", round12(s)},
                      {"lower", round12(box.lower)},
                      {"upper", round12(box.upper)},
                      {"target", round12(model.s ? box_dim_target(g, s) : g.delta)}}}};
    Json spectra = Json::array();
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& sr : box.series) files.emplace_back("box_" + slug(sr.label) + ".dat", plotdata(sr));
    if (a.has("theta")) {
        for (double th : a.reals("theta")) {
            const auto sp = assouad_spectrum_estimate(model, th, rs, grid);
            spectra.push_back({{"s", round12(s)},
                               {"theta", round12(th)},
                               {"estimate", round12(sp.estimate)},
                               {"target", round12(sp.target)},
                               {"witness", sp.witness},
                               {"pointwise_max", round12(sp.pointwise_max)},
                               {"pointwise_r", round12(sp.witness_r)}});
            for (const auto& sr : sp.series)
                files.emplace_back("spectrum_theta" + slug(fmt12(th)) + "_" + slug(sr.label) + ".dat", plotdata(sr));
        }
    }
    res["spectrum"] = spectra;
    res["documented"] = {{"hausdorff", 0}, {"assouad", "inf"}, {"quasi_assouad", "inf"}};
    if (a.has("plotdata"))
        for (const auto& [name, text] : files) write_text(std::filesystem::path(a.str("plotdata")) / name, text);
    finish(a, out, dump(res));
    return Ok;
}

int cmd_calibrate(const Args& a, std::ostream& out) {
    const auto& g = a.group();
    auto grid = CalibrationGrid::standard(g);
    if (a.has("z")) grid.zs = a.points("z");
    if (a.has("R")) grid.Rs = a.rationals("R");
    grid.target = a.real("target");
    const auto cal = calibrate(g, a.rationals("tau"), grid);
    const std::string text = dump(calibration_json(cal));
    const std::filesystem::path dest =
        a.has("output") ? std::filesystem::path(a.str("output")) : a.fixtures() / ("calibration_" + g.name + ".json");
    if (dest != "-") write_text(dest, text);
    out << text;
    return Ok;
}

int cmd_verify(const Args& a, std::ostream& out) {
    acceptance::Options o;
    o.fixture_dir = a.fixtures();
    o.seed = static_cast<std::uint64_t>(a.integer("seed"));
    o.record = a.flag("record-fixtures");
    if (a.str("suite") != "all") o.only = a.list("suite");
    const auto results = acceptance::run(o);
    if (results.empty()) Args::usage("suite", "no criterion matches '" + a.str("suite") + "'");
    Json report = Json::array();
    std::string first_fail;
    std::string witness;
    for (const auto& r : results) {
        out << acceptance::line(r) << "\n";
        report.push_back({{"id", r.id}, {"pass", r.pass}, {"summary", r.summary}, {"metrics", r.metrics}});
        if (!r.pass && first_fail.empty()) {
            first_fail = r.id;
            witness = r.summary;
        }
    }
    if (a.has("output")) write_text(a.str("output"), dump(report));
    if (!first_fail.empty()) throw AssertionFailure(first_fail, witness);
    return Ok;
}

const std::vector<Command>& commands() {
    static const std::vector<Command> cmds = {
        {"enumerate",
         "Horoball orbit down to a minimum diameter (CSV)",
         {{"group", "modular", "modular | picard"},
          {"window", "", "lo,hi or x0,x1,y0,y1 (default: fundamental window)"},
          {"min-diam", "", "minimum diameter, e.g. 1/25"},
          {"max-nodes", "10000000", "BFS node budget"},
          {"format", "csv", "csv | json"},
          {"output", "", "output file (default stdout)"}},
         {}},
        {"count-global",
         "Counts per scale over the fundamental window and the delta slope",
         {{"group", "modular", ""},
          {"tau", "1/2", ""},
          {"k-min", "8", ""},
          {"k-max", "20", ""},
          {"output", "", "CSV file"},
          {"summary", "", "JSON summary file"}},
         {}},
        {"count-local",
         "Local-regime counts with the calibrated (tau, C)",
         {{"group", "modular", ""},
          {"tau", "", "must equal the calibrated tau"},
          {"C", "", "default: calibrated C"},
          {"z", "", "centres (default: badly approximable constants)"},
          {"R", "", "radii"},
          {"scales", "3", "scales per (z, R)"},
          {"output", "", ""},
          {"summary", "", ""}},
         {}},
        {"intermediate",
         "Intermediate-regime counts near the cusp 0",
         {{"group", "modular", ""},
          {"tau", "", "must equal the calibrated tau"},
          {"c1", "", ""},
          {"c2", "", ""},
          {"z", "", "single query centre"},
          {"R", "", ""},
          {"k", "0", "single query scale"},
          {"z0", "", "family seeds"},
          {"n", "", "iterate indices"},
          {"output", "", ""},
          {"summary", "", ""}},
         {}},
        {"proximity",
         "Uniqueness of large horoballs near a cusp",
         {{"group", "modular", ""},
          {"lambda", "2", ""},
          {"c", "2", ""},
          {"z", "0", ""},
          {"R", "1/20", ""},
          {"p0", "0", ""},
          {"output", "", ""}},
         {}},
        {"measure-ball",
         "mu_delta or certified mu_s of a ball",
         {{"group", "modular", ""},
          {"z", "0", ""},
          {"R", "1/64", ""},
          {"s", "", "omit for mu_delta"},
          {"q-cut", "", ""},
          {"output", "", ""}},
         {{"crude", "", "closed-form tail only"}, {"clip", "", "clip mu_delta to the fundamental window"}}},
        {"global-formula",
         "Three-term estimate for mu_s against the certified mass",
         {{"group", "modular", ""},
          {"z", "golden", ""},
          {"R", "1/64", ""},
          {"s", "1.25", ""},
          {"tau", "1/2", ""},
          {"C", "", "default: calibrated C"},
          {"q-cut", "", ""},
          {"format", "json", "csv | json"},
          {"output", "", ""}},
         {}},
        {"continuity",
         "mu_s(B)/mu_delta(B) as s decreases to delta",
         {{"group", "modular", ""},
          {"z", "golden", ""},
          {"R", "1/64", ""},
          {"s", "1.2,1.1,1.05,1.01", "strictly decreasing"},
          {"q-cut", "262144", ""},
          {"output", "", ""},
          {"summary", "", ""}},
         {}},
        {"dimension",
         "Box dimension and Assouad spectrum estimates",
         {{"group", "modular", ""},
          {"s", "1.25", "empty for mu_delta"},
          {"theta", "0.25,0.5", ""},
          {"r-from", "5", "largest scale 2^-r_from"},
          {"r-to", "12", "smallest scale 2^-r_to"},
          {"plotdata", "", "directory for per-centre plot data"},
          {"output", "", ""}},
         {}},
        {"calibrate",
         "Search tau, C, c1, c2 and write the calibration fixture",
         {{"group", "modular", ""},
          {"tau", "1/2,1/3,1/4", "candidates"},
          {"z", "", ""},
          {"R", "", ""},
          {"target", "50", "largest admissible band spread"},
          {"output", "", "default: <fixtures>/calibration_<group>.json"}},
         {}},
        {"verify",
         "Run the acceptance suite",
         {{"suite", "all", "all or a list like A1,A4"}, {"seed", "20261014", ""}, {"output", "", "JSON report"}},
         {{"record-fixtures", "", "store observed bands as the new fixtures"}}},
    };
    return cmds;
}

const std::map<std::string, std::function<int(const Args&, std::ostream&)>>& handlers() {
    static const std::map<std::string, std::function<int(const Args&, std::ostream&)>> h = {
        {"enumerate", cmd_enumerate},     {"count-global", cmd_count_global},
        {"count-local", cmd_count_local}, {"intermediate", cmd_intermediate},
        {"proximity", cmd_proximity},     {"measure-ball", cmd_measure_ball},
        {"global-formula", cmd_global_formula}, {"continuity", cmd_continuity},
        {"dimension", cmd_dimension},     {"calibrate", cmd_calibrate},
        {"verify", cmd_verify}};
    return h;
}

// value of --config / --config=... anywhere in args
std::string find_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return {};
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Horoball counting experiments for the modular and Picard groups", "horocount"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    std::string fixtures = HOROCOUNT_FIXTURE_DIR;
    app.add_option("--config", config_path, "flat key-value JSON; flags override it");
    app.add_option("--fixtures", fixtures, "fixture directory")->capture_default_str();

    std::map<std::string, Params> params;
    std::map<std::string, std::map<std::string, bool>> flag_values;
    std::map<std::string, CLI::App*> subs;
    for (const auto& c : commands()) {
        auto* sub = app.add_subcommand(c.name, c.help);
        subs[c.name] = sub;
        auto& p = params[c.name];
        for (const auto& o : c.options) {
            p[o.name] = o.def;
            auto* opt = sub->add_option("--" + o.name, p[o.name], o.help);
            if (!o.def.empty()) opt->default_str(o.def);
        }
        for (const auto& f : c.flags) {
            flag_values[c.name][f.name] = false;
            sub->add_flag("--" + f.name, flag_values[c.name][f.name], f.help);
        }
    }

    const auto fail = [&](std::string_view kind, const std::string& msg, int code) {
        err << "horocount: error kind=" << kind << " message=" << quoted(msg) << "\n";
        return code;
    };

    try {
        // config values become defaults before the flags are parsed
        if (const std::string cfg = find_config(args); !cfg.empty()) {
            std::string cmd;
            for (const auto& s : args)
                if (subs.count(s)) {
                    cmd = s;
                    break;
                }
            if (cmd.empty()) throw Error(ErrorKind::Usage, "no subcommand given");
            Json j;
            try {
                j = Json::parse(read_text(cfg));
            } catch (const nlohmann::json::exception& e) {
                throw Error(ErrorKind::Usage, "--config: " + std::string(e.what()));
            }
            if (!j.is_object()) throw Error(ErrorKind::Usage, "--config: expected a flat JSON object");
            for (const auto& [key, value] : j.items()) {
                const std::string name = opt_name(key);
                if (name == "command") {
                    if (value != cmd) throw Error(ErrorKind::Usage, "--config: command '" + value.dump() + "' does not match " + cmd);
                    continue;
                }
                std::string text;
                if (value.is_string()) text = value.get<std::string>();
                else if (value.is_array()) {
                    for (const auto& v : value) text += (text.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
                } else if (value.is_boolean()) {
                    if (!flag_values[cmd].count(name)) throw Error(ErrorKind::Usage, "--config: '" + key + "' is not a flag of " + cmd);
                    flag_values[cmd][name] = value.get<bool>();
                    continue;
                } else if (value.is_number()) text = value.dump();
                else throw Error(ErrorKind::Usage, "--config: unsupported value for '" + key + "'");
                if (name == "fixtures") {
                    fixtures = text;
                    continue;
                }
                if (!params[cmd].count(name)) throw Error(ErrorKind::Usage, "--config: '" + key + "' is not an option of " + cmd);
                params[cmd][name] = text;
            }
        }
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), UsageError);
    } catch (const Error& e) {
        return fail(to_string(e.kind()), e.what(), UsageError);
    }

    std::string name;
    for (const auto& [n, sub] : subs)
        if (sub->parsed()) name = n;
    std::set<std::string> set_flags;
    for (const auto& [f, on] : flag_values[name])
        if (on) set_flags.insert(f);

    try {
        const Args a(params[name], set_flags, fixtures);
        if (a.has("group")) (void)a.group();
        return handlers().at(name)(a, out);
    } catch (const AssertionFailure& e) {
        err << "horocount: assertion-failed invariant=" << quoted(e.invariant) << " witness=" << quoted(e.witness)
            << "\n";
        return AssertionFailed;
    } catch (const Error& e) {
        switch (e.kind()) {
            case ErrorKind::CalibrationFailure:
            case ErrorKind::Io:
                return fail(to_string(e.kind()), e.what(), AssertionFailed);
            default:
                return fail(to_string(e.kind()), e.what(), UsageError);
        }
    } catch (const nlohmann::json::exception& e) {
        return fail("io", e.what(), AssertionFailed);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), AssertionFailed);
    }
}

}  // namespace horo::cli
