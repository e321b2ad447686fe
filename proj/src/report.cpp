#include "horocount/report.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <tuple>

namespace horo {

std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round12(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(fmt12(x).c_str(), nullptr);
}

std::string point_str(const ExactPoint& z, int dim) {
    if (dim == 1) return to_string(z.re);
    std::string im = to_string(z.im);
    if (im.front() != '-') im = "+" + im;
    return to_string(z.re) + im + "i";
}

ExactPoint parse_point(std::string_view text, int dim) {
    const auto bad = [&] { return Error(ErrorKind::Usage, "cannot parse point '" + std::string(text) + "'"); };
    try {
        if (auto comma = text.find(','); comma != std::string_view::npos) {
            if (dim != 2) throw bad();
            return {parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1))};
        }
        if (dim == 2 && !text.empty() && text.back() == 'i') {
            const std::string_view body = text.substr(0, text.size() - 1);
            for (std::size_t i = body.size(); i-- > 1;) {
                if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
                    std::string_view im = body.substr(i);
                    if (im.front() == '+') im.remove_prefix(1);
                    return {parse_rational(body.substr(0, i)), parse_rational(im)};
                }
            }
            throw bad();
        }
        return {parse_rational(text), 0};
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Usage) throw;
        throw bad();
    }
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

Json number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return round12(x);
}

}  // namespace

std::string count_csv(const std::vector<CountRecord>& records) {
    std::vector<const CountRecord*> rows;
    for (const auto& r : records) rows.push_back(&r);
    std::stable_sort(rows.begin(), rows.end(), [](const CountRecord* a, const CountRecord* b) {
        const auto& qa = a->query;
        const auto& qb = b->query;
        return std::tie(a->regime, qa.z, qa.R, qa.tau, qa.k) < std::tie(b->regime, qb.z, qb.R, qb.tau, qb.k);
    });
    std::string out = "z,R,tau,k,count,prediction,ratio,regime\n";
    for (const auto* r : rows) {
        const auto& q = r->query;
        out += point_str(q.z, q.group->boundary_dimension) + "," + to_string(q.R) + "," + to_string(q.tau) + "," +
               std::to_string(q.k) + "," + std::to_string(r->count) + "," + fmt12(r->prediction) + "," +
               fmt12(r->ratio()) + "," + std::string(to_string(r->regime)) + (r->in_regime ? "" : "-out-of-regime") +
               "\n";
    }
    return out;
}

Json band_json(const ComparabilityBand& b) {
    return Json{{"c_lo", number(b.c_lo)}, {"c_hi", number(b.c_hi)}, {"spread", number(b.spread())},
                {"n_records", b.n_records}};
}

ComparabilityBand band_from_json(const Json& j) {
    return {j.at("c_lo").get<double>(), j.at("c_hi").get<double>(), j.value("n_records", std::size_t{0})};
}

Json record_json(const CountRecord& r) {
    const auto& q = r.query;
    return Json{{"z", point_str(q.z, q.group->boundary_dimension)},
                {"R", to_string(q.R)},
                {"tau", to_string(q.tau)},
                {"k", q.k},
                {"count", r.count},
                {"prediction", number(r.prediction)},
                {"ratio", number(r.ratio())},
                {"regime", std::string(to_string(r.regime))},
                {"in_regime", r.in_regime}};
}

Json measure_json(const MeasureRecord& m) {
    const int dim = sgn(m.z.im) != 0 ? 2 : 1;
    return Json{{"z", point_str(m.z, dim)},
                {"R", to_string(m.R)},
                {"s", number(m.s)},
                {"term1", number(m.terms.term1)},
                {"term2", number(m.terms.term2)},
                {"term3", number(m.terms.term3)},
                {"total", number(m.terms.total)},
                {"lower", number(m.mass.lower)},
                {"upper", number(m.mass.upper)}};
}

std::string measure_csv(const std::vector<MeasureRecord>& records) {
    std::string out = "z,R,s,term1,term2,term3,total,lower,upper\n";
    for (const auto& m : records) {
        const int dim = sgn(m.z.im) != 0 ? 2 : 1;
        out += point_str(m.z, dim) + "," + to_string(m.R) + "," + fmt12(m.s) + "," + fmt12(m.terms.term1) + "," +
               fmt12(m.terms.term2) + "," + fmt12(m.terms.term3) + "," + fmt12(m.terms.total) + "," +
               fmt12(m.mass.lower) + "," + fmt12(m.mass.upper) + "\n";
    }
    return out;
}

std::string plotdata(const Series& s) {
    std::string out = "# " + s.label + "\n# log_r log_value\n";
    for (const auto& [x, y] : s.points) out += fmt12(x) + " " + fmt12(y) + "\n";
    return out;
}

std::string slug(std::string_view label) {
    std::string out;
    for (char c : label) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') out += c;
        else if (c == '/') out += '_';
        else out += '-';
    }
    return out;
}

Json calibration_json(const Calibration& c) {
    Json tried = Json::array();
    for (const auto& [tau, C, spread] : c.tried)
        tried.push_back(Json{{"tau", to_string(tau)}, {"C", to_string(C)}, {"spread", number(spread)}});
    return Json{{"group", c.group},
                {"tau", to_string(c.tau)},
                {"C", to_string(c.C)},
                {"c1", to_string(c.c1)},
                {"c2", to_string(c.c2)},
                {"local_band", band_json(c.local_band)},
                {"intermediate_band", band_json(c.intermediate_band)},
                {"c_upper", number(c.c_upper)},
                {"tried", tried}};
}

Calibration calibration_from_json(const Json& j) {
    try {
        Calibration c;
        c.group = j.at("group").get<std::string>();
        c.tau = parse_rational(j.at("tau").get<std::string>());
        c.C = parse_rational(j.at("C").get<std::string>());
        c.c1 = parse_rational(j.at("c1").get<std::string>());
        c.c2 = parse_rational(j.at("c2").get<std::string>());
        c.local_band = band_from_json(j.at("local_band"));
        c.intermediate_band = band_from_json(j.at("intermediate_band"));
        c.c_upper = j.value("c_upper", 0.0);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Io, std::string("malformed calibration fixture: ") + e.what());
    }
}

}  // namespace horo
