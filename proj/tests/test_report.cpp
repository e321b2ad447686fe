#include "horocount/report.hpp"

#include <doctest.h>

#include <filesystem>

using namespace horo;

TEST_CASE("fmt12") {
    CHECK(fmt12(0.1) == "0.1");
    CHECK(fmt12(1.0 / 3) == "0.333333333333");
    CHECK(fmt12(2) == "2");
    CHECK(fmt12(1e-20) == "1e-20");
    CHECK(round12(1.0 / 3) == 0.333333333333);
}

TEST_CASE("points round-trip") {
    CHECK(point_str({Rational(1, 3), 0}, 1) == "1/3");
    CHECK(point_str({Rational(1, 2), Rational(-1, 3)}, 2) == "1/2-1/3i");
    CHECK(parse_point("1/2-1/3i", 2) == ExactPoint{Rational(1, 2), Rational(-1, 3)});
    CHECK(parse_point("0.5+2i", 2) == ExactPoint{Rational(1, 2), 2});
    CHECK(parse_point("1e-3,1/4", 2) == ExactPoint{Rational(1, 1000), Rational(1, 4)});
    CHECK(parse_point("golden", 1).re == constants::golden());
    CHECK_THROWS_AS(parse_point("1,2", 1), Error);
    CHECK_THROWS_AS(parse_point("abc", 1), Error);
    CHECK_THROWS_AS(parse_point("1+i", 2), Error);
}

TEST_CASE("count csv") {
    CHECK(count_csv({}) == "z,R,tau,k,count,prediction,ratio,regime\n");
    const auto& g = preset("modular");
    std::vector<CountRecord> recs;
    for (int k : {5, 4}) {
        auto q = CountQuery::make(g, {Rational(1, 2), 0}, Rational(1, 4), Rational(1, 2), k);
        recs.push_back(count_in_ball(q));
    }
    const std::string csv = count_csv(recs);
    CHECK(csv ==
          "z,R,tau,k,count,prediction,ratio,regime\n"
          "1/2,1/4,1/2,5,6,16,0.375,local-out-of-regime\n"
          "1/2,1/4,1/2,4,2,8,0.25,theoretical-out-of-regime\n");
    auto rev = recs;
    std::swap(rev[0], rev[1]);
    CHECK(count_csv(rev) == csv);
}

TEST_CASE("json and files") {
    const ComparabilityBand b{0.5, 2, 7};
    const Json j = band_json(b);
    CHECK(dump(j) == "{\n  \"c_lo\": 0.5,\n  \"c_hi\": 2.0,\n  \"spread\": 4.0,\n  \"n_records\": 7\n}\n");
    const auto back = band_from_json(j);
    CHECK(back.c_lo == 0.5);
    CHECK(back.n_records == 7);

    const auto dir = std::filesystem::temp_directory_path() / "horocount_report_test";
    std::filesystem::remove_all(dir);
    write_text(dir / "a" / "b.txt", "x\ny\n");
    CHECK(read_text(dir / "a" / "b.txt") == "x\ny\n");
    CHECK_THROWS_AS(read_text(dir / "missing"), Error);
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(calibration_from_json(Json{{"group", "modular"}}), Error);
}

TEST_CASE("plotdata") {
    const Series s{"witness@1/2", {{-1, -2}, {-2, -4.5}}};
    CHECK(plotdata(s) == "# witness@1/2\n# log_r log_value\n-1 -2\n-2 -4.5\n");
    CHECK(slug(s.label) == "witness-1_2");
}
