#include <doctest.h>

#include <cmath>

#include "hyperell/report.hpp"

using namespace hyperell;

TEST_CASE("experiment config round-trips losslessly") {
    ExperimentConfig cfg;
    cfg.set("experiment", "moments");
    cfg.set("q", (long long)3);
    cfg.set("theta", 0.012345678901234567);
    cfg.set("out", "path with spaces.csv");

    std::string text = cfg.to_text();
    ExperimentConfig back = ExperimentConfig::from_text(text);
    CHECK(back.get("experiment") == "moments");
    CHECK(back.get("q") == "3");
    CHECK(back.get("theta") == cfg.get("theta"));
    CHECK(back.get("out") == "path with spaces.csv");
    CHECK(back.to_text() == text);
}

TEST_CASE("config text: comments and blank lines") {
    auto cfg = ExperimentConfig::from_text("# a comment\n q = 5 \n\nn = 9 # trailing\n");
    CHECK(cfg.get("q") == "5");
    CHECK(cfg.get("n") == "9");
    CHECK_FALSE(cfg.has("missing"));
}

TEST_CASE("double formatting: 17 significant digits, round-trip exact") {
    for (double v : {1.0 / 3.0, 2.718281828459045, -1e-300, 0.0, 88.0}) {
        std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK_THROWS(format_double(std::nan("")));
    CHECK_THROWS(format_double(INFINITY));
    CHECK(format_or_inf(INFINITY) == "inf");
}

TEST_CASE("csv writer: header, quoting, comments") {
    CsvWriter w;
    w.comment("q = 3");
    w.header({"a", "b"});
    w.row({"1", "x,y"});
    w.row({"2", "say \"hi\""});
    CHECK(w.str() == "# q = 3\na,b\n1,\"x,y\"\n2,\"say \"\"hi\"\"\"\n");
    CHECK_THROWS(w.row({"only-one"}));
}
