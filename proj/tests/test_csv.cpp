#include "colexforge/csv.hpp"
#include "colexforge/error.hpp"

#include <doctest.h>

namespace csv = colexforge::csv;
using colexforge::Error;
using colexforge::ErrorKind;

TEST_CASE("csv parses quoted fields, embedded newlines and CRLF") {
    const auto t = csv::parse("\xEF\xBB\xBF" "a,b,c\r\n1,\"x,y\",\"say \"\"hi\"\"\"\r\n2,\"multi\nline\",\r\n");
    REQUIRE(t.header == csv::Row{"a", "b", "c"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == csv::Row{"1", "x,y", "say \"hi\""});
    CHECK(t.rows[1] == csv::Row{"2", "multi\nline", ""});
}

TEST_CASE("csv round trip") {
    csv::Table t;
    t.header = {"id", "text"};
    t.rows = {{"1", "plain"}, {"2", "comma, inside"}, {"3", "quote \" inside"}, {"4", "k ä + s i"}};
    const auto text = csv::to_string(t);
    const auto back = csv::parse(text);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK(csv::to_string(back) == text);
}

TEST_CASE("csv rejects ragged rows and unterminated quotes") {
    try {
        csv::parse("a,b\n1,2,3\n", "ragged.csv");
        FAIL("expected MalformedCsv");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedCsv);
        CHECK(std::string(e.what()).find("ragged.csv") != std::string::npos);
    }
    CHECK_THROWS_AS(csv::parse("a\n\"open\n"), Error);
}

TEST_CASE("require_column names the missing header") {
    const auto t = csv::parse("x,y\n");
    CHECK(t.column("y") == 1u);
    CHECK_FALSE(t.column("z").has_value());
    try {
        t.require_column("z", "forms.csv");
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedCsv);
        CHECK(std::string(e.what()).find("z") != std::string::npos);
    }
}
