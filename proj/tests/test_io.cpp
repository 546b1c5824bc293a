#include <doctest.h>

#include <cmath>
#include <sstream>

#include "neat/io.hpp"

using namespace neat;

TEST_CASE("edge TSV parsing") {
    SUBCASE("comments and blank lines are skipped") {
        std::istringstream in("# header\n\na\tb\nb\tc\n");
        const auto rows = read_edge_tsv(in, NetworkKind::Directed);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].from == "a");
        CHECK(rows[1].to == "c");
    }
    SUBCASE("third column is honored only for mixed networks") {
        std::istringstream mixed("a\tb\tu\nb\tc\td\n");
        const auto rows = read_edge_tsv(mixed, NetworkKind::Mixed);
        CHECK(rows[0].undirected);
        CHECK_FALSE(rows[1].undirected);

        std::istringstream directed("a\tb\tu\n");
        CHECK_FALSE(read_edge_tsv(directed, NetworkKind::Directed)[0].undirected);
    }
    SUBCASE("errors carry line numbers") {
        std::istringstream in("a\tb\nbroken line\n");
        try {
            read_edge_tsv(in, NetworkKind::Directed);
            FAIL("expected BadInput");
        } catch (const BadInput& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("bad mixed markers are rejected") {
        std::istringstream in("a\tb\tx\n");
        CHECK_THROWS_AS(read_edge_tsv(in, NetworkKind::Mixed), BadInput);
    }
    SUBCASE("windows line endings are tolerated") {
        std::istringstream in("a\tb\r\nb\tc\r\n");
        const auto rows = read_edge_tsv(in, NetworkKind::Directed);
        REQUIRE(rows.size() == 2);
        CHECK(rows[1].to == "c");
    }
}

TEST_CASE("GMT parsing") {
    SUBCASE("members after name and description") {
        std::istringstream in("setA\tdescription A\tg1\tg2\tg3\nsetB\t-\tg2\n");
        const auto sets = read_gmt(in);
        REQUIRE(sets.size() == 2);
        CHECK(sets[0].name == "setA");
        CHECK(sets[0].members.size() == 3);
        CHECK(sets[1].members.size() == 1);
    }
    SUBCASE("duplicate members collapse") {
        std::istringstream in("s\td\tg1\tg1\tg2\n");
        CHECK(read_gmt(in)[0].members.size() == 2);
    }
    SUBCASE("a set may have no members") {
        std::istringstream in("s\tdescription only\n");
        const auto sets = read_gmt(in);
        REQUIRE(sets.size() == 1);
        CHECK(sets[0].members.empty());
    }
    SUBCASE("duplicate set names are an error") {
        std::istringstream in("s\td\tg1\ns\td\tg2\n");
        CHECK_THROWS_AS(read_gmt(in), BadInput);
    }
    SUBCASE("missing description column is an error with a line number") {
        std::istringstream in("only_name\n");
        try {
            read_gmt(in);
            FAIL("expected BadInput");
        } catch (const BadInput& e) {
            CHECK(std::string(e.what()).find("line 1") != std::string::npos);
        }
    }
}

TEST_CASE("results TSV formatting") {
    EnrichmentResult clean;
    clean.set_a = "A";
    clean.set_b = "B";
    clean.direction = Direction::AtoB;
    clean.n_ab = 2;
    clean.mu0 = 1.25;
    clean.p = 0.5;
    clean.log10_p = std::log10(0.5);
    clean.call = Call::NoEvidence;

    EnrichmentResult extreme = clean;
    extreme.set_b = "C";
    extreme.p = 0.0;
    extreme.log10_p = -310.25;
    extreme.call = Call::Over;

    EnrichmentResult degenerate;
    degenerate.set_a = "A";
    degenerate.set_b = "D";
    degenerate.degenerate = true;
    degenerate.flags = "degenerate,o_A=0";

    std::ostringstream out;
    write_results_tsv(out, {clean, extreme, degenerate});
    const std::string text = out.str();

    CHECK(text.find("set_a\tset_b\tdirection\tn_ab\tmu0\tp\tlog10_p\tadj_p\tcall\tflags\tlog10_p_disp") == 0);
    CHECK(text.find("A\tB\tAtoB\t2\t1.25\t0.5\t") != std::string::npos);
    // numeric column keeps the value; only the display column gets the sentinel
    CHECK(text.find("-310.25") != std::string::npos);
    CHECK(text.find("<-300") != std::string::npos);
    CHECK(text.find("\tNA\tNA\tNoEvidence\tdegenerate,o_A=0\tNA") != std::string::npos);
}

TEST_CASE("doubles round-trip through 17 significant digits") {
    const double v = 0.12345678901234567;
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "NA");
}
