#include <fstream>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "gridres/matpower.hpp"
#include "oracles/corrupt_corpus.hpp"

using namespace gridres;

namespace {

const char* kTwoBusCase = R"(
% minimal two-bus case
mpc.baseMVA = 100;
mpc.bus = [
    1  3  0   0  0 0 1 1 0 135 1 1.05 0.95;
    2  1  80  0  0 0 1 1 0 135 1 1.05 0.95;
];
mpc.gen = [
    1  0 0 10 -10 1 100 1 100 0;
];
mpc.branch = [
    1  2  0.01  0.1  0  50  50  50  0 0 1 -360 360;
];
)";

std::string read_data_file(const char* name) {
    std::ifstream in(std::string(GRIDRES_DATA_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("hand-written two-bus case round-trips") {
    const GridCase g = parse_matpower_case(kTwoBusCase, "twobus");
    REQUIRE(g.buses.size() == 2);
    REQUIRE(g.lines.size() == 1);
    REQUIRE(g.generators.size() == 1);
    CHECK(g.base_mva == 100.0);
    CHECK(g.buses[1].base_load == 80.0);
    CHECK(g.generators[0].p_max == 100.0);
    CHECK(g.lines[0].reactance == Catch::Approx(0.1));
    CHECK(g.lines[0].pl_max == 50.0);
    CHECK(g.buses[1].voll == 1000.0);  // uniform default
}

TEST_CASE("bundled 30-bus case parses to the published component counts") {
    const GridCase g = parse_matpower_case(read_data_file("case30.m"), "case30.m");
    CHECK(g.buses.size() == 30);
    CHECK(g.lines.size() == 41);
    CHECK(g.generators.size() == 6);
    CHECK(g.total_base_load() == Catch::Approx(189.2));

    const IncidenceMatrix inc = incidence(g);
    REQUIRE(inc.n_lines == 41);
    REQUIRE(inc.n_buses == 30);
    for (int l = 0; l < inc.n_lines; ++l) {
        int nonzero = 0;
        for (int b = 0; b < inc.n_buses; ++b) nonzero += inc.at(l, b) != 0;
        CHECK(nonzero == 2);
    }
}

TEST_CASE("branch referencing an absent bus names it") {
    std::string text(kTwoBusCase);
    const auto pos = text.find("1  2  0.01");
    text.replace(pos, 4, "1 99 ");
    try {
        parse_matpower_case(text, "badref");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("99") != std::string::npos);
    }
}

TEST_CASE("rateA of zero becomes a finite non-binding cap") {
    std::string text(kTwoBusCase);
    const auto pos = text.find("0.1  0  50");
    text.replace(pos, 10, "0.1  0  0 ");
    const GridCase g = parse_matpower_case(text, "unlimited");
    CHECK(g.lines[0].pl_max == Catch::Approx(10.0 * 80.0));
}

TEST_CASE("corrupted case corpus is rejected with positioned errors") {
    const std::string base = read_data_file("case30.m");
    const std::vector<std::string> corpus = gridres::testing::corrupted_case_corpus(base);
    CHECK(corpus.size() >= 20);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        INFO("corrupted variant " << i);
        bool positioned = false;
        try {
            (void)parse_matpower_case(corpus[i], "corrupt");
        } catch (const ParseError& e) {
            positioned = e.line() >= 1;
        } catch (const ValidationError&) {
            positioned = true;  // semantic rejections carry the offending id instead
        }
        CHECK(positioned);
    }
}
