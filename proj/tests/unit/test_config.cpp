#include <doctest.h>

#include "magopt/config.hpp"

using namespace magopt;

TEST_CASE("parse_config: minimal document and documented defaults") {
    const RunPlan p = parse_config(
        "[problem]\n"
        "name = jos1\n"
        "n = 50\n"
        "[solver]\n"
        "mode = mag_gm\n");
    CHECK(p.problem_name == "jos1");
    CHECK(p.n == 50);
    CHECK(p.a == 0.0);
    CHECK(p.b == 0.25);
    CHECK(p.s == 0.0);  // auto = 1/L
    CHECK(p.eps == 1e-10);
    CHECK(p.k_max == 100000);
    CHECK(p.x0_auto);
    CHECK(p.refs_count == 64);
    CHECK(!p.store_iterates);
    CHECK(p.resolve_s(p.build_problem()) == doctest::Approx(25.0));
}

TEST_CASE("parse_config: momentum range rejections") {
    CHECK_THROWS_WITH_AS(parse_config("[problem]\nname = jos1\nn = 2\n"
                                      "[solver]\nmode = mag_gm\nb = 0.3\n"),
                         "config: b must lie in [a^2/4, 1/4]", input_error);
    // 0.05 < a^2/4 = 0.0625.
    CHECK_THROWS_AS(parse_config("[problem]\nname = jos1\nn = 2\n"
                                 "[solver]\nmode = mag_gm\na = 0.5\nb = 0.05\n"),
                    input_error);
    CHECK_NOTHROW(parse_config("[problem]\nname = jos1\nn = 2\n"
                               "[solver]\nmode = mag_gm\na = 0.5\nb = 0.0625\n"));
}

TEST_CASE("parse_config: grammar errors carry line numbers, unknown keys rejected") {
    try {
        parse_config("[problem]\nname = jos1\nn = 2\nbogus line\n");
        FAIL("expected data_error");
    } catch (const data_error& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config("[problem]\nname = jos1\nn = 2\nwhat = 1\n"),
                    data_error);
    CHECK_THROWS_AS(parse_config("[wat]\nname = jos1\n"), data_error);
    CHECK_THROWS_AS(parse_config("name = jos1\n"), data_error);  // key before section
    CHECK_THROWS_AS(parse_config("[problem]\nname = jos1\nn = 2\nn = 3\n"), data_error);
    CHECK_THROWS_AS(parse_config("[problem]\nname = jos1\nn = two\n"), data_error);

    // Mode-dependent keys: alpha is mavd-only.
    CHECK_THROWS_AS(parse_config("[problem]\nname = jos1\nn = 2\n"
                                 "[solver]\nmode = mag_gm\nalpha = 3\n"),
                    data_error);
    // a/b make no sense for the steepest-descent baseline.
    CHECK_THROWS_AS(parse_config("[problem]\nname = jos1\nn = 2\n"
                                 "[solver]\nmode = msd\na = 0.5\n"),
                    data_error);
}

TEST_CASE("parse_config: comments, whitespace and x0 forms") {
    const RunPlan p = parse_config(
        "# leading comment\n"
        "[problem]\n"
        "name = quadratic_ensemble   # trailing comment\n"
        "n = 3\n"
        "m = 4\n"
        "seed = 17\n"
        "x0 = 1.5, -2, 0.25\n"
        "\n"
        "[solver]\n"
        "mode = msd\n"
        "s = 0.01\n"
        "[output]\n"
        "dir = /tmp/somewhere\n"
        "store_iterates = true\n"
        "refs = 8\n");
    CHECK(p.m == 4);
    CHECK(p.seed == 17);
    REQUIRE(!p.x0_auto);
    CHECK(p.x0_explicit.size() == 3);
    CHECK(p.x0_explicit[1] == -2.0);
    CHECK(p.mode == RunMode::msd);
    CHECK(p.s == 0.01);
    CHECK(p.store_iterates);
    CHECK(p.refs_count == 8);

    CHECK_THROWS_AS(parse_config("[problem]\nname = jos1\nn = 2\nx0 = 1,2,3\n"),
                    input_error);  // wrong length
    CHECK_THROWS_AS(parse_config("[problem]\nname = jos1\nn = 2\nm = 3\n"),
                    input_error);  // jos1 is biobjective
}

TEST_CASE("parse_config rejects sweep lists; parse_sweep expands them") {
    CHECK_THROWS_AS(parse_config("[problem]\nname = jos1\nn = 2\n"
                                 "[solver]\nmode = mag_gm\na = 0, 0.5\n"),
                    data_error);

    const auto plans = parse_sweep(
        "[problem]\n"
        "name = jos1\n"
        "n = 2, 4\n"
        "[solver]\n"
        "mode = mag_gm\n"
        "a = 0, 0.5\n"
        "b = 0.25\n");
    REQUIRE(plans.size() == 4);
    CHECK(plans[0].n == 2);
    CHECK(plans[0].a == 0.0);
    CHECK(plans[1].n == 2);
    CHECK(plans[1].a == 0.5);
    CHECK(plans[3].n == 4);
    CHECK(plans[3].a == 0.5);

    // Not every key is sweepable.
    CHECK_THROWS_AS(parse_sweep("[problem]\nname = jos1, jos1\nn = 2\n"), data_error);
}

TEST_CASE("render/parse round trip yields an equivalent plan") {
    for (const char* text :
         {"[problem]\nname = jos1\nn = 5\n[solver]\nmode = mag_gm\na = 0.5\nb = 0.25\n",
          "[problem]\nname = quadratic_ensemble\nn = 3\nm = 2\nseed = 9\n"
          "[solver]\nmode = msd\ns = 0.05\neps = 1e-8\nk_max = 77\n",
          "[problem]\nname = jos1\nn = 2\n"
          "[solver]\nmode = mavd\nalpha = 2.5\ndt = 0.002\nt_end = 30\n"
          "sample_every = 10\n[output]\nrefs = 7\nstore_iterates = true\n"}) {
        const RunPlan p = parse_config(text);
        const RunPlan q = parse_config(render_config(p));
        CHECK(p.equivalent(q));
        CHECK(q.equivalent(p));
    }
}
