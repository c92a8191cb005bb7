#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "torsionlab/scan.hpp"

using namespace torsionlab;
using nlohmann::json;

namespace {
Config fast_cfg() {
    Config cfg;
    cfg.precision_digits = 50;
    cfg.cf_max_steps = 64;
    cfg.coeff_bit_cap = std::size_t(1) << 14;
    cfg.jobs = 2;
    return cfg;
}
} // namespace

TEST_CASE("pell_torsion_scan at n_max = 4 reports no violations") {
    auto rep = pell_torsion_scan(4, 64, fast_cfg());
    CHECK(rep.summary["violations"].get<int>() == 0);
    CHECK(rep.summary["torsion_total"].get<int>() >= 3);
    CHECK(rep.summary["torsion_solvable"] == rep.summary["torsion_total"]);
    CHECK(rep.summary["control_periodic"].get<int>() == 0);
    // lambda = 0 row is solvable
    bool found = false;
    for (const auto &r : rep.rows) {
        if (r.contains("error")) continue;
        if (r["group"] == "torsion" && r["lambda"]["type"] == "rational" &&
            r["lambda"]["value"] == "0") {
            found = true;
            CHECK(r["solvable"].get<bool>());
            CHECK(r["identity_exact"].get<bool>());
        }
        if (r["group"] == "control") {
            CHECK(r["certified_non_torsion_mazur"].get<bool>());
            CHECK(!r["periodic"].get<bool>());
        }
    }
    CHECK(found);
}

TEST_CASE("scan rows are deterministic given the seed") {
    auto a = pell_torsion_scan(3, 32, fast_cfg());
    auto b = pell_torsion_scan(3, 32, fast_cfg());
    CHECK(a.rows == b.rows);
    CHECK(a.summary == b.summary);
}

TEST_CASE("theorem4 case i: budget doubling does not shrink the hit set") {
    auto cfg = fast_cfg();
    cfg.cf_max_steps = 64;
    cfg.coeff_bit_cap = std::size_t(1) << 16;
    auto r1 = theorem4_scan("i", 4, 10, cfg);
    auto r2 = theorem4_scan("i", 4, 20, cfg);
    // monotonicity: every hit at k_max stays a hit at 2 k_max
    for (const auto &h : r1.summary["hits"]) {
        bool still = false;
        for (const auto &h2 : r2.summary["hits"])
            if (h2["lambda"] == h["lambda"] && h2["hit_n"] == h["hit_n"]) still = true;
        CHECK(still);
    }
    // the lambda = 0 row is the RhoOnCurveBranch error row, not a crash
    bool err_row = false;
    for (const auto &r : r1.rows)
        if (r.contains("error") && r["error"]["code"] == "RhoOnCurveBranch") err_row = true;
    CHECK(err_row);
}

TEST_CASE("theorem4 case ii control verifies q order 3 at lambda = 1/4") {
    auto cfg = fast_cfg();
    cfg.precision_digits = 50;
    auto rep = theorem4_scan("ii", 3, 6, cfg);
    bool control_seen = false;
    for (const auto &r : rep.rows) {
        if (r.contains("error")) continue;
        if (r["kind"] == "theorem4-ii-control") {
            control_seen = true;
            CHECK(r["q_order_3"].get<bool>());
            CHECK(r["q_order_3_other_m_root"].get<bool>());
        } else {
            CHECK(r["q_order_3"].get<bool>());
        }
    }
    CHECK(control_seen);
}

TEST_CASE("ribet_scan n_max = 4: full n^2 law and broken perturbations") {
    auto cfg = fast_cfg();
    auto rep = ribet_scan(4, cfg);
    CHECK(rep.summary["fraction_divides_n2"].get<double>() == 1.0);
    CHECK(rep.summary["every_E_torsion_lifts"].get<bool>());
    CHECK(rep.summary["perturbed_broken"].get<int>() ==
          rep.summary["perturbed_controls"].get<int>());
    CHECK(rep.summary["row_errors"].get<int>() == 0);
    // order multiset for n = 3 contains only divisors of 9
    for (auto &[m, c] : rep.summary["orders_by_n"]["3"].items())
        CHECK(9 % std::stol(m) == 0);
}

TEST_CASE("surface_count lemniscatic at m_max = 4") {
    auto cfg = fast_cfg();
    auto rep = surface_count("lemniscatic", 4, cfg);
    CHECK(rep.summary["ribet_all_lift"].get<bool>());
    CHECK(rep.summary["generic_none_lift"].get<bool>());
}

TEST_CASE("surface_count quartic counts match cleaned degrees") {
    auto cfg = fast_cfg();
    cfg.coeff_bit_cap = std::size_t(1) << 16;
    auto rep = surface_count("quartic", 4, cfg);
    for (const auto &r : rep.rows) {
        if (r.contains("error")) continue;
        if (r["kind"] == "surface-quartic-count")
            CHECK(r["count_matches_degree"].get<bool>());
    }
    CHECK(rep.summary["count_rows"] == rep.summary["count_matches_degree"]);
}

TEST_CASE("replay reproduces rows bit-for-bit") {
    auto cfg = fast_cfg();
    auto rep = pell_torsion_scan(3, 32, cfg);
    int replayed = 0;
    for (const auto &r : rep.rows) {
        if (r.contains("error") || r["group"] != "torsion") continue;
        auto out = replay_row(r, cfg);
        CHECK(out["reproduced"].get<bool>());
        ++replayed;
    }
    CHECK(replayed >= 1);

    auto rb = ribet_scan(3, cfg);
    auto out = replay_row(rb.rows[0], cfg);
    CHECK(out["reproduced"].get<bool>());
}

TEST_CASE("cache round trip") {
    auto cfg = fast_cfg();
    cfg.cache_dir = (std::filesystem::temp_directory_path() / "torsionlab-test-cache").string();
    std::filesystem::remove_all(cfg.cache_dir);
    auto rep = pell_torsion_scan(3, 32, cfg);
    auto cached = read_cache("pell-torsion", rep.parameters, cfg);
    REQUIRE(cached.has_value());
    CHECK((*cached)["summary"] == rep.summary);
    CHECK(!read_cache("pell-torsion", json{{"n_max", 99}}, cfg).has_value());
    std::filesystem::remove_all(cfg.cache_dir);
}
