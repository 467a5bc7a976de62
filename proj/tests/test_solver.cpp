#include <doctest.h>

#include <cmath>
#include <random>

#include "doubletopt/errors.hpp"
#include "doubletopt/oracle.hpp"
#include "doubletopt/solver.hpp"

#include "support/fixtures.hpp"

using namespace doubletopt;

TEST_CASE("empty instance solves to the empty installation") {
    const auto problem = make_block_problem("B0", {}, testsupport::scenario_lps(1.0, 2.0));
    const auto sol = solve_milp(build_milp(problem));
    CHECK(sol.n_doublet == 0);
    CHECK(sol.q_block == 0.0);
    CHECK(sol.certificate.proven_optimal);
    CHECK(sol.certificate.gap == 0.0);
}

TEST_CASE("single line installs its only admissible pair at 6 l/s") {
    const auto problem = testsupport::single_line_problem();
    const auto sol = solve_milp(build_milp(problem));
    REQUIRE(sol.n_doublet == 1);
    CHECK(sol.q_block == doctest::Approx(lps_to_si(6.0)).epsilon(1e-9));
    CHECK(sol.installed[0].ext_well_id == "L000.W00");
    CHECK(sol.installed[0].inj_well_id == "L000.W01");
    CHECK(sol.certificate.proven_optimal);
    CHECK(audit_solution(sol, problem).empty());
}

TEST_CASE("wells closer than delta_min forbid the doublet") {
    const auto problem = testsupport::single_line_problem(8.0);
    const auto sol = solve_milp(build_milp(problem));
    CHECK(sol.n_doublet == 0);
    CHECK(sol.q_block == 0.0);
    CHECK(sol.certificate.proven_optimal);
}

TEST_CASE("coupled pair shares 15 l/s") {
    const auto problem = testsupport::coupled_pair_problem();
    const auto sol = solve_milp(build_milp(problem));
    CHECK(sol.n_doublet == 2);
    // split among alternate optima is unspecified; the objective is not
    CHECK(sol.q_block == doctest::Approx(lps_to_si(15.0)).epsilon(1e-9));
    CHECK(audit_solution(sol, problem).empty());
}

TEST_CASE("node budget reports an honest gap") {
    const auto problem = testsupport::coupled_pair_problem();
    const auto sol = solve_milp(build_milp(problem), Budget{0, 60.0});
    CHECK_FALSE(sol.certificate.proven_optimal);
    CHECK(sol.certificate.gap >= 0.0);
}

TEST_CASE("determinism: identical runs, identical solutions") {
    std::mt19937 rng(2024);
    for (int i = 0; i < 10; ++i) {
        const auto problem = testsupport::random_instance(rng);
        const auto inst = build_milp(problem);
        const auto a = solve_milp(inst);
        const auto b = solve_milp(inst);
        CHECK(a.q_block == b.q_block);  // bit-identical
        CHECK(a.node_count == b.node_count);
        REQUIRE(a.installed.size() == b.installed.size());
        for (std::size_t d = 0; d < a.installed.size(); ++d) {
            CHECK(a.installed[d].line_id == b.installed[d].line_id);
            CHECK(a.installed[d].ext_well_id == b.installed[d].ext_well_id);
            CHECK(a.installed[d].inj_well_id == b.installed[d].inj_well_id);
            CHECK(a.installed[d].q == b.installed[d].q);
        }
    }
}

TEST_CASE("oracle equivalence on random instances") {
    std::mt19937 rng(99);
    for (int i = 0; i < 60; ++i) {
        const auto problem = testsupport::random_instance(rng);
        const auto sol = solve_milp(build_milp(problem));
        const auto ref = oracle::brute_force_optimum(problem);
        CHECK(std::abs(sol.q_block - ref.objective) <=
              1e-6 * std::max(1.0, std::abs(ref.objective)));
        CHECK(audit_solution(sol, problem).empty());
    }
}

TEST_CASE("audit flags hand-built violations") {
    const auto problem = testsupport::single_line_problem();
    BlockSolution sol;
    sol.block_id = problem.block_id;

    SUBCASE("rate above the extraction drawdown threshold") {
        sol.installed.push_back(
            InstalledDoublet{"L000", "L000.W00", "L000.W01", lps_to_si(11.0)});
        sol.q_block = lps_to_si(11.0);
        sol.n_doublet = 1;
        const auto violations = audit_solution(sol, problem);
        bool found = false;
        for (const auto& v : violations)
            if (v.family == "drawdown" || v.family == "install_cap" || v.family == "upconing")
                found = true;
        CHECK(found);
    }

    SUBCASE("injection upstream of extraction") {
        sol.installed.push_back(
            InstalledDoublet{"L000", "L000.W01", "L000.W00", lps_to_si(5.0)});
        sol.q_block = lps_to_si(5.0);
        sol.n_doublet = 1;
        bool found = false;
        for (const auto& v : audit_solution(sol, problem))
            if (v.family == "pair_order") found = true;
        CHECK(found);
    }

    SUBCASE("two installed lines below the spacing floor") {
        auto l0 = testsupport::make_line(
            "L000", 0.0, {testsupport::WellSpec{0, 20, 20, 5e-4},
                          testsupport::WellSpec{20, 20, 20, 5e-4}});
        auto l1 = testsupport::make_line(
            "L001", 15.0, {testsupport::WellSpec{0, 20, 20, 5e-4},
                           testsupport::WellSpec{20, 20, 20, 5e-4}});
        // r_delta * delta_min = 20 m > 15 m separation
        const auto spaced = make_block_problem("B0", {l0, l1}, testsupport::scenario_lps(1, 2));
        BlockSolution bad;
        bad.block_id = "B0";
        bad.installed.push_back(InstalledDoublet{"L000", "L000.W00", "L000.W01", lps_to_si(2)});
        bad.installed.push_back(InstalledDoublet{"L001", "L001.W00", "L001.W01", lps_to_si(2)});
        bad.q_block = lps_to_si(4);
        bad.n_doublet = 2;
        bool found = false;
        for (const auto& v : audit_solution(bad, spaced))
            if (v.family == "line_spacing") found = true;
        CHECK(found);
    }

    SUBCASE("solver output audits clean") {
        const auto good = solve_milp(build_milp(problem));
        CHECK(audit_solution(good, problem).empty());
    }
}

TEST_CASE("presolved degenerate lines never appear installed") {
    auto l0 = testsupport::make_line("L000", 0.0,
                                     {testsupport::WellSpec{0, 20, 20, 0.0},
                                      testsupport::WellSpec{20, 20, 20, 0.0}});
    auto l1 = testsupport::make_line("L001", 30.0,
                                     {testsupport::WellSpec{0, 20, 20, 5e-4},
                                      testsupport::WellSpec{20, 20, 20, 5e-4}});
    const auto problem = make_block_problem("B0", {l0, l1}, testsupport::scenario_lps(1, 2));
    const auto sol = solve_milp(build_milp(problem));
    for (const auto& d : sol.installed) CHECK(d.line_id != "L000");
    CHECK(audit_solution(sol, problem).empty());
}
