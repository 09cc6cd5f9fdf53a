#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "qdgate/scenarios.hpp"

using namespace qdgate;
using Catch::Approx;

namespace {

const char* kOutDir = "scenario_test_out";

// Shared runs: several cases compare the two collinear CW scenarios, and
// Catch2 would repeat any run placed inside a multi-section case.
const CwTransferResult& fig5_result() {
    static const CwTransferResult r = run_fig5(kOutDir);
    return r;
}

const std::map<std::string, double>& fig6_summary() {
    static const std::map<std::string, double> m = run_scenario("fig6", kOutDir);
    return m;
}

size_t csv_data_rows(const std::string& path, std::string& header) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::getline(in, header);
    size_t rows = 0;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) ++rows;
    return rows;
}

} // namespace

TEST_CASE("scenario registry and dispatch errors") {
    const auto names = scenario_names();
    const std::vector<std::string> expected = {"fig2",     "fig3",     "fig5",
                                               "fig6",     "sqrtswap", "scheme1-demo"};
    CHECK(names == expected);

    CHECK_THROWS_AS(run_scenario("fig7", ""), std::invalid_argument);
    CHECK_THROWS_AS(run_scenario("", ""), std::invalid_argument);
    CHECK_THROWS_AS(run_scenario("SQRTSWAP", ""), std::invalid_argument);
}

TEST_CASE("equal drive amplitudes leave the transfer fractional") {
    const CwTransferResult& r = fig5_result();

    CHECK(r.beta2 == 1.0);
    CHECK(r.p00_max < 0.006);
    CHECK(r.p11_max < 0.006);
    // the interference of the two exchange paths caps the swap well below 1
    CHECK(r.p10_max < 0.9);
    CHECK(r.p10_max > 0.05);
    CHECK(r.p01_min > 0.85);
    CHECK(r.traj.norm_drift <= 1e-8);

    std::string header;
    const auto path = std::filesystem::path(kOutDir) / "fig5_trajectory.csv";
    const size_t rows = csv_data_rows(path.string(), header);
    CHECK(header == "t,P00,P01,P10,P11,norm,n_mean");
    CHECK(rows == r.traj.t.size());
}

TEST_CASE("matched amplitude ratio restores the full swap") {
    const auto& sum = fig6_summary();

    CHECK(sum.at("beta") == Approx(1.6837).margin(5e-5));
    CHECK(sum.at("p00_max") < 0.015);
    CHECK(sum.at("p11_max") < 0.015);
    CHECK(sum.at("p10_max") >= 0.95);
    CHECK(sum.at("p01_min") < 0.02);

    // equal amplitudes transfer strictly less than the matched ratio
    CHECK(fig5_result().p10_max < sum.at("p10_max"));

    // the summary JSON echoes the returned map exactly
    std::ifstream in(std::filesystem::path(kOutDir) / "fig6_summary.json");
    REQUIRE(in.good());
    const ojson j = ojson::parse(in);
    for (const auto& [k, v] : sum) {
        REQUIRE(j.contains(k));
        CHECK(j.at(k).get<double>() == v);
    }

    CHECK(std::filesystem::exists(std::filesystem::path(kOutDir) / "fig6_trajectory.csv"));
}

TEST_CASE("leakage scan across the detuning gap family") {
    const Fig3Result r = run_fig3(kOutDir);
    REQUIRE(r.rows.size() == 5);

    // middle of the family is the textbook working point
    CHECK(r.rows[2].gap == 20.0);
    CHECK(r.rows[2].p00_pred == Approx(0.0012731).margin(1e-7));
    CHECK(r.rows[2].p11_pred == Approx(0.0018904).margin(1e-7));

    for (const auto& row : r.rows) {
        CHECK(row.p00_max == Approx(row.p00_pred).epsilon(0.10));
        CHECK(row.p11_max == Approx(row.p11_pred).epsilon(0.10));
    }
    for (size_t i = 1; i < r.rows.size(); ++i) {
        CHECK(r.rows[i].p00_max < r.rows[i - 1].p00_max);
        CHECK(r.rows[i].p11_max < r.rows[i - 1].p11_max);
    }

    std::string header;
    const auto path = std::filesystem::path(kOutDir) / "fig3_scan.csv";
    CHECK(csv_data_rows(path.string(), header) == 5);
    CHECK(header == "gap,P00_max,P11_max,P00_pred,P11_pred");
}

TEST_CASE("scheme-one drive exchanges the double occupation") {
    const Scheme1Result r = run_scheme1_demo(kOutDir);

    // |00,n> <-> |11,n> is the resonant channel; the single-excitation
    // states stay spectators
    CHECK(r.p11_max >= 0.95);
    CHECK(r.p01_max < 0.05);
    CHECK(r.p10_max < 0.05);
    CHECK(r.traj.p00.front() == Approx(1.0).margin(1e-9));
    CHECK(r.traj.norm_drift <= 1e-8);

    CHECK(std::filesystem::exists(std::filesystem::path(kOutDir) /
                                  "scheme1_trajectory.csv"));
}
