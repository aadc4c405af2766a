#include "doctest.h"

#include <sstream>

#include "mmsched/experiment.hpp"

using namespace mms;

TEST_CASE("single-platform experiment row on the worked example")
{
	Experiment_config cfg;
	cfg.jobs = {50, 80, 99};
	cfg.m = 3;
	cfg.speed_min = 1;
	cfg.speed_max = 1;
	cfg.speed_step = 1;
	const auto result = run_experiment(cfg);
	REQUIRE(result.rows.size() == 1);
	// only platform in the grid is [1,1,1]; check lambda of the identical row
	CHECK(result.rows[0].lambda == 2);
	CHECK(result.rows[0].exhaustive);
	CHECK(result.rows[0].emin >= 0);
}

TEST_CASE("the [1,2,10] platform matches the hand-derived errors")
{
	// drive the row computation directly to pin the known values
	const Job_set jobs = sorted_ascending(make_jobs({50, 80, 99}));
	const Platform platform{{1, 2, 10}};
	const auto oracle = exact_max(jobs, platform);
	CHECK(oracle.max_makespan == 20);
	const time_value ms1 = unif_fjp_ms1(jobs, platform);
	const time_value emin = (ms1 - 20) / 20 * 100;
	CHECK(emin == ratio(67, 26)); // about 2.577 percent
	CHECK(to_decimal_string(emin, 3) == "2.577");
}

TEST_CASE("tiny grid: errors are non-negative and Emin is the row minimum")
{
	Experiment_config cfg;
	cfg.jobs = {5, 8, 13, 21};
	cfg.m = 2;
	cfg.speed_min = 1;
	cfg.speed_max = 11;
	cfg.speed_step = 5;
	const auto result = run_experiment(cfg);
	CHECK(result.rows.size() == 9); // 3 levels ^ 2 CPUs
	for (const auto& row : result.rows) {
		CHECK(row.exhaustive);
		CHECK(row.e1 >= 0);
		CHECK(row.e2 >= 0);
		CHECK(row.e3 >= 0);
		CHECK(row.emin == std::min({row.e1, row.e2, row.e3}));
		CHECK(row.emin <= row.e1);
	}
	// identical rows carry lambda = m - 1
	for (const auto& row : result.rows)
		if (row.speeds.front() == row.speeds.back())
			CHECK(row.lambda == 1);

	// summary invariants
	for (const auto* stats :
	     {&result.e1, &result.e2, &result.e3, &result.emin}) {
		CHECK(stats->min <= stats->q1);
		CHECK(stats->q1 <= stats->median);
		CHECK(stats->median <= stats->q3);
		CHECK(stats->q3 <= stats->max);
		CHECK(stats->variance >= 0);
		CHECK(stats->bias >= 0); // bounds sit above the exact value
	}
	CHECK(result.emin.mean <= result.e1.mean);
}

TEST_CASE("sampled fallback engages beyond the exhaustive limit")
{
	Experiment_config cfg;
	cfg.jobs = {1, 2, 3, 4, 5};
	cfg.m = 1;
	cfg.speed_min = 1;
	cfg.speed_max = 1;
	cfg.speed_step = 1;
	cfg.exhaustive_limit = 3;
	cfg.samples = 10;
	const auto result = run_experiment(cfg);
	REQUIRE(result.rows.size() == 1);
	CHECK(!result.rows[0].exhaustive);

	cfg.force_exhaustive = true;
	CHECK_THROWS_WITH_AS(run_experiment(cfg), doctest::Contains("120"),
	                     std::invalid_argument);
}

TEST_CASE("experiment CSV layout")
{
	Experiment_config cfg;
	cfg.jobs = {3, 4};
	cfg.m = 2;
	cfg.speed_min = 1;
	cfg.speed_max = 2;
	cfg.speed_step = 1;
	const auto result = run_experiment(cfg);
	std::ostringstream out;
	write_experiment_csv(out, result);
	const std::string text = out.str();
	CHECK(text.find("speeds,lambda,E1,E2,E3,Emin,exact,ms1,ms2,ms3,oracle") !=
	      std::string::npos);
	CHECK(text.find("\nstat,E1,E2,E3,Emin\n") != std::string::npos);
	CHECK(text.find("mse,") != std::string::npos);
	CHECK(text.find("exhaustive") != std::string::npos);
}

TEST_CASE("table of reference processing times")
{
	const auto jobs = table_v_jobs();
	REQUIRE(jobs.size() == 10);
	CHECK(jobs[0] == 3896);
	CHECK(jobs[9] == 4672);
	time_value sum = 0;
	for (const auto& c : jobs)
		sum += c;
	CHECK(sum == 24758);
}

TEST_CASE("an empty speed grid is rejected")
{
	Experiment_config cfg;
	cfg.jobs = {1, 2};
	cfg.m = 1;
	cfg.speed_min = 5;
	cfg.speed_max = 1;
	CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}
