#include "doctest.h"

#include <random>

#include "mmsched/bounds.hpp"
#include "mmsched/simkernel.hpp"

using namespace mms;

namespace {

// the 12-job set with sum 45 used throughout the identical-FJP examples
const std::vector<time_value> twelve{1, 1, 1, 1, 1, 1, 3, 3, 6, 6, 9, 12};

Job_set random_jobs(std::mt19937_64& rng, std::size_t n, bool ascending)
{
	std::vector<time_value> costs;
	for (std::size_t i = 0; i < n; i++)
		costs.push_back(ratio(static_cast<long>(rng() % 40),
		                           1 + static_cast<long>(rng() % 4)));
	Job_set jobs = make_jobs(costs);
	return ascending ? sorted_ascending(jobs) : jobs;
}

} // namespace

TEST_CASE("ident FJP bounds on the 12-job set")
{
	const Job_set jobs = make_jobs(twelve);
	const auto bounds = ident_fjp_idle_bounds(jobs, 3);
	CHECK(bounds.values == std::vector<time_value>{15, 18, 23});

	const auto legacy = ident_fjp_idle_bounds_legacy(jobs, 3);
	CHECK(legacy.values ==
	      std::vector<time_value>{15, ratio(37, 2), 23});

	CHECK(ident_fjp_makespan(jobs, 3) == 23);
}

TEST_CASE("ident FJP bounds, n = m and makespan cases")
{
	const Job_set jobs = make_jobs({2, 5, 9});
	CHECK(ident_fjp_idle_bounds(jobs, 3).values ==
	      std::vector<time_value>{2, 5, 9});
	CHECK(ident_fjp_idle_bounds_legacy(jobs, 3).values ==
	      std::vector<time_value>{2, 5, 9});

	CHECK(ident_fjp_makespan(make_jobs({20, 40, 40, 60}), 2) == 110);
	CHECK(ident_fjp_makespan(make_jobs({5}), 1) == 5);
}

TEST_CASE("ident FJP bounds reject unsorted input")
{
	CHECK_THROWS_AS(ident_fjp_idle_bounds(make_jobs({5, 2}), 2),
	                std::invalid_argument);
	CHECK_THROWS_AS(ident_fjp_idle_bounds_legacy(make_jobs({5, 2}), 2),
	                std::invalid_argument);
}

TEST_CASE("ident FJP: sampled assignments never beat the bound")
{
	const Job_set jobs = make_jobs(twelve);
	const auto bounds = ident_fjp_idle_bounds(jobs, 3);
	std::mt19937_64 rng(23);
	Priority_order order = identity_order(jobs);
	for (int trial = 0; trial < 3000; trial++) {
		for (std::size_t i = order.size() - 1; i > 0; i--)
			std::swap(order[i], order[rng() % (i + 1)]);
		const auto sim = schedule_identical(jobs, 3, order, false);
		for (std::size_t k = 0; k < 3; k++)
			REQUIRE(sim.idle_instants[k] <= bounds.values[k]);
	}
}

TEST_CASE("newer ident FJP bound is pointwise at most the legacy one")
{
	std::mt19937_64 rng(29);
	for (int trial = 0; trial < 300; trial++) {
		const std::size_t m = 1 + rng() % 4;
		const std::size_t n = m + rng() % 5;
		const Job_set jobs = random_jobs(rng, n, true);
		const auto fresh = ident_fjp_idle_bounds(jobs, m);
		const auto legacy = ident_fjp_idle_bounds_legacy(jobs, m);
		for (std::size_t k = 0; k < m; k++)
			REQUIRE(fresh.values[k] <= legacy.values[k]);
	}
}

TEST_CASE("ident FTP processed work on the 7-job set")
{
	const Job_set jobs = make_jobs({7, 2, 5, 16, 6, 5, 5});
	const auto matrix = ident_ftp_processed_work(jobs, 4);
	CHECK(matrix.work[2][5] == 8); // c_2 + c_5 on pi_3
	CHECK(matrix.work[0][3] == 0);
	CHECK(matrix.work[1][3] == 5);
	CHECK(matrix.work[2][3] == 2);
	CHECK(matrix.work[3][3] == 7);
	for (std::size_t k = 0; k < 4; k++)
		CHECK(matrix.work[k][0] == 0);
	CHECK(matrix.final_column() == std::vector<time_value>{16, 10, 8, 12});

	const auto bounds = ident_ftp_idle_bounds(jobs, 4);
	CHECK(bounds.values == std::vector<time_value>{8, 10, 12, 16});
	CHECK(ident_ftp_makespan(jobs, 4) == 16);

	// exactness: the simulator agrees bit-exactly
	const auto sim = schedule_identical(jobs, 4, identity_order(jobs));
	CHECK(sim.idle_instants == bounds.values);
}

TEST_CASE("ident FTP matrix columns change by exactly one entry")
{
	std::mt19937_64 rng(31);
	const Job_set jobs = random_jobs(rng, 6, false);
	const auto matrix = ident_ftp_processed_work(jobs, 3);
	for (std::size_t i = 1; i <= jobs.size(); i++) {
		int changed = 0;
		for (std::size_t k = 0; k < 3; k++)
			if (matrix.work[k][i] != matrix.work[k][i - 1]) {
				changed++;
				CHECK(matrix.work[k][i] ==
				      matrix.work[k][i - 1] + jobs[i - 1].cost);
			}
		CHECK(changed == (jobs[i - 1].cost == 0 ? 0 : 1));
	}
}

TEST_CASE("ident FTP equals the simulator on random instances")
{
	std::mt19937_64 rng(37);
	for (int trial = 0; trial < 1000; trial++) {
		const std::size_t m = 1 + rng() % 4;
		const std::size_t n = m + rng() % 5;
		const Job_set jobs = random_jobs(rng, n, false);
		const auto bounds = ident_ftp_idle_bounds(jobs, m);
		const auto sim = schedule_identical(jobs, m, identity_order(jobs),
		                                    false);
		REQUIRE(bounds.values == sim.idle_instants);
	}
}

TEST_CASE("ident FTP one job per CPU")
{
	const Job_set jobs = make_jobs({4, 4, 4});
	CHECK(ident_ftp_idle_bounds(jobs, 3).values ==
	      std::vector<time_value>{4, 4, 4});
}

TEST_CASE("uniform FJP lower bounds")
{
	const Job_set jobs = make_jobs({50, 80, 99});
	const Platform platform{{1, 2, 10}};
	CHECK(unif_fjp_idle_lower(jobs, platform) ==
	      std::vector<time_value>{ratio(50, 13), 10,
	                              ratio(229, 13)});

	const Job_set zeros = make_jobs({0, 0, 0});
	CHECK(unif_fjp_idle_lower(zeros, platform) ==
	      std::vector<time_value>{0, 0, 0});
}

TEST_CASE("uniform FJP upper bounds and the three makespan bounds")
{
	const Job_set jobs = make_jobs({50, 80, 99});
	const Platform platform{{1, 2, 10}};

	const auto upper = unif_fjp_idle_upper(jobs, platform);
	CHECK(upper.values.back() == ratio(2667, 130));
	CHECK(unif_fjp_ms1(jobs, platform) == ratio(2667, 130));

	// hand-evaluated with K_j = (9/10)^j:
	// (50*(81/100) + (80+50/13)*(9/10) + (99+10)) / 10
	const time_value ms2 = unif_fjp_ms2(jobs, platform);
	CHECK(ms2 == (time_value(50) * ratio(81, 100) +
	              (80 + ratio(50, 13)) * ratio(9, 10) + 109) /
	                 10);
	// x = 2, H_j = (1/3)^j:
	// (50/9 + (80+1000/39)/3 + (99+2600/39)) / 10
	const time_value ms3 = unif_fjp_ms3(jobs, platform);
	CHECK(ms3 == (ratio(50, 9) +
	              (80 + ratio(1000, 39)) / 3 + 99 +
	              ratio(2600, 39)) /
	                 10);
	CHECK(ms2 > 20);
	CHECK(ms3 > 20);
	CHECK(unif_fjp_ms_min(jobs, platform) == ratio(2667, 130));
}

TEST_CASE("uniform FJP bounds: single CPU and degenerate factors")
{
	const Job_set jobs = make_jobs({3, 4, 5});
	const Platform one{{2}};
	CHECK(unif_fjp_idle_upper(jobs, one).values ==
	      std::vector<time_value>{6});

	// s_1 = s_m: K collapses to (1, 0, 0, ...) and ms2 reduces to the
	// identical-platform bound
	const Platform flat{{1, 1}};
	CHECK(unif_fjp_ms2(jobs, flat) == ident_fjp_makespan(jobs, 2));
}

TEST_CASE("uniform bound trace invariants")
{
	const Job_set jobs = make_jobs({50, 80, 99});
	const Platform platform{{1, 2, 10}};
	const auto trace = unif_fjp_trace(jobs, platform);
	CHECK(trace.pivot == 2);
	CHECK(trace.ms_min() == ratio(2667, 130));
	for (std::size_t j = 0; j < jobs.size(); j++) {
		CHECK(trace.k_factors[j] >= 0);
		CHECK(trace.k_factors[j] <= 1);
		CHECK(trace.h_factors[j] >= 0);
		CHECK(trace.h_factors[j] <= 1);
	}
	CHECK(trace.k_factors[0] == 1);
	CHECK(trace.h_factors[0] == 1);
}

TEST_CASE("the naive uniform extension under-estimates")
{
	const Job_set jobs = make_jobs({50, 80, 99});
	const Platform platform{{1, 2, 10}};
	CHECK(unsound::unif_fjp_ms0_naive(jobs, platform) ==
	      ratio(199, 10));
	CHECK(unsound::unif_fjp_ms0_naive(jobs, platform) < 20);

	// on one CPU it coincides with the sound bound
	const Job_set small = make_jobs({2, 3});
	CHECK(unsound::unif_fjp_ms0_naive(small, Platform{{1}}) ==
	      ident_fjp_makespan(small, 1));
}

TEST_CASE("uniform FTP staircase table on {4,6}")
{
	const Job_set jobs = make_jobs({4, 6});
	const Platform platform{{1, 2}};
	const auto table = unif_ftp_idle_table(jobs, platform);
	CHECK(table.rows[1] == std::vector<time_value>{0, 2});
	CHECK(table.rows[2] == std::vector<time_value>{2, 4});
	CHECK(table.makespan() == 4);

	const auto sim = schedule_uniform(jobs, platform, identity_order(jobs));
	CHECK(table.final_row() == sim.idle_instants);
}

TEST_CASE("uniform FTP table: zero-length job leaves the table unchanged")
{
	const Job_set jobs = make_jobs({4, 0, 6});
	const Platform platform{{1, 2}};
	const auto with_zero = unif_ftp_idle_table(jobs, platform);
	CHECK(with_zero.rows[2] == with_zero.rows[1]);
	const auto without = unif_ftp_idle_table(make_jobs({4, 6}), platform);
	CHECK(with_zero.final_row() == without.final_row());
}

TEST_CASE("uniform FTP table equals the simulator on random instances")
{
	std::mt19937_64 rng(41);
	for (int trial = 0; trial < 1000; trial++) {
		const std::size_t m = 1 + rng() % 4;
		const std::size_t n = 1 + rng() % 7;
		const Job_set jobs = random_jobs(rng, n, false);
		std::vector<time_value> speeds;
		for (std::size_t i = 0; i < m; i++)
			speeds.push_back(ratio(1 + static_cast<long>(rng() % 9),
			                            1 + static_cast<long>(rng() % 3)));
		std::sort(speeds.begin(), speeds.end());
		const Platform platform{speeds};
		const auto table = unif_ftp_idle_table(jobs, platform);
		const auto sim =
			schedule_uniform(jobs, platform, identity_order(jobs), false);
		REQUIRE(table.final_row() == sim.idle_instants);
	}
}

TEST_CASE("critical rem-job set")
{
	Mode mode;
	mode.tasks = {{40, 120, 120}, {20, 120, 120}, {40, 120, 120},
	              {60, 120, 120}};
	mode.scheduler = Scheduler::ftp({0, 1, 2, 3});
	const Job_set critical = critical_rem_job_set(mode);
	REQUIRE(critical.size() == 4);
	CHECK(critical[0].cost == 40);
	CHECK(critical[1].cost == 20);
	const Job_set ascending = sorted_ascending(critical);
	CHECK(ascending.front().cost == 20);
	CHECK(ascending.back().cost == 60);

	Mode table_two;
	table_two.tasks = {{5, 15, 15}, {5, 16, 16}, {7, 18, 18}};
	table_two.scheduler = Scheduler::edf();
	const Job_set crit2 = critical_rem_job_set(table_two);
	CHECK(crit2[0].cost == 5);
	CHECK(crit2[1].cost == 5);
	CHECK(crit2[2].cost == 7);

	CHECK_THROWS_AS(critical_rem_job_set(Mode{}), std::invalid_argument);
}

TEST_CASE("critical-set dominance over partial rem-job sets")
{
	std::mt19937_64 rng(43);
	Mode mode;
	mode.tasks = {{9, 30, 30}, {4, 30, 30}, {7, 30, 30}, {12, 30, 30},
	              {5, 30, 30}};
	mode.scheduler = Scheduler::ftp({0, 1, 2, 3, 4});
	const Job_set critical = critical_set_in_priority_order(mode);

	for (int trial = 0; trial < 200; trial++) {
		// subset of tasks with shrunken remaining times, zero-padded back to
		// one job per task so the priority positions line up
		Job_set partial = critical;
		for (std::size_t i = 0; i < partial.size(); i++) {
			if (rng() % 3 == 0)
				partial[i].cost = 0;
			else
				partial[i].cost = critical[i].cost *
				                  ratio(static_cast<long>(rng() % 5), 4);
			if (partial[i].cost > critical[i].cost)
				partial[i].cost = critical[i].cost;
		}
		for (std::size_t m = 1; m <= 3; m++) {
			const auto full = schedule_identical(
				critical, m, identity_order(critical), false);
			const auto part = schedule_identical(
				partial, m, identity_order(partial), false);
			for (std::size_t k = 0; k < m; k++)
				REQUIRE(part.idle_instants[k] <= full.idle_instants[k]);
		}
	}
}

TEST_CASE("lambda_pi")
{
	CHECK(lambda_pi(Platform{{1, 500, 1000}}) == ratio(501, 1000));
	CHECK(lambda_pi(Platform{{500, 500, 600}}) == ratio(1000, 600));
	CHECK(lambda_pi(Platform::identical(4)) == 3);
	CHECK(lambda_pi(Platform{{1}}) == 0);
	CHECK(lambda_pi(Platform{{1, 500, 600}}) == ratio(501, 600));
}

TEST_CASE("uniform bounds remain valid on equal speeds")
{
	std::mt19937_64 rng(47);
	for (int trial = 0; trial < 100; trial++) {
		const std::size_t m = 2 + rng() % 3;
		const std::size_t n = m + rng() % 4;
		const Job_set jobs = random_jobs(rng, n, true);
		const Platform flat = Platform::identical(m);
		const auto uniform_bounds = unif_fjp_idle_upper(jobs, flat);
		const auto ident_bounds = ident_fjp_idle_bounds(jobs, m);
		// both must dominate the simulated idle instants; no mutual order
		// is asserted between the two bound families
		Priority_order order = identity_order(jobs);
		for (int shuffle = 0; shuffle < 20; shuffle++) {
			for (std::size_t i = order.size() - 1; i > 0; i--)
				std::swap(order[i], order[rng() % (i + 1)]);
			const auto sim = schedule_identical(jobs, m, order, false);
			for (std::size_t k = 0; k < m; k++) {
				REQUIRE(sim.idle_instants[k] <= uniform_bounds.values[k]);
				REQUIRE(sim.idle_instants[k] <= ident_bounds.values[k]);
			}
		}
	}
}

TEST_CASE("bound vectors are non-decreasing in k")
{
	std::mt19937_64 rng(53);
	for (int trial = 0; trial < 200; trial++) {
		const std::size_t m = 1 + rng() % 4;
		const std::size_t n = 1 + rng() % 7;
		const Job_set jobs = random_jobs(rng, n, true);
		std::vector<time_value> speeds;
		for (std::size_t i = 0; i < m; i++)
			speeds.push_back(1 + static_cast<long>(rng() % 6));
		std::sort(speeds.begin(), speeds.end());
		for (const auto& bounds :
		     {ident_fjp_idle_bounds(jobs, m),
		      ident_fjp_idle_bounds_legacy(jobs, m),
		      ident_ftp_idle_bounds(jobs, m),
		      unif_fjp_idle_upper(jobs, Platform{speeds}),
		      unif_ftp_idle_bounds(jobs, Platform{speeds})})
			for (std::size_t k = 1; k < bounds.values.size(); k++)
				REQUIRE(bounds.values[k - 1] <= bounds.values[k]);
	}
}

TEST_CASE("sampled-assignment dominance across all uniform bounds")
{
	std::mt19937_64 rng(59);
	for (int trial = 0; trial < 500; trial++) {
		const std::size_t m = 1 + rng() % 4;
		const std::size_t n = 1 + rng() % 7;
		const Job_set jobs = random_jobs(rng, n, true);
		std::vector<time_value> speeds;
		for (std::size_t i = 0; i < m; i++)
			speeds.push_back(ratio(1 + static_cast<long>(rng() % 19), 2));
		std::sort(speeds.begin(), speeds.end());
		const Platform platform{speeds};

		const auto lower = unif_fjp_idle_lower(jobs, platform);
		const auto upper = unif_fjp_idle_upper(jobs, platform);
		const time_value ms2 = unif_fjp_ms2(jobs, platform);
		const time_value ms3 = unif_fjp_ms3(jobs, platform);

		Priority_order order = identity_order(jobs);
		for (int shuffle = 0; shuffle < 20; shuffle++) {
			for (std::size_t i = order.size(); i-- > 1;)
				std::swap(order[i], order[rng() % (i + 1)]);
			const auto sim = schedule_uniform(jobs, platform, order, false);
			for (std::size_t k = 0; k < m; k++) {
				REQUIRE(sim.idle_instants[k] >= lower[k]);
				REQUIRE(sim.idle_instants[k] <= upper.values[k]);
			}
			REQUIRE(sim.makespan <= ms2);
			REQUIRE(sim.makespan <= ms3);
		}
	}
}
