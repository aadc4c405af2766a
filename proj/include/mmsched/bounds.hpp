#ifndef MMSCHED_BOUNDS_HPP
#define MMSCHED_BOUNDS_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmsched/model.hpp"
#include "mmsched/simkernel.hpp"

namespace mms {

enum class Bound_flavor {
	ident_fjp_legacy,
	ident_fjp,
	ident_ftp,
	unif_fjp,
	unif_ftp,
};

inline const char* to_string(Bound_flavor flavor)
{
	switch (flavor) {
	case Bound_flavor::ident_fjp_legacy: return "ident-fjp-legacy";
	case Bound_flavor::ident_fjp: return "ident-fjp";
	case Bound_flavor::ident_ftp: return "ident-ftp";
	case Bound_flavor::unif_fjp: return "unif-fjp";
	case Bound_flavor::unif_ftp: return "unif-ftp";
	}
	return "?";
}

// Per-k upper bounds on the idle instants; values[k-1] bounds the earliest
// instant at which at least k CPUs are permanently idle. Non-decreasing in k.
struct Idle_bound_vector {
	Bound_flavor flavor;
	std::vector<time_value> values;

	const time_value& makespan_bound() const { return values.back(); }
};

namespace detail {

inline std::vector<time_value> costs_of(const Job_set& jobs)
{
	std::vector<time_value> costs;
	costs.reserve(jobs.size());
	for (const Job& job : jobs)
		costs.push_back(job.cost);
	return costs;
}

inline void require_sorted_ascending(const std::vector<time_value>& costs)
{
	for (std::size_t i = 1; i < costs.size(); i++)
		if (costs[i] < costs[i - 1])
			throw std::invalid_argument(
				"job costs must be sorted by non-decreasing processing time");
}

// Zero-length padding makes every n < m instance an n = m instance without
// changing any idle instant.
inline std::vector<time_value> pad_to(std::vector<time_value> costs,
                                      std::size_t m)
{
	if (costs.size() < m)
		costs.insert(costs.begin(), m - costs.size(), time_value(0));
	return costs;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Identical platforms, FJP schedulers: bounds hold for every job priority
// assignment.
// ---------------------------------------------------------------------------

// maxidle_k = (sum c_i + (k-1) * c_{n-m+k}) / m for n > m, c_k for n = m.
// Input must be sorted ascending; sets with n < m are zero-padded.
inline Idle_bound_vector ident_fjp_idle_bounds(const Job_set& jobs,
                                               std::size_t m)
{
	if (m < 1)
		throw std::invalid_argument("m must be >= 1");
	auto costs = detail::costs_of(jobs);
	detail::require_sorted_ascending(costs);
	costs = detail::pad_to(std::move(costs), m);
	const std::size_t n = costs.size();

	Idle_bound_vector bounds{Bound_flavor::ident_fjp, {}};
	bounds.values.reserve(m);
	if (n == m) {
		for (std::size_t k = 1; k <= m; k++)
			bounds.values.push_back(costs[k - 1]);
		return bounds;
	}
	time_value total = 0;
	for (const auto& c : costs)
		total += c;
	for (std::size_t k = 1; k <= m; k++)
		bounds.values.push_back(
			(total + time_value(k - 1) * costs[n - m + k - 1]) / m);
	return bounds;
}

// The older bound: max over i of a two-piece average, maximal at
// i = n-m+k-1, which collapses it to
//   (sum c - sum_{j=n-m+k..n} c_j)/m + (sum_{j=n-m+k..n} c_j)/(m-k+1).
// Never smaller than ident_fjp_idle_bounds pointwise.
inline Idle_bound_vector ident_fjp_idle_bounds_legacy(const Job_set& jobs,
                                                      std::size_t m)
{
	if (m < 1)
		throw std::invalid_argument("m must be >= 1");
	auto costs = detail::costs_of(jobs);
	detail::require_sorted_ascending(costs);
	costs = detail::pad_to(std::move(costs), m);
	const std::size_t n = costs.size();

	Idle_bound_vector bounds{Bound_flavor::ident_fjp_legacy, {}};
	bounds.values.reserve(m);
	if (n == m) {
		for (std::size_t k = 1; k <= m; k++)
			bounds.values.push_back(costs[k - 1]);
		return bounds;
	}
	time_value total = 0;
	for (const auto& c : costs)
		total += c;
	for (std::size_t k = 1; k <= m; k++) {
		time_value tail = 0; // c_{n-m+k} + ... + c_n
		for (std::size_t j = n - m + k; j <= n; j++)
			tail += costs[j - 1];
		bounds.values.push_back((total - tail) / m +
		                        tail / time_value(m - k + 1));
	}
	return bounds;
}

// Upper bound on the makespan over all priority assignments:
// sum_{i<n} c_i / m + c_n. Equals the m-th entry of ident_fjp_idle_bounds.
inline time_value ident_fjp_makespan(const Job_set& jobs, std::size_t m)
{
	return ident_fjp_idle_bounds(jobs, m).values.back();
}

// ---------------------------------------------------------------------------
// Identical platforms, FTP schedulers: the priority assignment is known, so
// the idle instants are exact (reached when every job runs its full cost).
// ---------------------------------------------------------------------------

// work[k-1][i] = amount of processing time executed on CPU pi_k in the
// schedule of the i highest-priority jobs. Job i lands on the least-loaded
// CPU, highest index on ties.
struct Processed_work_matrix {
	std::size_t m = 0;
	std::vector<std::vector<time_value>> work; // m rows, n+1 columns

	std::vector<time_value> final_column() const
	{
		std::vector<time_value> column;
		column.reserve(m);
		for (const auto& row : work)
			column.push_back(row.back());
		return column;
	}
};

// Input order is the FTP priority order, highest first.
inline Processed_work_matrix ident_ftp_processed_work(const Job_set& jobs,
                                                      std::size_t m)
{
	if (m < 1)
		throw std::invalid_argument("m must be >= 1");
	Processed_work_matrix matrix;
	matrix.m = m;
	matrix.work.assign(m, std::vector<time_value>(jobs.size() + 1, 0));
	std::vector<time_value> load(m, 0);
	for (std::size_t i = 1; i <= jobs.size(); i++) {
		std::size_t target = 0;
		for (std::size_t k = 1; k < m; k++)
			if (load[k] <= load[target])
				target = k;
		load[target] += jobs[i - 1].cost;
		for (std::size_t k = 0; k < m; k++)
			matrix.work[k][i] = load[k];
	}
	return matrix;
}

// Exact idle instants for a known assignment: the final processed-work
// column sorted non-decreasing. Coincides with schedule_identical.
inline Idle_bound_vector ident_ftp_idle_bounds(const Job_set& jobs,
                                               std::size_t m)
{
	auto column = ident_ftp_processed_work(jobs, m).final_column();
	std::sort(column.begin(), column.end());
	return Idle_bound_vector{Bound_flavor::ident_ftp, std::move(column)};
}

inline time_value ident_ftp_makespan(const Job_set& jobs, std::size_t m)
{
	return ident_ftp_idle_bounds(jobs, m).values.back();
}

// ---------------------------------------------------------------------------
// Uniform platforms, FJP schedulers.
// ---------------------------------------------------------------------------

// Lower bound on each idle instant, valid for every priority assignment:
// minidle_k = sum_{i=1..n-m+k} c_i / S_1. Input sorted ascending.
inline std::vector<time_value> unif_fjp_idle_lower(const Job_set& jobs,
                                                   const Platform& platform)
{
	auto costs = detail::costs_of(jobs);
	detail::require_sorted_ascending(costs);
	costs = detail::pad_to(std::move(costs), platform.size());
	const std::size_t n = costs.size();
	const std::size_t m = platform.size();
	const time_value total_speed = platform.total_speed();

	std::vector<time_value> lower;
	lower.reserve(m);
	time_value prefix = 0;
	for (std::size_t i = 1; i <= n - m; i++)
		prefix += costs[i - 1];
	for (std::size_t k = 1; k <= m; k++) {
		prefix += costs[n - m + k - 1];
		lower.push_back(prefix / total_speed);
	}
	return lower;
}

// Upper bound on each idle instant, valid for every priority assignment:
// maxidle_k = (sum c_i - sum_{i<k} minidle_i * s_i) / S_k.
inline Idle_bound_vector unif_fjp_idle_upper(const Job_set& jobs,
                                             const Platform& platform)
{
	const auto lower = unif_fjp_idle_lower(jobs, platform);
	const std::size_t m = platform.size();
	time_value total = 0;
	for (const Job& job : jobs)
		total += job.cost;

	Idle_bound_vector bounds{Bound_flavor::unif_fjp, {}};
	bounds.values.reserve(m);
	time_value consumed = 0; // sum_{i<k} minidle_i * s_i
	for (std::size_t k = 1; k <= m; k++) {
		bounds.values.push_back((total - consumed) /
		                        platform.cumulative_speed(k));
		consumed += lower[k - 1] * platform.speeds[k - 1];
	}
	return bounds;
}

// ms1: the m-th entry of unif_fjp_idle_upper.
inline time_value unif_fjp_ms1(const Job_set& jobs, const Platform& platform)
{
	return unif_fjp_idle_upper(jobs, platform).values.back();
}

// ms2: geometric damping with ratio 1 - s_1/s_m. Each job's completion is
// bounded through the work the staircase can steal from it.
inline time_value unif_fjp_ms2(const Job_set& jobs, const Platform& platform)
{
	auto costs = detail::costs_of(jobs);
	detail::require_sorted_ascending(costs);
	const std::size_t n = costs.size();
	const std::size_t m = platform.size();
	if (m < 1)
		throw std::invalid_argument("empty platform");
	const time_value& s1 = platform.speeds.front();
	const time_value& sm = platform.speeds.back();
	const time_value total_speed = platform.total_speed();
	const time_value ratio = 1 - s1 / sm; // K_j = ratio^j, K_0 = 1

	// iterate i = n..1 so the K exponent grows with the power accumulator
	time_value sum = 0;
	time_value power = 1;
	time_value prefix_all = 0; // sum_{j<i} c_j, maintained downward
	for (const auto& c : costs)
		prefix_all += c;
	for (std::size_t i = n; i >= 1; i--) {
		prefix_all -= costs[i - 1];
		sum += (costs[i - 1] + s1 * prefix_all / total_speed) * power;
		power *= ratio;
	}
	return sum / sm;
}

// argmin_i s_i / (s_1 + ... + s_i), smallest index on ties.
inline std::size_t unif_fjp_ms3_pivot(const Platform& platform)
{
	std::size_t best = 1;
	time_value best_ratio;
	time_value prefix = 0;
	for (std::size_t i = 1; i <= platform.size(); i++) {
		prefix += platform.speeds[i - 1];
		time_value ratio = platform.speeds[i - 1] / prefix;
		if (i == 1 || ratio < best_ratio) {
			best_ratio = ratio;
			best = i;
		}
	}
	return best;
}

// ms3: same shape as ms2 with damping ratio 1 - s_x / (s_1 + ... + s_x).
inline time_value unif_fjp_ms3(const Job_set& jobs, const Platform& platform)
{
	auto costs = detail::costs_of(jobs);
	detail::require_sorted_ascending(costs);
	const std::size_t n = costs.size();
	if (platform.size() < 1)
		throw std::invalid_argument("empty platform");
	const std::size_t x = unif_fjp_ms3_pivot(platform);
	const time_value& sx = platform.speeds[x - 1];
	const time_value& sm = platform.speeds.back();
	const time_value total_speed = platform.total_speed();
	time_value prefix_x = 0; // s_1 + ... + s_x
	for (std::size_t i = 1; i <= x; i++)
		prefix_x += platform.speeds[i - 1];
	const time_value ratio = 1 - sx / prefix_x; // H_j = ratio^j, H_0 = 1

	time_value sum = 0;
	time_value power = 1;
	time_value prefix_all = 0;
	for (const auto& c : costs)
		prefix_all += c;
	for (std::size_t i = n; i >= 1; i--) {
		prefix_all -= costs[i - 1];
		sum += (costs[i - 1] +
		        sx * sm * prefix_all / (total_speed * prefix_x)) *
		       power;
		power *= ratio;
	}
	return sum / sm;
}

inline time_value unif_fjp_ms_min(const Job_set& jobs,
                                  const Platform& platform)
{
	return std::min({unif_fjp_ms1(jobs, platform),
	                 unif_fjp_ms2(jobs, platform),
	                 unif_fjp_ms3(jobs, platform)});
}

// Diagnostic record of everything the uniform-FJP analysis computes for one
// job set: the lower-bound vector, the damping factors, and the three
// makespan bounds.
struct Uniform_bound_trace {
	std::vector<time_value> min_idle;
	std::vector<time_value> max_idle;
	std::vector<time_value> k_factors; // K_0..K_{n-1}
	std::vector<time_value> h_factors; // H_0..H_{n-1}
	std::size_t pivot = 1;             // x
	time_value ms1, ms2, ms3;

	time_value ms_min() const { return std::min({ms1, ms2, ms3}); }
};

inline Uniform_bound_trace unif_fjp_trace(const Job_set& jobs,
                                          const Platform& platform)
{
	Uniform_bound_trace trace;
	trace.min_idle = unif_fjp_idle_lower(jobs, platform);
	trace.max_idle = unif_fjp_idle_upper(jobs, platform).values;
	trace.pivot = unif_fjp_ms3_pivot(platform);
	trace.ms1 = trace.max_idle.back();
	trace.ms2 = unif_fjp_ms2(jobs, platform);
	trace.ms3 = unif_fjp_ms3(jobs, platform);

	const time_value& s1 = platform.speeds.front();
	const time_value& sm = platform.speeds.back();
	time_value prefix_x = 0;
	for (std::size_t i = 1; i <= trace.pivot; i++)
		prefix_x += platform.speeds[i - 1];
	const time_value kr = 1 - s1 / sm;
	const time_value hr = 1 - platform.speeds[trace.pivot - 1] / prefix_x;
	time_value kp = 1, hp = 1;
	for (std::size_t j = 0; j < jobs.size(); j++) {
		trace.k_factors.push_back(kp);
		trace.h_factors.push_back(hp);
		kp *= kr;
		hp *= hr;
	}
	return trace;
}

namespace unsound {

// Naive extension of the identical-platform makespan bound to uniform
// platforms: sum_{i<n} c_i / S_1 + c_n / s_m. NOT an upper bound (it can
// under-estimate the maximum makespan); kept as a demonstrator only and
// excluded from every validity test.
inline time_value unif_fjp_ms0_naive(const Job_set& jobs,
                                     const Platform& platform)
{
	auto costs = detail::costs_of(jobs);
	detail::require_sorted_ascending(costs);
	if (costs.empty())
		return 0;
	time_value head = 0;
	for (std::size_t i = 0; i + 1 < costs.size(); i++)
		head += costs[i];
	return head / platform.total_speed() + costs.back() / platform.speeds.back();
}

} // namespace unsound

// ---------------------------------------------------------------------------
// Uniform platforms, FTP schedulers: exact idle instants by an inductive
// staircase table.
// ---------------------------------------------------------------------------

// idle_table[i][j-1] is the earliest instant at which at least j CPUs idle
// in the schedule of the i highest-priority jobs (i = 0..n, j = 1..m). The
// conceptual row m+1 is the "unbounded" sentinel; it never leaves this
// computation and only ever participates in the can-the-job-still-migrate
// comparison below.
struct Uniform_idle_table {
	std::size_t m = 0;
	std::vector<std::vector<time_value>> rows; // n+1 rows of m entries

	const std::vector<time_value>& final_row() const { return rows.back(); }
	const time_value& makespan() const { return rows.back().back(); }
};

// Input order is the FTP priority order, highest first; platform sorted
// non-decreasing. Job i climbs the staircase left by jobs 1..i-1: it holds
// CPU pi_j from idle_j^{i-1} until either a faster CPU frees (the new j-th
// idle instant is then idle_{j+1}^{i-1}) or it completes on pi_j. Stairs
// above the CPU on which the job completes keep their previous instants.
inline Uniform_idle_table unif_ftp_idle_table(const Job_set& jobs,
                                              const Platform& platform)
{
	const std::size_t m = platform.size();
	if (m < 1)
		throw std::invalid_argument("empty platform");
	for (std::size_t i = 1; i < m; i++)
		if (platform.speeds[i] < platform.speeds[i - 1])
			throw std::invalid_argument("speeds not sorted");

	Uniform_idle_table table;
	table.m = m;
	table.rows.reserve(jobs.size() + 1);
	table.rows.emplace_back(m, time_value(0));

	for (std::size_t i = 1; i <= jobs.size(); i++) {
		const std::vector<time_value>& prev = table.rows.back();
		const time_value& cost = jobs[i - 1].cost;

		// stair_work[j-1] = work the job executes climbing stairs 1..j-1,
		// i.e. before it could reach CPU pi_j
		std::vector<time_value> stair_work(m, 0);
		for (std::size_t j = 2; j <= m; j++)
			stair_work[j - 1] = stair_work[j - 2] +
			                    (prev[j - 1] - prev[j - 2]) *
			                        platform.speeds[j - 2];

		std::vector<time_value> row(m);
		for (std::size_t j = m; j >= 1; j--) {
			const bool next_is_unbounded = j == m;
			if (!next_is_unbounded && prev[j - 1] == prev[j]) {
				// a faster CPU frees at the same instant; pi_j's stair is void
				row[j - 1] = prev[j - 1];
			} else if (!next_is_unbounded &&
			           cost >= stair_work[j - 1] +
			                       (prev[j] - prev[j - 1]) *
			                           platform.speeds[j - 1]) {
				// still running when pi_{j+1} frees: vacates pi_j then
				row[j - 1] = prev[j];
			} else if (cost >= stair_work[j - 1]) {
				// completes on pi_j
				row[j - 1] =
					prev[j - 1] + (cost - stair_work[j - 1]) /
					                  platform.speeds[j - 1];
			} else {
				// never reaches pi_j; the stair is untouched
				row[j - 1] = prev[j - 1];
			}
		}
		table.rows.push_back(std::move(row));
	}
	return table;
}

// Exact per-k idle bounds for uniform FTP: the table's final row.
inline Idle_bound_vector unif_ftp_idle_bounds(const Job_set& jobs,
                                              const Platform& platform)
{
	return Idle_bound_vector{Bound_flavor::unif_ftp,
	                         unif_ftp_idle_table(jobs, platform).final_row()};
}

inline time_value unif_ftp_makespan(const Job_set& jobs,
                                    const Platform& platform)
{
	return unif_ftp_idle_table(jobs, platform).makespan();
}

// ---------------------------------------------------------------------------
// Shared helpers.
// ---------------------------------------------------------------------------

// Worst-case rem-job set of a mode: one job per task with the full WCET as
// processing time, in task order. Consumers sort it as their analysis
// requires (ascending cost for FJP bounds, priority order for FTP).
inline Job_set critical_rem_job_set(const Mode& mode)
{
	if (mode.tasks.empty())
		throw std::invalid_argument("critical_rem_job_set: mode has no tasks");
	Job_set jobs;
	jobs.reserve(mode.tasks.size());
	for (std::size_t t = 0; t < mode.tasks.size(); t++)
		jobs.push_back({t, mode.tasks[t].wcet});
	return jobs;
}

inline Job_set sorted_ascending(Job_set jobs)
{
	std::stable_sort(jobs.begin(), jobs.end(),
	                 [](const Job& a, const Job& b) { return a.cost < b.cost; });
	return jobs;
}

// Critical set ordered by the mode's own FTP priorities.
inline Job_set critical_set_in_priority_order(const Mode& mode)
{
	Job_set jobs;
	jobs.reserve(mode.tasks.size());
	for (std::size_t t : mode.scheduler.ftp_order)
		jobs.push_back({t, mode.tasks[t].wcet});
	return jobs;
}

// Degree of heterogeneity: max_j sum_{k<j} s_k / s_j. Equals m-1 on an
// identical platform and shrinks as the speeds spread apart.
inline time_value lambda_pi(const Platform& platform)
{
	if (platform.speeds.empty())
		throw std::invalid_argument("lambda_pi: empty platform");
	time_value best = 0;
	time_value prefix = 0;
	for (std::size_t j = 1; j <= platform.size(); j++) {
		time_value value = prefix / platform.speeds[j - 1];
		if (value > best)
			best = value;
		prefix += platform.speeds[j - 1];
	}
	return best;
}

} // namespace mms

#endif
