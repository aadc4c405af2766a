#ifndef MMSCHED_VALIDITY_HPP
#define MMSCHED_VALIDITY_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mmsched/bounds.hpp"
#include "mmsched/model.hpp"

namespace mms {

// Steady-state schedulability predicate: true means the task set is
// schedulable by the scheduler on CPUs of the given speeds (sorted
// non-decreasing). The contract is soundness only: a true verdict must be
// safe, a false one may be pessimistic. Monotonicity in the CPU set is not
// assumed anywhere.
using Sched_test = std::function<bool(const std::vector<time_value>& speeds,
                                      const Scheduler& scheduler,
                                      const std::vector<Task>& tasks)>;

// Density test: with delta_i = C_i / min(D_i, T_i), accept iff
//   sum delta <= S_1(cpus) - lambda(cpus) * max delta   and
//   max delta <= fastest speed.
// On m identical unit CPUs this is sum delta <= m - (m-1) * max delta, with
// equality accepted.
inline bool default_sched_test(const std::vector<time_value>& speeds,
                               const Scheduler&,
                               const std::vector<Task>& tasks)
{
	if (tasks.empty())
		return true;
	if (speeds.empty())
		return false;
	time_value density_sum = 0;
	time_value density_max = 0;
	for (const Task& task : tasks) {
		const time_value window = std::min(task.deadline, task.period);
		const time_value density = task.wcet / window;
		density_sum += density;
		if (density > density_max)
			density_max = density;
	}
	Platform cpus{std::vector<time_value>(speeds)};
	if (density_max > cpus.speeds.back())
		return false;
	return density_sum <= cpus.total_speed() - lambda_pi(cpus) * density_max;
}

enum class Verdict { pass, fail, unsupported };

inline const char* to_string(Verdict verdict)
{
	switch (verdict) {
	case Verdict::pass: return "pass";
	case Verdict::fail: return "fail";
	case Verdict::unsupported: return "unsupported";
	}
	return "?";
}

// One ordered mode pair of the design-time analysis: the makespan (or idle)
// bound used, its value, and the tightest transition deadline it is compared
// against. slack() < 0 explains a failure.
struct Pair_result {
	std::size_t source = 0;
	std::size_t target = 0;
	std::string bound_name;
	time_value bound_value;
	time_value binding_deadline;
	Verdict verdict = Verdict::unsupported;
	std::string detail;

	time_value slack() const { return binding_deadline - bound_value; }
};

struct Enable_bound {
	std::size_t task;
	time_value bound; // latest enable instant, relative to the MCR
};

struct Validity_report {
	bool valid = false;
	std::vector<Pair_result> pairs;
	// AM-MSO only: per pair, the enable-instant upper bound of each target
	// task as simulated by the design-time walk.
	std::map<std::pair<std::size_t, std::size_t>, std::vector<Enable_bound>>
		enable_bounds;
};

namespace detail {

struct Mode_bound {
	std::string name;
	bool supported = true;
	time_value makespan;            // bound used by the synchronous protocol
	std::vector<time_value> idle;   // per-k bounds used by the asynchronous one
};

// Dispatch on platform x scheduler. FJP bounds hold for every priority
// assignment, so they cover any FJP rule; FTP bounds are exact for the
// declared order. The identical-platform forms assume unit speeds; any other
// platform goes through the uniform analysis (equal non-unit speeds
// included, which is sound since the strongly work-conserving schedule of
// equal-speed CPUs completes jobs at the same instants as the weakly
// work-conserving one).
inline Mode_bound mode_bound(const Mode& mode, const Platform& platform)
{
	Mode_bound bound;
	const Job_set critical = critical_rem_job_set(mode);
	const bool unit_identical = platform.is_unit_identical();

	switch (mode.scheduler.kind) {
	case Sched_kind::FJP:
		if (unit_identical) {
			bound.name = "ident-fjp";
			bound.idle =
				ident_fjp_idle_bounds(sorted_ascending(critical),
				                      platform.size())
					.values;
			bound.makespan = bound.idle.back();
		} else {
			bound.name = "unif-fjp";
			const Job_set ascending = sorted_ascending(critical);
			bound.idle = unif_fjp_idle_upper(ascending, platform).values;
			bound.makespan = unif_fjp_ms_min(ascending, platform);
		}
		return bound;
	case Sched_kind::FTP: {
		const Job_set by_priority = critical_set_in_priority_order(mode);
		if (unit_identical) {
			bound.name = "ident-ftp";
			bound.idle =
				ident_ftp_idle_bounds(by_priority, platform.size()).values;
		} else {
			bound.name = "unif-ftp";
			bound.idle = unif_ftp_idle_bounds(by_priority, platform).values;
		}
		bound.makespan = bound.idle.back();
		return bound;
	}
	}
	bound.supported = false;
	bound.name = "unknown-scheduler";
	return bound;
}

inline time_value min_deadline(const std::vector<time_value>& deadlines)
{
	return *std::min_element(deadlines.begin(), deadlines.end());
}

} // namespace detail

// Synchronous protocol validity: for every source mode, the makespan bound
// of its critical rem-job set must not exceed the smallest transition
// deadline over all target modes and tasks. One row per ordered mode pair;
// an unsupported scheduler yields an explicit unsupported row, never a
// silent pass. A single-mode application is vacuously valid.
inline Validity_report validity_smmso(const Application& app,
                                      const Platform& platform)
{
	Validity_report report;
	report.valid = true;
	for (std::size_t i = 0; i < app.modes.size(); i++) {
		const detail::Mode_bound bound =
			detail::mode_bound(app.modes[i], platform);
		for (std::size_t j = 0; j < app.modes.size(); j++) {
			if (i == j)
				continue;
			Pair_result row;
			row.source = i;
			row.target = j;
			row.bound_name = bound.name;
			if (!bound.supported) {
				row.verdict = Verdict::unsupported;
				row.detail = "no makespan bound for this scheduler";
				report.valid = false;
				report.pairs.push_back(row);
				continue;
			}
			row.bound_value = bound.makespan;
			row.binding_deadline =
				detail::min_deadline(app.deadlines_for(i, j));
			row.verdict = bound.makespan <= row.binding_deadline
			                  ? Verdict::pass
			                  : Verdict::fail;
			if (row.verdict != Verdict::pass)
				report.valid = false;
			report.pairs.push_back(row);
		}
	}
	return report;
}

// Asynchronous protocol validity: replays the enablement heuristic against
// the per-k idle-instant upper bounds. CPUs join the available pool
// slowest-first; at stage k every still-disabled target task must have a
// transition deadline of at least maxidle_k, and tasks accepted by the
// schedulability test are enabled. Tasks never accepted are enabled at mode
// entry, i.e. by maxidle_m.
inline Validity_report validity_ammso(const Application& app,
                                      const Platform& platform,
                                      const Sched_test& sched = default_sched_test)
{
	Validity_report report;
	report.valid = true;
	const std::size_t m = platform.size();

	for (std::size_t i = 0; i < app.modes.size(); i++) {
		const detail::Mode_bound bound =
			detail::mode_bound(app.modes[i], platform);
		for (std::size_t j = 0; j < app.modes.size(); j++) {
			if (i == j)
				continue;
			Pair_result row;
			row.source = i;
			row.target = j;
			row.bound_name = bound.name;
			if (!bound.supported) {
				row.verdict = Verdict::unsupported;
				row.detail = "no idle-instant bounds for this scheduler";
				report.valid = false;
				report.pairs.push_back(row);
				continue;
			}
			row.bound_value = bound.idle.back();
			const auto& deadlines = app.deadlines_for(i, j);
			row.binding_deadline = detail::min_deadline(deadlines);
			const Mode& target = app.modes[j];

			std::vector<std::size_t> disabled;
			for (std::size_t t = 0; t < target.tasks.size(); t++)
				disabled.push_back(t);
			std::sort(disabled.begin(), disabled.end(),
			          [&deadlines](std::size_t a, std::size_t b) {
				          if (deadlines[a] != deadlines[b])
					          return deadlines[a] < deadlines[b];
				          return a < b;
			          });

			std::vector<Task> enabled_tasks;
			std::vector<Enable_bound> enables;
			std::vector<time_value> available; // slowest-first, stays sorted
			bool failed = false;
			for (std::size_t k = 1; k <= m && !failed; k++) {
				available.push_back(platform.speeds[k - 1]);
				for (auto it = disabled.begin();
				     it != disabled.end() && !failed;) {
					const std::size_t task = *it;
					if (deadlines[task] < bound.idle[k - 1]) {
						row.verdict = Verdict::fail;
						row.detail = "target task " + std::to_string(task) +
						             " deadline below maxidle_" +
						             std::to_string(k);
						failed = true;
						break;
					}
					std::vector<Task> candidate = enabled_tasks;
					candidate.push_back(target.tasks[task]);
					if (sched(available, target.scheduler, candidate)) {
						enabled_tasks = std::move(candidate);
						enables.push_back({task, bound.idle[k - 1]});
						it = disabled.erase(it);
					} else {
						++it;
					}
				}
			}
			if (!failed) {
				// whatever is still disabled gets enabled when the last
				// rem-job completes, which happens by maxidle_m
				for (std::size_t task : disabled)
					enables.push_back({task, bound.idle[m - 1]});
				row.verdict = Verdict::pass;
			}
			if (row.verdict != Verdict::pass)
				report.valid = false;
			std::sort(enables.begin(), enables.end(),
			          [](const Enable_bound& a, const Enable_bound& b) {
				          return a.task < b.task;
			          });
			report.enable_bounds[{i, j}] = std::move(enables);
			report.pairs.push_back(row);
		}
	}
	return report;
}

} // namespace mms

#endif
