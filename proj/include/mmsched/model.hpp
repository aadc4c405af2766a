#ifndef MMSCHED_MODEL_HPP
#define MMSCHED_MODEL_HPP

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mmsched/rational.hpp"

namespace mms {

// Sporadic constrained-deadline task <C, D, T>. Task identity within a mode
// is its position in the mode's task vector.
struct Task {
	time_value wcet;
	time_value deadline;
	time_value period;
};

enum class Sched_kind { FTP, FJP };

enum class Fjp_rule { EDF };

struct Scheduler {
	Sched_kind kind = Sched_kind::FTP;
	// FTP: task indices, highest priority first. Must be a permutation of
	// the mode's tasks.
	std::vector<std::size_t> ftp_order;
	// FJP: job priorities fixed at release. EDF orders by absolute deadline,
	// ties broken by earlier release, then lower task index.
	Fjp_rule rule = Fjp_rule::EDF;

	static Scheduler ftp(std::vector<std::size_t> order)
	{
		return Scheduler{Sched_kind::FTP, std::move(order), Fjp_rule::EDF};
	}

	static Scheduler edf()
	{
		return Scheduler{Sched_kind::FJP, {}, Fjp_rule::EDF};
	}
};

struct Mode {
	std::vector<Task> tasks;
	Scheduler scheduler;
};

// Multi-mode application: disjoint task sets per mode plus one relative
// transition deadline per (source mode, target mode, target task).
struct Application {
	std::vector<Mode> modes;
	std::map<std::pair<std::size_t, std::size_t>, std::vector<time_value>>
		transition_deadlines;

	const std::vector<time_value>& deadlines_for(std::size_t source,
	                                             std::size_t target) const
	{
		auto it = transition_deadlines.find({source, target});
		if (it == transition_deadlines.end())
			throw std::out_of_range("no transition deadlines for mode pair");
		return it->second;
	}
};

// Speeds sorted non-decreasing: speeds[m-1] is the fastest CPU. CPU indices
// are 1-based in reports to match the pi_1..pi_m convention.
struct Platform {
	std::vector<time_value> speeds;

	Platform() = default;
	explicit Platform(std::vector<time_value> s) : speeds(std::move(s)) {}

	static Platform identical(std::size_t m)
	{
		return Platform(std::vector<time_value>(m, 1));
	}

	std::size_t size() const { return speeds.size(); }

	bool is_identical() const
	{
		for (const auto& s : speeds)
			if (s != speeds.front())
				return false;
		return !speeds.empty();
	}

	bool is_unit_identical() const
	{
		return is_identical() && speeds.front() == 1;
	}

	// Cumulated speed of the (m-k+1) fastest CPUs, 1-based k.
	time_value cumulative_speed(std::size_t k) const
	{
		time_value sum = 0;
		for (std::size_t i = k; i <= speeds.size(); i++)
			sum += speeds[i - 1];
		return sum;
	}

	time_value total_speed() const { return cumulative_speed(1); }
};

// Synchronous job: all releases are implicitly at the same instant.
// Zero-length jobs are legal padding.
struct Job {
	std::size_t id;
	time_value cost;
};

using Job_set = std::vector<Job>;

// Strict total order over job ids, highest priority first.
using Priority_order = std::vector<std::size_t>;

inline Job_set make_jobs(const std::vector<time_value>& costs)
{
	Job_set jobs;
	jobs.reserve(costs.size());
	for (std::size_t i = 0; i < costs.size(); i++)
		jobs.push_back({i, costs[i]});
	return jobs;
}

// Identity priority order: first job of the set is the highest-priority one.
inline Priority_order identity_order(const Job_set& jobs)
{
	Priority_order order;
	order.reserve(jobs.size());
	for (const auto& job : jobs)
		order.push_back(job.id);
	return order;
}

// Structural checks; violations are data, not failures. Empty result means
// the application/platform pair satisfies every model invariant.
inline std::vector<std::string> validate_application(const Application& app,
                                                     const Platform& platform)
{
	std::vector<std::string> violations;
	auto complain = [&violations](const std::string& what) {
		violations.push_back(what);
	};

	if (platform.speeds.empty())
		complain("platform: no CPUs");
	for (std::size_t i = 0; i < platform.speeds.size(); i++) {
		if (platform.speeds[i] <= 0)
			complain("platform: speed of pi_" + std::to_string(i + 1) +
			         " must be positive");
		if (i > 0 && platform.speeds[i] < platform.speeds[i - 1])
			complain("platform: speeds must be non-decreasing at pi_" +
			         std::to_string(i + 1));
	}

	if (app.modes.size() < 2)
		complain("application: needs at least two modes");

	for (std::size_t k = 0; k < app.modes.size(); k++) {
		const Mode& mode = app.modes[k];
		const std::string where = "mode " + std::to_string(k);
		if (mode.tasks.empty())
			complain(where + ": empty task set");
		if (platform.size() > mode.tasks.size())
			complain(where + ": Assumption 4: m <= n_i fails (" +
			         std::to_string(platform.size()) + " > " +
			         std::to_string(mode.tasks.size()) + ")");
		for (std::size_t t = 0; t < mode.tasks.size(); t++) {
			const Task& task = mode.tasks[t];
			const std::string twhere = where + ", task " + std::to_string(t);
			if (task.wcet <= 0)
				complain(twhere + ": 0 < C fails");
			if (task.wcet > task.deadline)
				complain(twhere + ": C <= D fails");
			if (task.deadline > task.period)
				complain(twhere + ": D <= T fails");
		}
		if (mode.scheduler.kind == Sched_kind::FTP) {
			std::vector<bool> seen(mode.tasks.size(), false);
			bool ok = mode.scheduler.ftp_order.size() == mode.tasks.size();
			for (std::size_t idx : mode.scheduler.ftp_order) {
				if (idx >= mode.tasks.size() || seen[idx]) {
					ok = false;
					break;
				}
				seen[idx] = true;
			}
			if (!ok)
				complain(where + ": FTP order is not a permutation of tasks");
		}
	}

	for (std::size_t i = 0; i < app.modes.size(); i++)
		for (std::size_t j = 0; j < app.modes.size(); j++) {
			if (i == j)
				continue;
			auto it = app.transition_deadlines.find({i, j});
			const std::string where = "transition " + std::to_string(i) +
			                          "->" + std::to_string(j);
			if (it == app.transition_deadlines.end()) {
				complain(where + ": missing transition deadlines");
				continue;
			}
			if (it->second.size() != app.modes[j].tasks.size())
				complain(where + ": needs one deadline per target task");
			for (const auto& d : it->second)
				if (d < 0)
					complain(where + ": negative transition deadline");
		}

	return violations;
}

} // namespace mms

#endif
