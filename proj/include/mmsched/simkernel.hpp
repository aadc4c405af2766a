#ifndef MMSCHED_SIMKERNEL_HPP
#define MMSCHED_SIMKERNEL_HPP

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "mmsched/model.hpp"

namespace mms {

// One maximal execution interval of a job on a CPU. cpu is 1-based (pi_1 is
// the slowest CPU of a uniform platform).
struct Segment {
	std::size_t job;
	std::size_t cpu;
	time_value start;
	time_value end;
};

// The unique schedule of a synchronous job set. start/completion are indexed
// by position in the input job set; pair them with Job::id for reporting.
// idle_instants[k-1] is the earliest instant at which at least k CPUs are
// permanently out of work; the last entry equals the makespan.
struct Schedule_result {
	std::vector<time_value> start;
	std::vector<time_value> completion;
	std::vector<time_value> idle_instants;
	time_value makespan;
	std::vector<Segment> segments;
};

namespace detail {

// Positions of the jobs in decreasing priority. Validates that the order is
// a permutation of the set's ids.
inline std::vector<std::size_t> order_to_positions(const Job_set& jobs,
                                                   const Priority_order& prio)
{
	if (prio.size() != jobs.size())
		throw std::invalid_argument("priority order size mismatch");
	std::vector<std::size_t> positions;
	positions.reserve(prio.size());
	std::vector<bool> used(jobs.size(), false);
	for (std::size_t id : prio) {
		std::size_t pos = jobs.size();
		for (std::size_t i = 0; i < jobs.size(); i++)
			if (!used[i] && jobs[i].id == id) {
				pos = i;
				break;
			}
		if (pos == jobs.size())
			throw std::invalid_argument("priority order is not a permutation");
		used[pos] = true;
		positions.push_back(pos);
	}
	return positions;
}

inline void append_segment(std::vector<Segment>& segments, std::size_t job,
                           std::size_t cpu, const time_value& start,
                           const time_value& end)
{
	if (start == end)
		return;
	if (!segments.empty()) {
		Segment& last = segments.back();
		if (last.job == job && last.cpu == cpu && last.end == start) {
			last.end = end;
			return;
		}
	}
	segments.push_back({job, cpu, start, end});
}

} // namespace detail

// Weakly work-conserving schedule on m identical unit-speed CPUs: whenever a
// CPU frees, the highest-priority waiting job is dispatched to the available
// CPU with the highest index. Synchronous fixed-priority jobs never migrate
// after dispatch. Zero-length jobs complete instantly at time 0 without
// occupying a CPU.
inline Schedule_result schedule_identical(const Job_set& jobs, std::size_t m,
                                          const Priority_order& prio,
                                          bool record_segments = true)
{
	if (m < 1)
		throw std::invalid_argument("schedule_identical: m must be >= 1");
	auto by_prio = detail::order_to_positions(jobs, prio);
	// zero-length jobs complete on release without occupying a CPU
	std::erase_if(by_prio,
	              [&jobs](std::size_t pos) { return jobs[pos].cost == 0; });

	Schedule_result result;
	result.start.assign(jobs.size(), 0);
	result.completion.assign(jobs.size(), 0);
	std::vector<time_value> cpu_busy_until(m, 0);

	// CPUs currently free, kept sorted ascending so back() is the highest
	// index. Completion events are processed in time order; simultaneous
	// completions free their CPUs together before the next dispatch round.
	std::vector<std::size_t> free_cpus(m);
	for (std::size_t c = 0; c < m; c++)
		free_cpus[c] = c;

	struct Running {
		time_value end;
		std::size_t cpu;
	};
	std::vector<Running> running; // one slot per occupied CPU

	std::size_t next = 0; // cursor into by_prio
	time_value now = 0;
	while (true) {
		while (next < by_prio.size() && !free_cpus.empty()) {
			const std::size_t pos = by_prio[next];
			const std::size_t cpu = free_cpus.back();
			free_cpus.pop_back();
			result.start[pos] = now;
			result.completion[pos] = now + jobs[pos].cost;
			cpu_busy_until[cpu] = result.completion[pos];
			if (record_segments)
				detail::append_segment(result.segments, jobs[pos].id, cpu + 1,
				                       now, result.completion[pos]);
			running.push_back({result.completion[pos], cpu});
			next++;
		}
		if (running.empty())
			break;
		auto soonest = std::min_element(
			running.begin(), running.end(),
			[](const Running& a, const Running& b) { return a.end < b.end; });
		now = soonest->end;
		for (std::size_t i = running.size(); i-- > 0;)
			if (running[i].end == now) {
				free_cpus.push_back(running[i].cpu);
				running.erase(running.begin() + i);
			}
		std::sort(free_cpus.begin(), free_cpus.end());
	}

	result.idle_instants = cpu_busy_until;
	std::sort(result.idle_instants.begin(), result.idle_instants.end());
	result.makespan = result.idle_instants.back();
	return result;
}

// Strongly work-conserving schedule on a uniform platform: at every instant
// the k-th highest-priority active job occupies the k-th fastest CPU. The
// job-to-CPU map changes only at completion events, so the schedule is a
// finite event sequence with exact rational event times. CPUs fall idle in
// the order pi_1, pi_2, ..., pi_m (staircase).
inline Schedule_result schedule_uniform(const Job_set& jobs,
                                        const Platform& platform,
                                        const Priority_order& prio,
                                        bool record_segments = true)
{
	const std::size_t m = platform.size();
	if (m < 1)
		throw std::invalid_argument("schedule_uniform: empty platform");
	for (std::size_t i = 1; i < m; i++)
		if (platform.speeds[i] < platform.speeds[i - 1])
			throw std::invalid_argument("schedule_uniform: speeds not sorted");

	const auto by_prio = detail::order_to_positions(jobs, prio);

	Schedule_result result;
	result.start.assign(jobs.size(), 0);
	result.completion.assign(jobs.size(), 0);
	result.idle_instants.assign(m, 0);

	// active job positions, highest priority first
	std::vector<std::size_t> active;
	std::vector<time_value> remaining(jobs.size());
	std::vector<bool> started(jobs.size(), false);
	for (std::size_t pos : by_prio) {
		if (jobs[pos].cost == 0) {
			result.start[pos] = 0;
			result.completion[pos] = 0;
		} else {
			active.push_back(pos);
			remaining[pos] = jobs[pos].cost;
		}
	}

	time_value now = 0;
	std::size_t idle_count = m - std::min(active.size(), m);
	// with fewer jobs than CPUs the slowest CPUs are idle from the start

	// open execution interval per CPU, emitted when the occupant changes
	constexpr std::size_t no_job = static_cast<std::size_t>(-1);
	std::vector<std::size_t> cpu_job(m, no_job);
	std::vector<time_value> cpu_since(m, 0);
	auto reassign = [&](std::size_t cpu, std::size_t pos) {
		if (cpu_job[cpu] == pos)
			return;
		if (record_segments && cpu_job[cpu] != no_job)
			result.segments.push_back({jobs[cpu_job[cpu]].id, cpu + 1,
			                           cpu_since[cpu], now});
		cpu_job[cpu] = pos;
		cpu_since[cpu] = now;
	};

	while (!active.empty()) {
		const std::size_t occupied = std::min(active.size(), m);
		// rank r (0 = highest priority) runs on CPU index m-1-r (0-based)
		for (std::size_t r = 0; r < occupied; r++)
			reassign(m - 1 - r, active[r]);
		for (std::size_t cpu = 0; cpu < m - occupied; cpu++)
			reassign(cpu, no_job);

		time_value step = 0;
		bool have_step = false;
		for (std::size_t r = 0; r < occupied; r++) {
			const time_value& speed = platform.speeds[m - 1 - r];
			time_value candidate = remaining[active[r]] / speed;
			if (!have_step || candidate < step) {
				step = candidate;
				have_step = true;
			}
		}
		const time_value next_time = now + step;
		for (std::size_t r = 0; r < occupied; r++) {
			const std::size_t pos = active[r];
			if (!started[pos]) {
				started[pos] = true;
				result.start[pos] = now;
			}
			remaining[pos] -= platform.speeds[m - 1 - r] * step;
		}
		now = next_time;
		for (std::size_t r = occupied; r-- > 0;)
			if (remaining[active[r]] == 0) {
				result.completion[active[r]] = now;
				active.erase(active.begin() + r);
			}
		const std::size_t now_occupied = std::min(active.size(), m);
		while (idle_count < m - now_occupied)
			result.idle_instants[idle_count++] = now;
	}
	for (std::size_t cpu = 0; cpu < m; cpu++)
		reassign(cpu, no_job);
	while (idle_count < m)
		result.idle_instants[idle_count++] = now;

	result.makespan = result.idle_instants.back();
	return result;
}

// Re-derives the idle-instant vector from the execution trace alone: CPU k
// permanently idles after its last segment ends (a CPU never idles while
// work is waiting, so busy intervals are contiguous). Independent of the
// bookkeeping the kernels maintain; useful as a cross-check.
inline std::vector<time_value> idle_instants(const Schedule_result& result)
{
	const std::size_t m = result.idle_instants.size();
	std::vector<time_value> last_busy(m, 0);
	for (const Segment& seg : result.segments)
		if (seg.end > last_busy[seg.cpu - 1])
			last_busy[seg.cpu - 1] = seg.end;
	std::sort(last_busy.begin(), last_busy.end());
	return last_busy;
}

inline void write_segment_csv(std::ostream& out,
                              const std::vector<Segment>& segments,
                              unsigned places = 6)
{
	out << "job,cpu,start,end\n";
	for (const Segment& seg : segments)
		out << seg.job + 1 << ',' << seg.cpu << ','
		    << to_decimal_string(seg.start, places) << ','
		    << to_decimal_string(seg.end, places) << '\n';
}

} // namespace mms

#endif
