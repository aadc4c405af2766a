#ifndef MMSCHED_PROTOCOLS_HPP
#define MMSCHED_PROTOCOLS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mmsched/bounds.hpp"
#include "mmsched/model.hpp"
#include "mmsched/validity.hpp"

namespace mms {

enum class Protocol { sm_mso, am_mso };

inline const char* to_string(Protocol protocol)
{
	return protocol == Protocol::sm_mso ? "SM-MSO" : "AM-MSO";
}

// A rem-job as it stands at the mode change request: how much work is left
// and the absolute deadline it inherited from its release.
struct Rem_job_spec {
	std::size_t task;
	time_value remaining;
	time_value deadline;
};

struct Transition_scenario {
	Application app;
	Platform platform;
	std::size_t source = 0;
	std::size_t target = 1;
	time_value mcr_time = 0;
	// Absent means the critical rem-job set: one job per source task with
	// the full WCET remaining, released at the MCR. An explicit empty list
	// models an MCR arriving while no old-mode job is active.
	std::optional<std::vector<Rem_job_spec>> rem_jobs;
};

struct Job_miss {
	std::size_t mode;
	std::size_t task;
	time_value release;
	time_value deadline;
	bool completed = false;
	time_value completion; // meaningful only when completed
};

// A target task enabled later than its transition deadline allows. Both
// times are relative to the (last) MCR.
struct Enable_miss {
	std::size_t task;
	time_value deadline;
	time_value enable_time;
};

struct Trace_segment {
	std::size_t mode;
	std::size_t task;
	std::size_t cpu; // 1-based
	time_value start;
	time_value end;
};

struct Release_event {
	time_value time;
	std::size_t mode;
	std::size_t task;
};

struct Transition_report {
	Protocol protocol = Protocol::sm_mso;
	std::size_t source = 0;
	std::size_t target = 0;
	time_value mcr_time; // invoking time of the last MCR of this transition
	// target task -> enable instant relative to mcr_time
	std::map<std::size_t, time_value> enable_times;
	time_value transition_end; // absolute instant the last rem-job completes
	std::vector<Job_miss> remjob_deadline_misses;
	std::vector<Enable_miss> transition_deadline_misses;
	std::vector<Job_miss> newmode_job_deadline_misses; // asynchronous only
	std::vector<Trace_segment> trace;
};

struct Phase {
	enum class Kind { steady, transition };
	Kind kind = Kind::steady;
	time_value start;
	time_value end;
	std::size_t mode_from = 0;
	std::size_t mode_to = 0; // steady: same as mode_from
};

struct Mcr {
	time_value time;
	std::size_t target;
};

struct Multimode_options {
	Protocol protocol = Protocol::sm_mso;
	Sched_test sched = default_sched_test;
	// every job executes this fraction of its WCET; (0,1], 1 is the worst case
	time_value exec_scale = 1;
};

struct Multimode_result {
	std::vector<Phase> phases;
	std::vector<Transition_report> transitions;
	std::vector<Release_event> releases;
	std::vector<Job_miss> misses;
	std::vector<Trace_segment> trace;
};

namespace detail {

// Event-driven global preemptive scheduler for multi-mode runs: periodic
// releases, MCR handling, and the transition composite order (every rem-job
// above every new-mode job, each layer ordered by its own scheduler).
// Identical platforms follow the weakly work-conserving rules (sticky
// dispatch, highest free CPU index), uniform platforms the strongly
// work-conserving rule (re-rank onto the fastest CPUs at every event).
struct Transition_engine {
	static constexpr std::size_t no_cpu = static_cast<std::size_t>(-1);

	struct Live_job {
		std::uint64_t uid = 0;
		std::size_t mode = 0;
		std::size_t task = 0;
		int layer = 1; // 0: rem-job of the running transition, 1: otherwise
		time_value key_a, key_b;
		long key_c = 0;
		time_value remaining;
		time_value release;
		time_value deadline;
		bool rem = false;
		int trans_index = -1; // transition during which it was released
		bool started = false;
		time_value start_time;
		std::size_t cpu = no_cpu;
	};

	struct Done_job {
		std::size_t mode, task;
		time_value release, deadline, completion;
		bool rem;
		int trans_index;
	};

	struct Enabled_task {
		std::size_t mode, task;
		time_value next_release;
	};

	const Application& app;
	Platform platform;
	Multimode_options opt;
	std::size_t m;
	bool identical;

	time_value now = 0;
	std::uint64_t next_uid = 1;
	std::vector<Live_job> active;
	std::vector<Enabled_task> enabled;
	std::vector<Done_job> done;
	std::vector<Trace_segment> trace;
	std::vector<Release_event> releases;
	std::vector<Phase> phases;
	std::vector<Transition_report> transitions;

	std::size_t current_mode = 0;
	bool in_transition = false;
	std::size_t trans_source = 0;
	std::size_t trans_target = 0;
	bool first_enable_done = false;
	std::vector<std::size_t> disabled_targets; // by non-decreasing deadline
	std::vector<Task> enabled_target_tasks;
	Transition_report report;

	std::vector<Mcr> mcrs;
	std::size_t next_mcr = 0;

	std::vector<std::uint64_t> cpu_uid;      // 0 = idle
	std::vector<time_value> cpu_seg_start;

	Transition_engine(const Application& application, Platform plat,
	                  Multimode_options options)
		: app(application), platform(std::move(plat)), opt(std::move(options)),
		  m(platform.size()), identical(platform.is_identical()),
		  cpu_uid(m, 0), cpu_seg_start(m, time_value(0))
	{
		if (m == 0)
			throw std::invalid_argument("empty platform");
		if (opt.exec_scale <= 0 || opt.exec_scale > 1)
			throw std::invalid_argument("exec_scale must be in (0, 1]");
	}

	// --- priorities ---------------------------------------------------------

	void assign_key(Live_job& job) const
	{
		const Scheduler& sched = app.modes[job.mode].scheduler;
		if (sched.kind == Sched_kind::FTP) {
			job.key_a = 0;
			job.key_b = 0;
			long rank = 0;
			for (std::size_t i = 0; i < sched.ftp_order.size(); i++)
				if (sched.ftp_order[i] == job.task) {
					rank = static_cast<long>(i);
					break;
				}
			job.key_c = rank;
		} else {
			job.key_a = job.deadline;
			job.key_b = job.release;
			job.key_c = static_cast<long>(job.task);
		}
	}

	static bool outranks(const Live_job& a, const Live_job& b)
	{
		if (a.layer != b.layer)
			return a.layer < b.layer;
		if (a.key_a != b.key_a)
			return a.key_a < b.key_a;
		if (a.key_b != b.key_b)
			return a.key_b < b.key_b;
		if (a.key_c != b.key_c)
			return a.key_c < b.key_c;
		return a.uid < b.uid;
	}

	// --- bookkeeping --------------------------------------------------------

	Live_job* find(std::uint64_t uid)
	{
		for (auto& job : active)
			if (job.uid == uid)
				return &job;
		return nullptr;
	}

	std::size_t rem_count() const
	{
		std::size_t count = 0;
		for (const auto& job : active)
			count += job.layer == 0;
		return count;
	}

	// Emits the segment running on `cpu` (if any) and fully detaches its
	// occupant.
	void close_segment(std::size_t cpu)
	{
		if (cpu_uid[cpu] == 0)
			return;
		Live_job* job = find(cpu_uid[cpu]);
		if (cpu_seg_start[cpu] != now)
			trace.push_back({job->mode, job->task, cpu + 1,
			                 cpu_seg_start[cpu], now});
		job->cpu = no_cpu;
		cpu_uid[cpu] = 0;
	}

	void place(Live_job& job, std::size_t cpu)
	{
		close_segment(cpu);
		if (job.cpu != no_cpu)
			close_segment(job.cpu);
		cpu_uid[cpu] = job.uid;
		cpu_seg_start[cpu] = now;
		job.cpu = cpu;
		if (!job.started) {
			job.started = true;
			job.start_time = now;
		}
	}

	void close_all_segments()
	{
		for (std::size_t c = 0; c < m; c++)
			close_segment(c);
	}

	void open_phase(Phase::Kind kind, std::size_t from, std::size_t to)
	{
		phases.push_back({kind, now, now, from, to});
	}

	void close_phase()
	{
		if (!phases.empty())
			phases.back().end = now;
	}

	// --- releases and modes -------------------------------------------------

	void spawn(std::size_t mode, std::size_t task)
	{
		const Task& spec = app.modes[mode].tasks[task];
		Live_job job;
		job.uid = next_uid++;
		job.mode = mode;
		job.task = task;
		job.layer = 1;
		job.remaining = spec.wcet * opt.exec_scale;
		job.release = now;
		job.deadline = now + spec.deadline;
		job.trans_index =
			in_transition && mode == trans_target
				? static_cast<int>(transitions.size())
				: -1;
		assign_key(job);
		active.push_back(job);
		releases.push_back({now, mode, task});
	}

	void enable_task(std::size_t mode, std::size_t task)
	{
		enabled.push_back({mode, task, now});
	}

	void enable_mode(std::size_t mode)
	{
		for (std::size_t t = 0; t < app.modes[mode].tasks.size(); t++)
			enable_task(mode, t);
	}

	// --- transitions --------------------------------------------------------

	std::vector<std::size_t> sorted_targets(std::size_t source,
	                                        std::size_t target) const
	{
		const auto& deadlines = app.deadlines_for(source, target);
		std::vector<std::size_t> tasks;
		for (std::size_t t = 0; t < app.modes[target].tasks.size(); t++)
			tasks.push_back(t);
		std::sort(tasks.begin(), tasks.end(),
		          [&deadlines](std::size_t a, std::size_t b) {
			          if (deadlines[a] != deadlines[b])
				          return deadlines[a] < deadlines[b];
			          return a < b;
		          });
		return tasks;
	}

	void begin_transition(std::size_t target)
	{
		trans_source = current_mode;
		trans_target = target;
		first_enable_done = false;
		report = Transition_report{};
		report.protocol = opt.protocol;
		report.source = trans_source;
		report.target = trans_target;
		report.mcr_time = now;
		in_transition = true;
		enabled.clear(); // disables every old-mode task
		for (auto& job : active) {
			job.layer = 0;
			job.rem = true;
		}
		disabled_targets = sorted_targets(trans_source, target);
		enabled_target_tasks.clear();
		if (rem_count() == 0)
			finish_transition();
	}

	void retarget_transition(std::size_t target)
	{
		if (opt.protocol == Protocol::am_mso && first_enable_done)
			throw std::invalid_argument(
				"MCR at t=" + to_ratio_string(now) +
				" rejected: AM-MSO transition already enabled new-mode "
				"tasks; mode changes are locked out until the transition "
				"ends");
		if (target == trans_source)
			throw std::invalid_argument(
				"MCR target equals the transition's source mode");
		trans_target = target;
		report.target = target;
		report.mcr_time = now;
		if (!phases.empty())
			phases.back().mode_to = target;
		disabled_targets = sorted_targets(trans_source, target);
	}

	void handle_mcr(std::size_t target)
	{
		if (target >= app.modes.size())
			throw std::invalid_argument("MCR target mode out of range");
		if (!in_transition) {
			if (target == current_mode)
				throw std::invalid_argument(
					"MCR target equals the current mode");
			close_phase();
			open_phase(Phase::Kind::transition, current_mode, target);
			begin_transition(target);
		} else {
			retarget_transition(target);
		}
	}

	void record_enable(std::size_t task)
	{
		const time_value relative = now - report.mcr_time;
		report.enable_times[task] = relative;
		const auto& deadlines = app.deadlines_for(trans_source, trans_target);
		if (relative > deadlines[task])
			report.transition_deadline_misses.push_back(
				{task, deadlines[task], relative});
		enabled_target_tasks.push_back(app.modes[trans_target].tasks[task]);
		enable_task(trans_target, task);
		first_enable_done = true;
	}

	// Algorithm step at a rem-job completion: the CPUs not running rem-jobs
	// (the m-r slowest ones) are offered to the still-disabled target tasks
	// in transition-deadline order.
	void am_scan()
	{
		const std::size_t rem = rem_count();
		if (rem >= m)
			return;
		const std::vector<time_value> available(
			platform.speeds.begin(),
			platform.speeds.begin() + static_cast<long>(m - rem));
		for (auto it = disabled_targets.begin();
		     it != disabled_targets.end();) {
			std::vector<Task> candidate = enabled_target_tasks;
			candidate.push_back(app.modes[trans_target].tasks[*it]);
			if (opt.sched(available, app.modes[trans_target].scheduler,
			              candidate)) {
				record_enable(*it);
				it = disabled_targets.erase(it);
			} else {
				++it;
			}
		}
	}

	void finish_transition()
	{
		for (std::size_t task : disabled_targets)
			record_enable(task);
		disabled_targets.clear();
		report.transition_end = now;
		transitions.push_back(report);
		in_transition = false;
		current_mode = trans_target;
		close_phase();
		open_phase(Phase::Kind::steady, current_mode, current_mode);
	}

	// --- the event loop -----------------------------------------------------

	void complete(std::uint64_t uid)
	{
		Live_job* job = find(uid);
		if (job->cpu != no_cpu)
			close_segment(job->cpu);
		done.push_back({job->mode, job->task, job->release, job->deadline,
		                now, job->rem, job->trans_index});
		if (job->rem && now > job->deadline)
			report.remjob_deadline_misses.push_back(
				{job->mode, job->task, job->release, job->deadline, true,
				 now});
		active.erase(active.begin() + (job - active.data()));
	}

	// Everything that happens exactly at `now`, iterated to a fixed point:
	// completions (in priority order), then releases, then MCRs, then the
	// protocol's enablement hooks, and finally the dispatch.
	void process_instant()
	{
		bool progressed = true;
		while (progressed) {
			progressed = false;

			std::vector<std::uint64_t> finished;
			for (const auto& job : active)
				if (job.remaining == 0)
					finished.push_back(job.uid);
			std::sort(finished.begin(), finished.end(),
			          [this](std::uint64_t a, std::uint64_t b) {
				          return outranks(*find(a), *find(b));
			          });
			bool rem_completed = false;
			for (std::uint64_t uid : finished) {
				rem_completed |= find(uid)->rem;
				complete(uid);
				progressed = true;
			}
			if (in_transition && rem_completed) {
				if (opt.protocol == Protocol::am_mso)
					am_scan();
				if (rem_count() == 0)
					finish_transition();
			}

			for (std::size_t i = 0; i < enabled.size(); i++)
				while (i < enabled.size() && enabled[i].next_release <= now) {
					spawn(enabled[i].mode, enabled[i].task);
					enabled[i].next_release +=
						app.modes[enabled[i].mode].tasks[enabled[i].task]
							.period;
					progressed = true;
				}

			while (next_mcr < mcrs.size() && mcrs[next_mcr].time <= now) {
				handle_mcr(mcrs[next_mcr].target);
				next_mcr++;
				progressed = true;
			}
		}
		dispatch();
	}

	void dispatch()
	{
		if (identical)
			dispatch_identical();
		else
			dispatch_uniform();
	}

	// Weakly work-conserving: running jobs stick to their CPU; the highest
	// priority waiting job goes to the free CPU with the highest index; a
	// newly released job preempts the lowest-priority running job only when
	// it outranks it, taking over that job's CPU.
	void dispatch_identical()
	{
		std::vector<Live_job*> waiting;
		for (auto& job : active)
			if (job.cpu == no_cpu)
				waiting.push_back(&job);
		std::sort(waiting.begin(), waiting.end(),
		          [](const Live_job* a, const Live_job* b) {
			          return outranks(*a, *b);
		          });
		std::size_t next_waiting = 0;

		std::vector<std::size_t> free;
		for (std::size_t c = 0; c < m; c++)
			if (cpu_uid[c] == 0)
				free.push_back(c);
		while (next_waiting < waiting.size() && !free.empty()) {
			place(*waiting[next_waiting++], free.back());
			free.pop_back();
		}
		while (next_waiting < waiting.size()) {
			Live_job* contender = waiting[next_waiting];
			Live_job* weakest = nullptr;
			for (std::size_t c = 0; c < m; c++) {
				Live_job* job = find(cpu_uid[c]);
				if (!weakest || outranks(*weakest, *job))
					weakest = job;
			}
			if (!outranks(*contender, *weakest))
				break;
			place(*contender, weakest->cpu);
			next_waiting++;
		}
	}

	// Strongly work-conserving: at every event the k highest-priority active
	// jobs occupy the k fastest CPUs.
	void dispatch_uniform()
	{
		std::vector<Live_job*> by_prio;
		for (auto& job : active)
			by_prio.push_back(&job);
		std::sort(by_prio.begin(), by_prio.end(),
		          [](const Live_job* a, const Live_job* b) {
			          return outranks(*a, *b);
		          });
		const std::size_t occupied = std::min(by_prio.size(), m);
		for (std::size_t rank = 0; rank < occupied; rank++) {
			Live_job* job = by_prio[rank];
			const std::size_t cpu = m - 1 - rank;
			if (cpu_uid[cpu] != job->uid)
				place(*job, cpu);
		}
		for (std::size_t rank = occupied; rank < by_prio.size(); rank++) {
			Live_job* job = by_prio[rank];
			if (job->cpu != no_cpu)
				close_segment(job->cpu);
		}
	}

	void advance(const time_value& dt)
	{
		if (dt == 0)
			return;
		for (std::size_t c = 0; c < m; c++)
			if (cpu_uid[c] != 0)
				find(cpu_uid[c])->remaining -= platform.speeds[c] * dt;
		now += dt;
	}

	std::optional<time_value> next_completion() const
	{
		std::optional<time_value> soonest;
		for (std::size_t c = 0; c < m; c++)
			if (cpu_uid[c] != 0) {
				for (const auto& job : active)
					if (job.uid == cpu_uid[c]) {
						time_value at =
							now + job.remaining / platform.speeds[c];
						if (!soonest || at < *soonest)
							soonest = at;
						break;
					}
			}
		return soonest;
	}

	std::optional<time_value> next_event() const
	{
		std::optional<time_value> soonest = next_completion();
		for (const auto& task : enabled)
			if (!soonest || task.next_release < *soonest)
				soonest = task.next_release;
		if (next_mcr < mcrs.size() &&
		    (!soonest || mcrs[next_mcr].time < *soonest))
			soonest = mcrs[next_mcr].time;
		return soonest;
	}

	// Runs events until `stop` holds (checked between events) or, when a
	// hard stop time is given, until that instant is reached. A hard stop
	// at or before the current instant ends the run immediately.
	template <typename Stop>
	void run_events(Stop&& stop,
	                const std::optional<time_value>& hard_stop = {})
	{
		while (!stop()) {
			if (hard_stop && *hard_stop <= now)
				break;
			const auto at = next_event();
			if (!at)
				break;
			if (hard_stop && *at > *hard_stop) {
				advance(*hard_stop - now);
				process_instant();
				break;
			}
			advance(*at - now);
			process_instant();
		}
	}
};

inline std::vector<Rem_job_spec> default_rem_jobs(const Transition_scenario& sc)
{
	std::vector<Rem_job_spec> specs;
	const Mode& source = sc.app.modes[sc.source];
	for (std::size_t t = 0; t < source.tasks.size(); t++)
		specs.push_back({t, source.tasks[t].wcet,
		                 sc.mcr_time + source.tasks[t].deadline});
	return specs;
}

inline void validate_scenario(const Transition_scenario& sc)
{
	if (sc.source >= sc.app.modes.size() || sc.target >= sc.app.modes.size())
		throw std::invalid_argument("scenario: mode index out of range");
	if (sc.source == sc.target)
		throw std::invalid_argument("scenario: source and target coincide");
	if (sc.mcr_time < 0)
		throw std::invalid_argument("scenario: negative MCR time");
	if (!sc.rem_jobs)
		return;
	const Mode& source = sc.app.modes[sc.source];
	std::vector<bool> seen(source.tasks.size(), false);
	for (const auto& spec : *sc.rem_jobs) {
		if (spec.task >= source.tasks.size())
			throw std::invalid_argument("scenario: rem-job task out of range");
		if (seen[spec.task])
			throw std::invalid_argument(
				"scenario: more than one rem-job for one task");
		seen[spec.task] = true;
		if (spec.remaining < 0 ||
		    spec.remaining > source.tasks[spec.task].wcet)
			throw std::invalid_argument(
				"scenario: rem-job remaining time must be within [0, C]");
		if (spec.deadline < sc.mcr_time)
			throw std::invalid_argument(
				"scenario: rem-job deadline before the MCR");
	}
}

// Builds the engine mid-transition: the rem-jobs are synchronous at the MCR
// instant, prioritized by the old-mode scheduler.
inline Transition_engine start_scenario(const Transition_scenario& sc,
                                        Multimode_options opt)
{
	validate_scenario(sc);
	Transition_engine engine(sc.app, sc.platform, std::move(opt));
	engine.now = sc.mcr_time;
	engine.current_mode = sc.source;
	engine.open_phase(Phase::Kind::transition, sc.source, sc.target);

	const auto specs = sc.rem_jobs ? *sc.rem_jobs : default_rem_jobs(sc);
	engine.trans_source = sc.source;
	engine.trans_target = sc.target;
	engine.first_enable_done = false;
	engine.report = Transition_report{};
	engine.report.protocol = engine.opt.protocol;
	engine.report.source = sc.source;
	engine.report.target = sc.target;
	engine.report.mcr_time = sc.mcr_time;
	engine.in_transition = true;
	for (const auto& spec : specs) {
		Transition_engine::Live_job job;
		job.uid = engine.next_uid++;
		job.mode = sc.source;
		job.task = spec.task;
		job.layer = 0;
		job.rem = true;
		job.remaining = spec.remaining;
		job.release = sc.mcr_time;
		job.deadline = spec.deadline;
		engine.assign_key(job);
		engine.active.push_back(job);
	}
	engine.disabled_targets = engine.sorted_targets(sc.source, sc.target);
	engine.enabled_target_tasks.clear();
	if (engine.rem_count() == 0)
		engine.finish_transition();
	engine.process_instant();
	return engine;
}

} // namespace detail

// Synchronous protocol: the rem-jobs run under the old-mode scheduler alone;
// every target task is enabled at the instant the last rem-job completes.
inline Transition_report run_smmso(const Transition_scenario& sc)
{
	Multimode_options opt;
	opt.protocol = Protocol::sm_mso;
	detail::Transition_engine engine = detail::start_scenario(sc, opt);
	engine.run_events([&engine] { return !engine.in_transition; });
	engine.close_all_segments();
	Transition_report report = engine.transitions.front();
	report.trace = engine.trace;
	return report;
}

// Asynchronous protocol: whenever a rem-job completion leaves CPUs free for
// the new mode, still-disabled target tasks are scanned in transition
// deadline order and enabled when the schedulability test accepts them;
// enabled tasks release immediately. The run continues past the transition
// end until every new-mode job released during it has completed or provably
// missed, so requirement-3 violations are reported.
inline Transition_report run_ammso(const Transition_scenario& sc,
                                   const Sched_test& sched = default_sched_test)
{
	Multimode_options opt;
	opt.protocol = Protocol::am_mso;
	opt.sched = sched;
	detail::Transition_engine engine = detail::start_scenario(sc, opt);
	engine.run_events([&engine] { return !engine.in_transition; });

	auto tracked_active = [&engine] {
		for (const auto& job : engine.active)
			if (job.trans_index >= 0)
				return true;
		return false;
	};
	std::optional<time_value> latest_deadline;
	for (const auto& job : engine.active)
		if (job.trans_index >= 0 &&
		    (!latest_deadline || job.deadline > *latest_deadline))
			latest_deadline = job.deadline;
	if (latest_deadline)
		engine.run_events([&tracked_active] { return !tracked_active(); },
		                  latest_deadline);
	engine.close_all_segments();

	Transition_report report = engine.transitions.front();
	for (const auto& job : engine.done)
		if (job.trans_index == 0 && !job.rem && job.completion > job.deadline)
			report.newmode_job_deadline_misses.push_back(
				{job.mode, job.task, job.release, job.deadline, true,
				 job.completion});
	for (const auto& job : engine.active)
		if (job.trans_index == 0)
			report.newmode_job_deadline_misses.push_back(
				{job.mode, job.task, job.release, job.deadline, false, 0});
	report.trace = engine.trace;
	return report;
}

// End-to-end run: steady periodic execution from the initial mode, the given
// MCRs handled by the chosen protocol, everything stopped at the horizon.
// Jobs whose deadline lies beyond the horizon are not judged. An MCR inside
// an AM-MSO lockout window (after the transition's first enablement) is
// rejected with a diagnostic.
inline Multimode_result run_multimode(const Application& app,
                                      const Platform& platform,
                                      std::size_t initial_mode,
                                      std::vector<Mcr> mcr_schedule,
                                      const time_value& horizon,
                                      Multimode_options opt = {})
{
	if (initial_mode >= app.modes.size())
		throw std::invalid_argument("initial mode out of range");
	if (horizon < 0)
		throw std::invalid_argument("negative horizon");
	std::stable_sort(mcr_schedule.begin(), mcr_schedule.end(),
	                 [](const Mcr& a, const Mcr& b) { return a.time < b.time; });
	for (const auto& mcr : mcr_schedule)
		if (mcr.time < 0)
			throw std::invalid_argument("negative MCR time");

	detail::Transition_engine engine(app, platform, std::move(opt));
	engine.current_mode = initial_mode;
	engine.mcrs = std::move(mcr_schedule);
	engine.open_phase(Phase::Kind::steady, initial_mode, initial_mode);
	engine.enable_mode(initial_mode);
	engine.process_instant();
	engine.run_events([] { return false; }, horizon);
	if (engine.now < horizon) {
		engine.advance(horizon - engine.now);
		engine.process_instant();
	}
	engine.close_all_segments();
	engine.close_phase();

	Multimode_result result;
	result.phases = engine.phases;
	std::erase_if(result.phases,
	              [](const Phase& p) { return p.start == p.end; });
	result.transitions = engine.transitions;
	result.releases = engine.releases;
	result.trace = engine.trace;
	for (const auto& job : engine.done)
		if (job.completion > job.deadline)
			result.misses.push_back({job.mode, job.task, job.release,
			                         job.deadline, true, job.completion});
	for (const auto& job : engine.active)
		if (job.deadline <= horizon)
			result.misses.push_back({job.mode, job.task, job.release,
			                         job.deadline, false, 0});
	return result;
}

} // namespace mms

#endif
