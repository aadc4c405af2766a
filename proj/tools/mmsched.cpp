#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmsched/mmsched.hpp"

namespace {

using namespace mms;

unsigned g_places = 6;
bool g_exact = false;

std::string fmt(const time_value& value)
{
	return g_exact ? to_ratio_string(value)
	               : to_decimal_string(value, g_places);
}

std::vector<time_value> parse_list(const std::string& text)
{
	std::vector<time_value> values;
	std::stringstream stream(text);
	std::string item;
	while (std::getline(stream, item, ','))
		values.push_back(parse_time(item));
	if (values.empty())
		throw std::invalid_argument("empty list: " + text);
	return values;
}

Platform make_platform(const std::string& speeds, std::size_t m)
{
	if (!speeds.empty()) {
		Platform platform{parse_list(speeds)};
		for (std::size_t i = 1; i < platform.size(); i++)
			if (platform.speeds[i] < platform.speeds[i - 1])
				throw std::invalid_argument("speeds must be non-decreasing");
		return platform;
	}
	if (m == 0)
		throw std::invalid_argument("give either --speeds or --m");
	return Platform::identical(m);
}

Priority_order parse_order(const std::string& text, std::size_t n)
{
	if (text.empty()) {
		Priority_order order(n);
		for (std::size_t i = 0; i < n; i++)
			order[i] = i;
		return order;
	}
	Priority_order order;
	std::stringstream stream(text);
	std::string item;
	while (std::getline(stream, item, ','))
		order.push_back(std::stoul(item) - 1); // 1-based on the command line
	return order;
}

std::string order_names(const Priority_order& order)
{
	std::string text;
	for (std::size_t i = 0; i < order.size(); i++)
		text += (i ? " > J" : "J") + std::to_string(order[i] + 1);
	return text;
}

void write_trace_csv(const std::string& path,
                     const std::vector<Trace_segment>& trace)
{
	std::ofstream out(path);
	if (!out)
		throw std::invalid_argument("cannot open " + path);
	out << "mode,task,cpu,start,end\n";
	for (const auto& seg : trace)
		out << seg.mode << ',' << seg.task << ',' << seg.cpu << ','
		    << fmt(seg.start) << ',' << fmt(seg.end) << '\n';
}

int cmd_simulate(const std::string& jobs_text, const std::string& speeds,
                 std::size_t m, const std::string& order_text,
                 const std::string& trace_path)
{
	const Job_set jobs = make_jobs(parse_list(jobs_text));
	const Platform platform = make_platform(speeds, m);
	const Priority_order order = parse_order(order_text, jobs.size());
	const Schedule_result result =
		platform.is_unit_identical()
			? schedule_identical(jobs, platform.size(), order)
			: schedule_uniform(jobs, platform, order);

	std::cout << "priority: " << order_names(order) << '\n';
	std::cout << "makespan: " << fmt(result.makespan) << '\n';
	std::cout << "idle instants:";
	for (const auto& idle : result.idle_instants)
		std::cout << ' ' << fmt(idle);
	std::cout << '\n';
	for (std::size_t i = 0; i < jobs.size(); i++)
		std::cout << "J" << jobs[i].id + 1 << ": start "
		          << fmt(result.start[i]) << ", completion "
		          << fmt(result.completion[i]) << '\n';
	if (!trace_path.empty()) {
		std::ofstream out(trace_path);
		if (!out)
			throw std::invalid_argument("cannot open " + trace_path);
		write_segment_csv(out, result.segments, g_places);
	}
	return 0;
}

int cmd_bounds(const std::string& flavor, const std::string& jobs_text,
               const std::string& speeds, std::size_t m)
{
	const std::vector<time_value> costs = parse_list(jobs_text);
	const Platform platform = make_platform(speeds, m);

	auto print_vector = [](const Idle_bound_vector& bounds) {
		std::cout << "maxidle:";
		for (const auto& v : bounds.values)
			std::cout << ' ' << fmt(v);
		std::cout << '\n'
		          << "makespan bound: " << fmt(bounds.makespan_bound())
		          << '\n';
	};

	if (flavor == "ident-fjp" || flavor == "ident-fjp-legacy" ||
	    flavor == "unif-fjp" || flavor == "unsound-ms0") {
		const Job_set jobs = sorted_ascending(make_jobs(costs));
		if (flavor == "ident-fjp") {
			print_vector(ident_fjp_idle_bounds(jobs, platform.size()));
		} else if (flavor == "ident-fjp-legacy") {
			print_vector(ident_fjp_idle_bounds_legacy(jobs, platform.size()));
		} else if (flavor == "unif-fjp") {
			const auto trace = unif_fjp_trace(jobs, platform);
			std::cout << "minidle:";
			for (const auto& v : trace.min_idle)
				std::cout << ' ' << fmt(v);
			std::cout << "\nmaxidle:";
			for (const auto& v : trace.max_idle)
				std::cout << ' ' << fmt(v);
			std::cout << '\n'
			          << "ms1: " << fmt(trace.ms1) << '\n'
			          << "ms2: " << fmt(trace.ms2) << '\n'
			          << "ms3: " << fmt(trace.ms3) << '\n'
			          << "ms_min: " << fmt(trace.ms_min()) << '\n';
		} else {
			std::cout << "ms0: "
			          << fmt(unsound::unif_fjp_ms0_naive(jobs, platform))
			          << '\n'
			          << "WARNING: ms0 is a demonstrator, NOT an upper "
			             "bound on the makespan\n";
		}
	} else if (flavor == "ident-ftp") {
		// the job list order is the priority order, highest first
		print_vector(ident_ftp_idle_bounds(make_jobs(costs),
		                                   platform.size()));
	} else if (flavor == "unif-ftp") {
		print_vector(unif_ftp_idle_bounds(make_jobs(costs), platform));
	} else {
		throw std::invalid_argument("unknown flavor: " + flavor);
	}
	return 0;
}

int cmd_oracle(const std::string& jobs_text, const std::string& speeds,
               std::size_t m, bool exhaustive, std::uint64_t samples,
               std::uint64_t seed, std::size_t limit, unsigned threads,
               const std::string& csv_path)
{
	const Job_set jobs = make_jobs(parse_list(jobs_text));
	const Platform platform = make_platform(speeds, m);
	const bool use_exhaustive = exhaustive || samples == 0;
	const Oracle_result result =
		use_exhaustive ? exact_max(jobs, platform, limit, threads)
		               : sampled_max(jobs, platform, samples, seed, threads);

	std::cout << "assignments evaluated: " << result.assignments_evaluated
	          << (result.exhaustive ? " (exhaustive)" : " (sampled)")
	          << '\n';
	std::cout << "max makespan: " << fmt(result.max_makespan) << " via "
	          << order_names(result.argmax_makespan) << '\n';
	for (std::size_t k = 0; k < result.max_idle.size(); k++)
		std::cout << "max idle_" << k + 1 << ": "
		          << fmt(result.max_idle[k]) << " via "
		          << order_names(result.argmax_idle[k]) << '\n';
	std::cout << "min idle:";
	for (const auto& v : result.min_idle)
		std::cout << ' ' << fmt(v);
	std::cout << '\n';
	if (!result.exhaustive)
		std::cout << "note: sampled maxima are lower bounds on the true "
		             "maxima\n";

	if (!csv_path.empty()) {
		if (!use_exhaustive)
			throw std::invalid_argument(
				"per-assignment CSV needs the exhaustive oracle");
		std::ofstream out(csv_path);
		if (!out)
			throw std::invalid_argument("cannot open " + csv_path);
		write_assignment_csv(out, jobs, platform, g_places);
	}
	return 0;
}

int cmd_validity(const std::string& app_path, const std::string& protocol,
                 const std::string& csv_path)
{
	const Document doc = load_document(app_path);
	const auto violations = validate_application(doc.app, doc.platform);
	if (!violations.empty()) {
		for (const auto& v : violations)
			std::cerr << "invalid application: " << v << '\n';
		return 2;
	}
	const Validity_report report =
		protocol == "am" ? validity_ammso(doc.app, doc.platform)
		                 : validity_smmso(doc.app, doc.platform);

	std::cout << std::left << std::setw(12) << "transition"
	          << std::setw(18) << "bound" << std::setw(14) << "value"
	          << std::setw(14) << "deadline" << std::setw(14) << "slack"
	          << "verdict\n";
	for (const auto& pair : report.pairs) {
		std::ostringstream arrow;
		arrow << pair.source << "->" << pair.target;
		std::cout << std::left << std::setw(12) << arrow.str()
		          << std::setw(18) << pair.bound_name << std::setw(14)
		          << fmt(pair.bound_value) << std::setw(14)
		          << fmt(pair.binding_deadline) << std::setw(14)
		          << fmt(pair.slack()) << to_string(pair.verdict);
		if (!pair.detail.empty())
			std::cout << "  (" << pair.detail << ')';
		std::cout << '\n';
	}
	for (const auto& [pair, enables] : report.enable_bounds) {
		std::cout << "enable bounds " << pair.first << "->" << pair.second
		          << ':';
		for (const auto& enable : enables)
			std::cout << " task" << enable.task << '@' << fmt(enable.bound);
		std::cout << '\n';
	}
	std::cout << "verdict: " << (report.valid ? "valid" : "invalid") << '\n';

	if (!csv_path.empty()) {
		std::ofstream out(csv_path);
		if (!out)
			throw std::invalid_argument("cannot open " + csv_path);
		out << "source,target,bound,value,binding_deadline,slack,verdict\n";
		for (const auto& pair : report.pairs)
			out << pair.source << ',' << pair.target << ','
			    << pair.bound_name << ',' << fmt(pair.bound_value) << ','
			    << fmt(pair.binding_deadline) << ',' << fmt(pair.slack())
			    << ',' << to_string(pair.verdict) << '\n';
	}
	return report.valid ? 0 : 1;
}

void print_transition_report(const Transition_report& report)
{
	std::cout << "protocol: " << to_string(report.protocol) << '\n'
	          << "mcr: " << fmt(report.mcr_time) << '\n'
	          << "transition end: " << fmt(report.transition_end)
	          << " (length " << fmt(report.transition_end - report.mcr_time)
	          << ")\n";
	for (const auto& [task, offset] : report.enable_times)
		std::cout << "enable task" << task << ": +" << fmt(offset) << " (at "
		          << fmt(report.mcr_time + offset) << ")\n";
	std::cout << "rem-job deadline misses: "
	          << report.remjob_deadline_misses.size() << '\n';
	for (const auto& miss : report.remjob_deadline_misses)
		std::cout << "  mode" << miss.mode << " task" << miss.task
		          << " deadline " << fmt(miss.deadline) << " completion "
		          << fmt(miss.completion) << '\n';
	std::cout << "transition deadline misses: "
	          << report.transition_deadline_misses.size() << '\n';
	for (const auto& miss : report.transition_deadline_misses)
		std::cout << "  task" << miss.task << " deadline +"
		          << fmt(miss.deadline) << " enabled +"
		          << fmt(miss.enable_time) << '\n';
	if (report.protocol == Protocol::am_mso) {
		std::cout << "new-mode job deadline misses: "
		          << report.newmode_job_deadline_misses.size() << '\n';
		for (const auto& miss : report.newmode_job_deadline_misses)
			std::cout << "  task" << miss.task << " released "
			          << fmt(miss.release) << " deadline "
			          << fmt(miss.deadline) << '\n';
	}
}

int cmd_transition(const std::string& scenario_path,
                   const std::string& protocol,
                   const std::string& trace_path)
{
	const Document doc = load_document(scenario_path);
	if (doc.mcr_schedule.empty())
		throw std::invalid_argument("scenario needs an mcr_schedule entry");

	Transition_scenario sc;
	sc.app = doc.app;
	sc.platform = doc.platform;
	sc.source = doc.initial_mode;
	sc.target = doc.mcr_schedule.front().target;
	sc.mcr_time = doc.mcr_schedule.front().time;
	sc.rem_jobs = doc.rem_jobs;

	const Transition_report report =
		protocol == "am" ? run_ammso(sc) : run_smmso(sc);
	print_transition_report(report);
	if (!trace_path.empty())
		write_trace_csv(trace_path, report.trace);
	const bool clean = report.remjob_deadline_misses.empty() &&
	                   report.transition_deadline_misses.empty() &&
	                   report.newmode_job_deadline_misses.empty();
	return clean ? 0 : 1;
}

int cmd_experiment(const std::string& jobs_text, std::size_t m,
                   const std::string& smin, const std::string& smax,
                   const std::string& sstep, std::size_t limit,
                   bool force_exhaustive, std::uint64_t samples,
                   std::uint64_t seed, unsigned threads,
                   const std::string& out_path)
{
	Experiment_config cfg;
	if (!jobs_text.empty())
		cfg.jobs = parse_list(jobs_text);
	cfg.m = m;
	cfg.speed_min = parse_time(smin);
	cfg.speed_max = parse_time(smax);
	cfg.speed_step = parse_time(sstep);
	cfg.exhaustive_limit = limit;
	cfg.force_exhaustive = force_exhaustive;
	cfg.samples = samples;
	cfg.seed = seed;
	cfg.threads = threads;

	const Experiment_result result = run_experiment(cfg);
	if (out_path.empty()) {
		write_experiment_csv(std::cout, result, g_places);
	} else {
		std::ofstream out(out_path);
		if (!out)
			throw std::invalid_argument("cannot open " + out_path);
		write_experiment_csv(out, result, g_places);
		std::cout << result.rows.size() << " platforms -> " << out_path
		          << '\n';
		std::cout << "Emin mean: " << fmt(result.emin.mean) << "%  max: "
		          << fmt(result.emin.max) << "%  min: "
		          << fmt(result.emin.min) << "%\n";
	}
	return 0;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"multi-mode real-time scheduling: simulation, makespan "
	             "bounds, mode-change protocols"};
	app.require_subcommand(1);
	app.add_option("--places", g_places, "decimal places for printed values");
	app.add_flag("--ratios", g_exact, "print exact num/den ratios");

	std::string jobs_text, speeds, order_text, trace_path, flavor;
	std::string app_path, protocol = "sm", csv_path, out_path;
	std::string smin = "1", smax = "101", sstep = "50";
	std::size_t m = 0, limit = 8;
	bool exhaustive = false, force_exhaustive = false;
	std::uint64_t samples = 0, exp_samples = 50000, seed = 1;
	unsigned threads = 0;

	auto* simulate = app.add_subcommand(
		"simulate", "schedule a synchronous job set");
	simulate->add_option("--jobs", jobs_text, "processing times")->required();
	simulate->add_option("--speeds", speeds, "uniform platform speeds");
	simulate->add_option("--m", m, "identical CPU count");
	simulate->add_option("--order", order_text,
	                     "priority order, 1-based job ids, highest first");
	simulate->add_option("--trace", trace_path, "segment CSV output");

	auto* bounds = app.add_subcommand("bounds", "closed-form idle/makespan "
	                                            "bounds");
	bounds->add_option("--flavor", flavor,
	                   "ident-fjp | ident-fjp-legacy | ident-ftp | unif-fjp "
	                   "| unif-ftp | unsound-ms0")
		->required();
	bounds->add_option("--jobs", jobs_text, "processing times (FTP flavors: "
	                                        "priority order, highest first)")
		->required();
	bounds->add_option("--speeds", speeds, "uniform platform speeds");
	bounds->add_option("--m", m, "identical CPU count");

	auto* oracle = app.add_subcommand(
		"oracle", "exact maxima over priority assignments");
	oracle->add_option("--jobs", jobs_text, "processing times")->required();
	oracle->add_option("--speeds", speeds, "uniform platform speeds");
	oracle->add_option("--m", m, "identical CPU count");
	oracle->add_flag("--exhaustive", exhaustive, "force full enumeration");
	oracle->add_option("--samples", samples, "sampled mode: draw count");
	oracle->add_option("--seed", seed, "sampled mode: RNG seed");
	oracle->add_option("--limit", limit, "exhaustive job-count limit");
	oracle->add_option("--threads", threads, "worker threads (0 = auto)");
	oracle->add_option("--csv", csv_path, "per-assignment makespan CSV");

	auto* validity = app.add_subcommand(
		"validity", "design-time validity tests for a mode-change protocol");
	validity->add_option("--app", app_path, "application JSON")->required();
	validity->add_option("--protocol", protocol, "sm | am");
	validity->add_option("--csv", csv_path, "per-pair CSV output");

	auto* transition = app.add_subcommand(
		"transition", "run one mode transition from a scenario file");
	transition->add_option("--scenario", app_path, "scenario JSON")
		->required();
	transition->add_option("--protocol", protocol, "sm | am");
	transition->add_option("--trace", trace_path, "segment CSV output");

	auto* experiment = app.add_subcommand(
		"experiment", "bound-accuracy sweep over a platform grid");
	experiment->add_option("--jobs", jobs_text,
	                       "processing times (default: the 7-job reference "
	                       "prefix)");
	experiment->add_option("--m", m, "CPU count")->default_val(3);
	experiment->add_option("--smin", smin, "lowest speed level");
	experiment->add_option("--smax", smax, "highest speed level");
	experiment->add_option("--sstep", sstep, "speed increment");
	experiment->add_option("--limit", limit, "exhaustive job-count limit");
	experiment->add_flag("--exhaustive", force_exhaustive,
	                     "fail instead of sampling beyond the limit");
	experiment->add_option("--samples", exp_samples, "sampled-oracle draws");
	experiment->add_option("--seed", seed, "sampled-oracle seed");
	experiment->add_option("--threads", threads, "worker threads (0 = auto)");
	experiment->add_option("--out", out_path, "CSV output path");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& error) {
		if (error.get_exit_code() == 0) // --help
			return app.exit(error);
		app.exit(error);
		return 2;
	}

	try {
		if (simulate->parsed())
			return cmd_simulate(jobs_text, speeds, m, order_text, trace_path);
		if (bounds->parsed())
			return cmd_bounds(flavor, jobs_text, speeds, m);
		if (oracle->parsed())
			return cmd_oracle(jobs_text, speeds, m, exhaustive, samples,
			                  seed, limit, threads, csv_path);
		if (validity->parsed())
			return cmd_validity(app_path, protocol, csv_path);
		if (transition->parsed())
			return cmd_transition(app_path, protocol, trace_path);
		if (experiment->parsed())
			return cmd_experiment(jobs_text, m, smin, smax, sstep, limit,
			                      force_exhaustive, exp_samples, seed,
			                      threads, out_path);
	} catch (const std::exception& error) {
		std::cerr << "error: " << error.what() << '\n';
		return 2;
	}
	return 2;
}
