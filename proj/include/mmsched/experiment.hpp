#ifndef MMSCHED_EXPERIMENT_HPP
#define MMSCHED_EXPERIMENT_HPP

#include <cmath>
#include <ostream>
#include <thread>
#include <vector>

#include "mmsched/bounds.hpp"
#include "mmsched/model.hpp"
#include "mmsched/oracle.hpp"

namespace mms {

// The ten avionic-flavored processing times used by the reference
// measurement campaign.
inline std::vector<time_value> table_v_jobs()
{
	return {3896, 3964, 878, 1378, 2228, 3612, 1230, 1232, 1668, 4672};
}

// Sweep of uniform platforms: every combination of per-CPU speeds drawn from
// the grid {speed_min, speed_min+step, ..., <= speed_max}, each tuple sorted
// into a platform. For every platform the exact maximum makespan (exhaustive
// when n <= exhaustive_limit, else seeded sampling) is compared against the
// three analytic bounds.
struct Experiment_config {
	std::vector<time_value> jobs; // empty: 7-job prefix of table_v_jobs()
	std::size_t m = 3;
	time_value speed_min = 1;
	time_value speed_max = 101;
	time_value speed_step = 50;
	std::size_t exhaustive_limit = 8;
	bool force_exhaustive = false;
	std::uint64_t samples = 50000;
	std::uint64_t seed = 1;
	unsigned threads = 0;
};

struct Experiment_row {
	std::vector<time_value> speeds;
	time_value lambda;
	time_value e1, e2, e3, emin; // relative errors in percent
	time_value exact;            // maximum makespan (sampled: lower bound)
	time_value ms1, ms2, ms3;
	bool exhaustive = true;
};

// Table-style summary of one error column, plus estimator-quality figures
// computed from the raw bound/exact pairs: bias is the mean signed
// difference bound - exact, MSE its mean square (both in time units).
struct Column_stats {
	time_value min, q1, median, q3, max;
	time_value mean, variance;
	double sd = 0; // sqrt(variance), reporting only
	time_value bias, mse;
};

struct Experiment_result {
	std::vector<Experiment_row> rows;
	Column_stats e1, e2, e3, emin;
};

namespace detail {

// type-7 quantile (linear interpolation), exact in rationals
inline time_value quantile(const std::vector<time_value>& sorted,
                           const time_value& p)
{
	if (sorted.size() == 1)
		return sorted.front();
	const time_value h = p * time_value(static_cast<long>(sorted.size() - 1));
	const mpz_class floor_h = h.get_num() / h.get_den(); // h >= 0
	const auto idx = static_cast<std::size_t>(floor_h.get_ui());
	const time_value frac = h - time_value(floor_h);
	if (idx + 1 >= sorted.size())
		return sorted.back();
	return sorted[idx] + frac * (sorted[idx + 1] - sorted[idx]);
}

inline Column_stats column_stats(const std::vector<time_value>& errors,
                                 const std::vector<time_value>& bounds,
                                 const std::vector<time_value>& exacts)
{
	Column_stats stats;
	std::vector<time_value> sorted = errors;
	std::sort(sorted.begin(), sorted.end());
	const auto n = time_value(static_cast<long>(sorted.size()));
	stats.min = sorted.front();
	stats.max = sorted.back();
	stats.q1 = quantile(sorted, time_value(1, 4));
	stats.median = quantile(sorted, time_value(1, 2));
	stats.q3 = quantile(sorted, time_value(3, 4));
	time_value sum = 0;
	for (const auto& e : errors)
		sum += e;
	stats.mean = sum / n;
	time_value var = 0;
	for (const auto& e : errors)
		var += (e - stats.mean) * (e - stats.mean);
	stats.variance = var / n;
	stats.sd = std::sqrt(stats.variance.get_d());
	time_value bias = 0, mse = 0;
	for (std::size_t i = 0; i < bounds.size(); i++) {
		const time_value diff = bounds[i] - exacts[i];
		bias += diff;
		mse += diff * diff;
	}
	stats.bias = bias / n;
	stats.mse = mse / n;
	return stats;
}

inline std::vector<std::vector<time_value>>
speed_tuples(const Experiment_config& cfg)
{
	std::vector<time_value> levels;
	for (time_value s = cfg.speed_min; s <= cfg.speed_max; s += cfg.speed_step)
		levels.push_back(s);
	if (levels.empty())
		throw std::invalid_argument("experiment: empty speed grid");

	std::vector<std::vector<time_value>> tuples;
	std::vector<std::size_t> digits(cfg.m, 0);
	while (true) {
		std::vector<time_value> tuple;
		for (std::size_t i = 0; i < cfg.m; i++)
			tuple.push_back(levels[digits[i]]);
		std::sort(tuple.begin(), tuple.end());
		tuples.push_back(std::move(tuple));
		std::size_t pos = cfg.m;
		while (pos > 0) {
			pos--;
			if (++digits[pos] < levels.size())
				break;
			digits[pos] = 0;
			if (pos == 0)
				return tuples;
		}
	}
}

} // namespace detail

inline Experiment_result run_experiment(const Experiment_config& config)
{
	Experiment_config cfg = config;
	if (cfg.jobs.empty()) {
		const auto all = table_v_jobs();
		cfg.jobs.assign(all.begin(), all.begin() + 7);
	}
	if (cfg.m == 0)
		throw std::invalid_argument("experiment: m must be >= 1");
	const bool exhaustive = cfg.jobs.size() <= cfg.exhaustive_limit;
	if (!exhaustive && cfg.force_exhaustive) {
		time_value cost = 1;
		for (std::size_t i = 2; i <= cfg.jobs.size(); i++)
			cost *= time_value(static_cast<long>(i));
		throw std::invalid_argument(
			"experiment: exhaustive oracle over " +
			std::to_string(cfg.jobs.size()) + " jobs needs " +
			to_ratio_string(cost) +
			" schedules per platform; use sampling or fewer jobs");
	}

	const auto tuples = detail::speed_tuples(cfg);
	const Job_set jobs = sorted_ascending(make_jobs(cfg.jobs));

	unsigned threads = cfg.threads;
	if (threads == 0) {
		threads = std::thread::hardware_concurrency();
		if (threads == 0)
			threads = 1;
	}
	threads = std::min<std::size_t>(threads, tuples.size());

	// platforms fan out across the pool; each worker runs its oracle
	// single-threaded
	std::vector<Experiment_row> rows(tuples.size());
	auto work = [&](unsigned worker) {
		for (std::size_t i = worker; i < tuples.size(); i += threads) {
			const Platform platform{std::vector<time_value>(tuples[i])};
			Experiment_row row;
			row.speeds = tuples[i];
			row.lambda = lambda_pi(platform);
			row.ms1 = unif_fjp_ms1(jobs, platform);
			row.ms2 = unif_fjp_ms2(jobs, platform);
			row.ms3 = unif_fjp_ms3(jobs, platform);
			const Oracle_result oracle =
				exhaustive ? exact_max(jobs, platform, cfg.exhaustive_limit, 1)
				           : sampled_max(jobs, platform, cfg.samples,
				                         cfg.seed, 1);
			row.exact = oracle.max_makespan;
			row.exhaustive = oracle.exhaustive;
			auto error = [&row](const time_value& bound) -> time_value {
				return (bound - row.exact) / row.exact * 100;
			};
			row.e1 = error(row.ms1);
			row.e2 = error(row.ms2);
			row.e3 = error(row.ms3);
			row.emin = error(std::min({row.ms1, row.ms2, row.ms3}));
			rows[i] = std::move(row);
		}
	};
	if (threads <= 1) {
		work(0);
	} else {
		std::vector<std::thread> pool;
		for (unsigned w = 0; w < threads; w++)
			pool.emplace_back(work, w);
		for (auto& t : pool)
			t.join();
	}

	Experiment_result result;
	result.rows = std::move(rows);
	std::vector<time_value> e1, e2, e3, emin, b1, b2, b3, bmin, exact;
	for (const auto& row : result.rows) {
		e1.push_back(row.e1);
		e2.push_back(row.e2);
		e3.push_back(row.e3);
		emin.push_back(row.emin);
		b1.push_back(row.ms1);
		b2.push_back(row.ms2);
		b3.push_back(row.ms3);
		bmin.push_back(std::min({row.ms1, row.ms2, row.ms3}));
		exact.push_back(row.exact);
	}
	result.e1 = detail::column_stats(e1, b1, exact);
	result.e2 = detail::column_stats(e2, b2, exact);
	result.e3 = detail::column_stats(e3, b3, exact);
	result.emin = detail::column_stats(emin, bmin, exact);
	return result;
}

inline void write_experiment_csv(std::ostream& out,
                                 const Experiment_result& result,
                                 unsigned places = 6)
{
	out << "speeds,lambda,E1,E2,E3,Emin,exact,ms1,ms2,ms3,oracle\n";
	for (const auto& row : result.rows) {
		std::string speeds;
		for (std::size_t i = 0; i < row.speeds.size(); i++)
			speeds += (i ? " " : "") + to_ratio_string(row.speeds[i]);
		out << speeds << ',' << to_decimal_string(row.lambda, places) << ','
		    << to_decimal_string(row.e1, places) << ','
		    << to_decimal_string(row.e2, places) << ','
		    << to_decimal_string(row.e3, places) << ','
		    << to_decimal_string(row.emin, places) << ','
		    << to_decimal_string(row.exact, places) << ','
		    << to_decimal_string(row.ms1, places) << ','
		    << to_decimal_string(row.ms2, places) << ','
		    << to_decimal_string(row.ms3, places) << ','
		    << (row.exhaustive ? "exhaustive" : "sampled") << '\n';
	}
	out << "\nstat,E1,E2,E3,Emin\n";
	auto line = [&](const char* name, auto pick) {
		out << name << ',' << pick(result.e1) << ',' << pick(result.e2) << ','
		    << pick(result.e3) << ',' << pick(result.emin) << '\n';
	};
	const auto dec = [places](const time_value& v) {
		return to_decimal_string(v, places);
	};
	line("min", [&](const Column_stats& s) { return dec(s.min); });
	line("q1", [&](const Column_stats& s) { return dec(s.q1); });
	line("median", [&](const Column_stats& s) { return dec(s.median); });
	line("mean", [&](const Column_stats& s) { return dec(s.mean); });
	line("q3", [&](const Column_stats& s) { return dec(s.q3); });
	line("max", [&](const Column_stats& s) { return dec(s.max); });
	line("variance", [&](const Column_stats& s) { return dec(s.variance); });
	line("sd", [&](const Column_stats& s) { return std::to_string(s.sd); });
	line("bias", [&](const Column_stats& s) { return dec(s.bias); });
	line("mse", [&](const Column_stats& s) { return dec(s.mse); });
}

} // namespace mms

#endif
