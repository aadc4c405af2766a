#ifndef MMSCHED_ORACLE_HPP
#define MMSCHED_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mmsched/model.hpp"
#include "mmsched/simkernel.hpp"

namespace mms {

// Ground truth by enumeration: the maximum makespan and the per-k maximum
// (and minimum) idle instants over job priority assignments, together with
// an assignment attaining each maximum. Exhaustive mode covers all n!
// assignments; sampled mode covers a seeded random subset, so its maxima are
// only lower bounds on the true ones.
struct Oracle_result {
	bool exhaustive = true;
	std::uint64_t assignments_evaluated = 0;
	std::uint64_t seed = 0;

	time_value max_makespan;
	Priority_order argmax_makespan;
	std::vector<time_value> max_idle;
	std::vector<Priority_order> argmax_idle;
	std::vector<time_value> min_idle;
};

namespace detail {

inline std::uint64_t factorial(std::size_t n)
{
	std::uint64_t f = 1;
	for (std::size_t i = 2; i <= n; i++)
		f *= i;
	return f;
}

// rank-th permutation of 0..n-1 in lexicographic order (factorial number
// system), so contiguous rank chunks enumerate contiguous blocks.
inline std::vector<std::size_t> nth_permutation(std::size_t n,
                                                std::uint64_t rank)
{
	std::vector<std::size_t> pool;
	pool.reserve(n);
	for (std::size_t i = 0; i < n; i++)
		pool.push_back(i);
	std::vector<std::size_t> perm;
	perm.reserve(n);
	std::uint64_t radix = factorial(n);
	for (std::size_t i = n; i >= 1; i--) {
		radix /= i;
		const std::uint64_t digit = rank / radix;
		rank %= radix;
		perm.push_back(pool[digit]);
		pool.erase(pool.begin() + digit);
	}
	return perm;
}

struct Oracle_accumulator {
	bool any = false;
	time_value max_makespan;
	std::uint64_t max_makespan_rank = 0;
	std::vector<time_value> max_idle;
	std::vector<std::uint64_t> max_idle_rank;
	std::vector<time_value> min_idle;

	void observe(const std::vector<time_value>& idle,
	             const time_value& makespan, std::uint64_t rank)
	{
		if (!any) {
			any = true;
			max_makespan = makespan;
			max_makespan_rank = rank;
			max_idle = idle;
			max_idle_rank.assign(idle.size(), rank);
			min_idle = idle;
			return;
		}
		if (makespan > max_makespan) {
			max_makespan = makespan;
			max_makespan_rank = rank;
		}
		for (std::size_t k = 0; k < idle.size(); k++) {
			if (idle[k] > max_idle[k]) {
				max_idle[k] = idle[k];
				max_idle_rank[k] = rank;
			}
			if (idle[k] < min_idle[k])
				min_idle[k] = idle[k];
		}
	}

	// Associative merge; rank ties resolve to the earlier assignment so the
	// result is independent of the worker count.
	void merge(const Oracle_accumulator& other)
	{
		if (!other.any)
			return;
		if (!any) {
			*this = other;
			return;
		}
		if (other.max_makespan > max_makespan ||
		    (other.max_makespan == max_makespan &&
		     other.max_makespan_rank < max_makespan_rank)) {
			max_makespan = other.max_makespan;
			max_makespan_rank = other.max_makespan_rank;
		}
		for (std::size_t k = 0; k < max_idle.size(); k++) {
			if (other.max_idle[k] > max_idle[k] ||
			    (other.max_idle[k] == max_idle[k] &&
			     other.max_idle_rank[k] < max_idle_rank[k])) {
				max_idle[k] = other.max_idle[k];
				max_idle_rank[k] = other.max_idle_rank[k];
			}
			if (other.min_idle[k] < min_idle[k])
				min_idle[k] = other.min_idle[k];
		}
	}
};

inline std::vector<time_value> evaluate_assignment(const Job_set& jobs,
                                                   const Platform& platform,
                                                   const Priority_order& order)
{
	Schedule_result schedule =
		platform.is_unit_identical()
			? schedule_identical(jobs, platform.size(), order, false)
			: schedule_uniform(jobs, platform, order, false);
	return std::move(schedule.idle_instants);
}

inline Priority_order order_from_permutation(const Job_set& jobs,
                                             const std::vector<std::size_t>& p)
{
	Priority_order order;
	order.reserve(p.size());
	for (std::size_t pos : p)
		order.push_back(jobs[pos].id);
	return order;
}

// Evaluates the permutations whose index lies in [lo, hi) against one shared
// immutable job set; permutation_of maps an index to the job positions.
template <typename Permutation_of>
Oracle_result run_oracle(const Job_set& jobs, const Platform& platform,
                         std::uint64_t count, unsigned threads,
                         Permutation_of&& permutation_of)
{
	if (threads == 0) {
		threads = std::thread::hardware_concurrency();
		if (threads == 0)
			threads = 1;
	}
	if (threads > count && count > 0)
		threads = static_cast<unsigned>(count);

	std::vector<Oracle_accumulator> partial(threads);
	auto work = [&](unsigned worker) {
		const std::uint64_t chunk = (count + threads - 1) / threads;
		const std::uint64_t lo = worker * chunk;
		const std::uint64_t hi = std::min<std::uint64_t>(count, lo + chunk);
		for (std::uint64_t rank = lo; rank < hi; rank++) {
			const auto perm = permutation_of(rank);
			const auto order = order_from_permutation(jobs, perm);
			const auto idle = evaluate_assignment(jobs, platform, order);
			partial[worker].observe(idle, idle.back(), rank);
		}
	};
	if (threads == 1) {
		work(0);
	} else {
		std::vector<std::thread> pool;
		for (unsigned w = 0; w < threads; w++)
			pool.emplace_back(work, w);
		for (auto& t : pool)
			t.join();
	}

	Oracle_accumulator merged;
	for (const auto& acc : partial)
		merged.merge(acc);

	Oracle_result result;
	result.assignments_evaluated = count;
	result.max_makespan = merged.max_makespan;
	result.argmax_makespan = order_from_permutation(
		jobs, permutation_of(merged.max_makespan_rank));
	result.max_idle = merged.max_idle;
	for (std::uint64_t rank : merged.max_idle_rank)
		result.argmax_idle.push_back(
			order_from_permutation(jobs, permutation_of(rank)));
	result.min_idle = merged.min_idle;
	return result;
}

} // namespace detail

// Exhaustive maximum over all n! priority assignments. Refuses job sets
// beyond limit_n (the factorial blows up); use sampled_max there.
inline Oracle_result exact_max(const Job_set& jobs, const Platform& platform,
                               std::size_t limit_n = 8, unsigned threads = 0)
{
	if (jobs.empty())
		throw std::invalid_argument("exact_max: empty job set");
	if (jobs.size() > limit_n)
		throw std::invalid_argument(
			"exact_max: " + std::to_string(jobs.size()) + " jobs means " +
			std::to_string(jobs.size()) +
			"! assignments; raise limit_n or use sampled_max");
	Oracle_result result = detail::run_oracle(
		jobs, platform, detail::factorial(jobs.size()), threads,
		[&jobs](std::uint64_t rank) {
			return detail::nth_permutation(jobs.size(), rank);
		});
	result.exhaustive = true;
	return result;
}

// Streams one (assignment rank, makespan) row per priority assignment in
// lexicographic order.
inline void write_assignment_csv(std::ostream& out, const Job_set& jobs,
                                 const Platform& platform,
                                 unsigned places = 6)
{
	out << "rank,makespan\n";
	const std::uint64_t count = detail::factorial(jobs.size());
	for (std::uint64_t rank = 0; rank < count; rank++) {
		const auto perm = detail::nth_permutation(jobs.size(), rank);
		const auto order = detail::order_from_permutation(jobs, perm);
		const auto idle = detail::evaluate_assignment(jobs, platform, order);
		out << rank << ',' << to_decimal_string(idle.back(), places) << '\n';
	}
}

// Seeded random search: the identity assignment plus `samples` Fisher-Yates
// draws from one deterministic stream. Maxima are lower bounds on the truth.
inline Oracle_result sampled_max(const Job_set& jobs, const Platform& platform,
                                 std::uint64_t samples, std::uint64_t seed,
                                 unsigned threads = 0)
{
	if (jobs.empty())
		throw std::invalid_argument("sampled_max: empty job set");
	const std::size_t n = jobs.size();

	// pre-drawn permutations keep the result independent of the evaluation
	// order; draw 0 is the identity
	std::vector<std::vector<std::size_t>> draws;
	draws.reserve(samples + 1);
	{
		std::vector<std::size_t> identity;
		for (std::size_t i = 0; i < n; i++)
			identity.push_back(i);
		draws.push_back(identity);
		std::mt19937_64 rng(seed);
		for (std::uint64_t s = 0; s < samples; s++) {
			std::vector<std::size_t> perm = identity;
			for (std::size_t i = n - 1; i > 0; i--) {
				// modulo draw: portable determinism matters more here than
				// the negligible modulo bias
				const std::size_t j =
					static_cast<std::size_t>(rng() % (i + 1));
				std::swap(perm[i], perm[j]);
			}
			draws.push_back(std::move(perm));
		}
	}

	Oracle_result result = detail::run_oracle(
		jobs, platform, draws.size(), threads,
		[&draws](std::uint64_t rank) { return draws[rank]; });
	result.exhaustive = false;
	result.seed = seed;
	return result;
}

} // namespace mms

#endif
