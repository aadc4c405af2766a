#ifndef MMSCHED_IO_HPP
#define MMSCHED_IO_HPP

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "mmsched/model.hpp"
#include "mmsched/protocols.hpp"

namespace mms {

// On-disk document: an application/platform description, optionally extended
// with scenario fields (initial mode, MCR schedule, explicit rem-jobs,
// horizon). Times are JSON integers or "num/den" strings; floats are
// rejected because they cannot round-trip exactly. Mode indices are 0-based;
// transition deadline keys read "i->j".
struct Document {
	Application app;
	Platform platform;
	std::size_t initial_mode = 0;
	std::vector<Mcr> mcr_schedule;
	std::optional<std::vector<Rem_job_spec>> rem_jobs;
	std::optional<time_value> horizon;
};

namespace io_detail {

using nlohmann::json;

inline time_value time_from_json(const json& value, const std::string& where)
{
	if (value.is_number_integer())
		return time_value(static_cast<long>(value.get<std::int64_t>()));
	if (value.is_number_unsigned())
		return time_value(static_cast<unsigned long>(value.get<std::uint64_t>()));
	if (value.is_string())
		return parse_time(value.get<std::string>());
	throw std::invalid_argument(where +
	                            ": times must be integers or \"num/den\" "
	                            "strings");
}

inline json time_to_json(const time_value& value)
{
	if (value.get_den() == 1 && value.get_num().fits_slong_p())
		return json(value.get_num().get_si());
	return json(to_ratio_string(value));
}

inline std::pair<std::size_t, std::size_t> parse_pair_key(const std::string& key)
{
	const auto arrow = key.find("->");
	if (arrow == std::string::npos)
		throw std::invalid_argument("transition_deadlines key must be "
		                            "\"i->j\": " + key);
	return {static_cast<std::size_t>(std::stoul(key.substr(0, arrow))),
	        static_cast<std::size_t>(std::stoul(key.substr(arrow + 2)))};
}

} // namespace io_detail

inline Document document_from_json(const nlohmann::json& root)
{
	using io_detail::time_from_json;
	Document doc;

	if (!root.contains("modes") || !root["modes"].is_array())
		throw std::invalid_argument("document needs a modes[] array");
	for (const auto& jmode : root["modes"]) {
		Mode mode;
		for (const auto& jtask : jmode.at("tasks")) {
			Task task;
			task.wcet = time_from_json(jtask.at("C"), "task C");
			task.deadline = time_from_json(jtask.at("D"), "task D");
			task.period = time_from_json(jtask.at("T"), "task T");
			mode.tasks.push_back(task);
		}
		const auto& jsched = jmode.at("scheduler");
		const std::string kind = jsched.at("kind").get<std::string>();
		if (kind == "FTP") {
			std::vector<std::size_t> order;
			if (jsched.contains("order"))
				for (const auto& idx : jsched["order"])
					order.push_back(idx.get<std::size_t>());
			else
				for (std::size_t t = 0; t < mode.tasks.size(); t++)
					order.push_back(t);
			mode.scheduler = Scheduler::ftp(order);
		} else if (kind == "FJP") {
			if (jsched.contains("rule") &&
			    jsched["rule"].get<std::string>() != "EDF")
				throw std::invalid_argument("unknown FJP rule: " +
				                            jsched["rule"].get<std::string>());
			mode.scheduler = Scheduler::edf();
		} else {
			throw std::invalid_argument("scheduler kind must be FTP or FJP");
		}
		doc.app.modes.push_back(std::move(mode));
	}

	if (root.contains("transition_deadlines"))
		for (const auto& [key, values] :
		     root["transition_deadlines"].items()) {
			const auto pair = io_detail::parse_pair_key(key);
			std::vector<time_value> deadlines;
			for (const auto& v : values)
				deadlines.push_back(time_from_json(v, "transition deadline"));
			doc.app.transition_deadlines[pair] = std::move(deadlines);
		}

	if (!root.contains("platform"))
		throw std::invalid_argument("document needs a platform");
	for (const auto& s : root["platform"].at("speeds"))
		doc.platform.speeds.push_back(io_detail::time_from_json(s, "speed"));

	if (root.contains("initial_mode"))
		doc.initial_mode = root["initial_mode"].get<std::size_t>();
	if (root.contains("mcr_schedule"))
		for (const auto& jmcr : root["mcr_schedule"])
			doc.mcr_schedule.push_back(
				{time_from_json(jmcr.at("time"), "MCR time"),
				 jmcr.at("target").get<std::size_t>()});
	if (root.contains("rem_jobs")) {
		doc.rem_jobs.emplace();
		for (const auto& jrem : root["rem_jobs"])
			doc.rem_jobs->push_back(
				{jrem.at("task").get<std::size_t>(),
				 time_from_json(jrem.at("remaining"), "rem-job remaining"),
				 time_from_json(jrem.at("deadline"), "rem-job deadline")});
	}
	if (root.contains("horizon"))
		doc.horizon = time_from_json(root["horizon"], "horizon");

	return doc;
}

inline nlohmann::json document_to_json(const Document& doc)
{
	using io_detail::time_to_json;
	nlohmann::json root;

	root["modes"] = nlohmann::json::array();
	for (const Mode& mode : doc.app.modes) {
		nlohmann::json jmode;
		jmode["tasks"] = nlohmann::json::array();
		for (const Task& task : mode.tasks)
			jmode["tasks"].push_back({{"C", time_to_json(task.wcet)},
			                          {"D", time_to_json(task.deadline)},
			                          {"T", time_to_json(task.period)}});
		if (mode.scheduler.kind == Sched_kind::FTP)
			jmode["scheduler"] = {{"kind", "FTP"},
			                      {"order", mode.scheduler.ftp_order}};
		else
			jmode["scheduler"] = {{"kind", "FJP"}, {"rule", "EDF"}};
		root["modes"].push_back(std::move(jmode));
	}

	nlohmann::json deadlines = nlohmann::json::object();
	for (const auto& [pair, values] : doc.app.transition_deadlines) {
		nlohmann::json list = nlohmann::json::array();
		for (const auto& v : values)
			list.push_back(time_to_json(v));
		deadlines[std::to_string(pair.first) + "->" +
		          std::to_string(pair.second)] = std::move(list);
	}
	root["transition_deadlines"] = std::move(deadlines);

	nlohmann::json speeds = nlohmann::json::array();
	for (const auto& s : doc.platform.speeds)
		speeds.push_back(time_to_json(s));
	root["platform"] = {{"speeds", std::move(speeds)}};

	if (doc.initial_mode != 0)
		root["initial_mode"] = doc.initial_mode;
	if (!doc.mcr_schedule.empty()) {
		root["mcr_schedule"] = nlohmann::json::array();
		for (const Mcr& mcr : doc.mcr_schedule)
			root["mcr_schedule"].push_back(
				{{"time", time_to_json(mcr.time)}, {"target", mcr.target}});
	}
	if (doc.rem_jobs) {
		root["rem_jobs"] = nlohmann::json::array();
		for (const Rem_job_spec& spec : *doc.rem_jobs)
			root["rem_jobs"].push_back(
				{{"task", spec.task},
				 {"remaining", time_to_json(spec.remaining)},
				 {"deadline", time_to_json(spec.deadline)}});
	}
	if (doc.horizon)
		root["horizon"] = time_to_json(*doc.horizon);

	return root;
}

inline Document load_document(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		throw std::invalid_argument("cannot open " + path);
	nlohmann::json root;
	in >> root;
	return document_from_json(root);
}

inline void save_document(const Document& doc, const std::string& path)
{
	std::ofstream out(path);
	if (!out)
		throw std::invalid_argument("cannot open " + path + " for writing");
	out << document_to_json(doc).dump(2) << '\n';
}

} // namespace mms

#endif
