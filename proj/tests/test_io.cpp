#include "doctest.h"

#include <sstream>

#include "mmsched/io.hpp"

using namespace mms;

namespace {

const char* example_json = R"({
  "modes": [
    {"tasks": [{"C": 40, "D": 120, "T": 120},
               {"C": 20, "D": 120, "T": 120},
               {"C": 40, "D": 120, "T": 120},
               {"C": 60, "D": 120, "T": 120}],
     "scheduler": {"kind": "FTP", "order": [0, 1, 2, 3]}},
    {"tasks": [{"C": 100, "D": 120, "T": 120},
               {"C": "40", "D": 120, "T": 120},
               {"C": "81/2", "D": 120, "T": 120}],
     "scheduler": {"kind": "FJP"}}
  ],
  "transition_deadlines": {"0->1": [95, 100, 100],
                           "1->0": [300, 300, 300, 300]},
  "platform": {"speeds": [1, "3/2"]},
  "initial_mode": 0,
  "mcr_schedule": [{"time": 130, "target": 1}],
  "rem_jobs": [{"task": 0, "remaining": 30, "deadline": 240}],
  "horizon": 400
})";

} // namespace

TEST_CASE("documents parse with exact rational times")
{
	const auto doc = document_from_json(nlohmann::json::parse(example_json));
	REQUIRE(doc.app.modes.size() == 2);
	CHECK(doc.app.modes[0].tasks[3].wcet == 60);
	CHECK(doc.app.modes[1].tasks[2].wcet == ratio(81, 2));
	CHECK(doc.app.modes[1].scheduler.kind == Sched_kind::FJP);
	CHECK(doc.platform.speeds[1] == ratio(3, 2));
	CHECK(doc.app.deadlines_for(0, 1) ==
	      std::vector<time_value>{95, 100, 100});
	REQUIRE(doc.mcr_schedule.size() == 1);
	CHECK(doc.mcr_schedule[0].time == 130);
	REQUIRE(doc.rem_jobs.has_value());
	CHECK(doc.rem_jobs->front().remaining == 30);
	CHECK(doc.horizon == time_value(400));
}

TEST_CASE("round-trip through JSON is lossless")
{
	const auto doc = document_from_json(nlohmann::json::parse(example_json));
	const auto again = document_from_json(document_to_json(doc));
	REQUIRE(again.app.modes.size() == doc.app.modes.size());
	for (std::size_t k = 0; k < doc.app.modes.size(); k++) {
		REQUIRE(again.app.modes[k].tasks.size() ==
		        doc.app.modes[k].tasks.size());
		for (std::size_t t = 0; t < doc.app.modes[k].tasks.size(); t++) {
			CHECK(again.app.modes[k].tasks[t].wcet ==
			      doc.app.modes[k].tasks[t].wcet);
			CHECK(again.app.modes[k].tasks[t].deadline ==
			      doc.app.modes[k].tasks[t].deadline);
			CHECK(again.app.modes[k].tasks[t].period ==
			      doc.app.modes[k].tasks[t].period);
		}
		CHECK(again.app.modes[k].scheduler.kind ==
		      doc.app.modes[k].scheduler.kind);
		CHECK(again.app.modes[k].scheduler.ftp_order ==
		      doc.app.modes[k].scheduler.ftp_order);
	}
	CHECK(again.app.transition_deadlines == doc.app.transition_deadlines);
	CHECK(again.platform.speeds == doc.platform.speeds);
	CHECK(again.initial_mode == doc.initial_mode);
	CHECK(again.rem_jobs->size() == doc.rem_jobs->size());
	CHECK(again.horizon == doc.horizon);
}

TEST_CASE("floats and malformed schedulers are rejected")
{
	auto root = nlohmann::json::parse(example_json);
	root["platform"]["speeds"][0] = 1.5;
	CHECK_THROWS_AS(document_from_json(root), std::invalid_argument);

	root = nlohmann::json::parse(example_json);
	root["modes"][0]["scheduler"]["kind"] = "RM";
	CHECK_THROWS_AS(document_from_json(root), std::invalid_argument);

	root = nlohmann::json::parse(example_json);
	root["transition_deadlines"] = {{"0:1", {1, 2, 3}}};
	CHECK_THROWS_AS(document_from_json(root), std::invalid_argument);
}

TEST_CASE("FTP order defaults to declaration order")
{
	auto root = nlohmann::json::parse(example_json);
	root["modes"][0]["scheduler"].erase("order");
	const auto doc = document_from_json(root);
	CHECK(doc.app.modes[0].scheduler.ftp_order ==
	      std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("absent rem_jobs means the critical default, empty means none")
{
	auto root = nlohmann::json::parse(example_json);
	root.erase("rem_jobs");
	CHECK(!document_from_json(root).rem_jobs.has_value());
	root["rem_jobs"] = nlohmann::json::array();
	const auto doc = document_from_json(root);
	REQUIRE(doc.rem_jobs.has_value());
	CHECK(doc.rem_jobs->empty());
}
