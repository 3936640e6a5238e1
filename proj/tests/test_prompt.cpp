#include <doctest.h>

#include <utility>
#include <vector>

#include "oracles.hpp"
#include "rlvrseq/prompt.hpp"

using namespace rlvrseq;

namespace {

const std::vector<std::pair<int, int>> kExampleActivity = {
    {369, 444}, {433, 503}, {449, 568}, {504, 618}, {288, 374}};
const std::vector<int> kExampleLis = {797, 476, 335, 452, 606};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

TEST_CASE("clock formatting") {
  CHECK(format_time(0) == "00:00");
  CHECK(format_time(369) == "06:09");
  CHECK(format_time(618) == "10:18");
  CHECK(format_time(1439) == "23:59");
  CHECK_THROWS_AS(format_time(1440), DomainError);
  CHECK_THROWS_AS(format_time(-1), DomainError);
}

TEST_CASE("tables") {
  CHECK(render_table(make_activity_instance(kExampleActivity)) ==
        "ID Start End\n1 06:09 07:24\n2 07:13 08:23\n3 07:29 09:28\n4 08:24 10:18\n5 04:48 06:14\n");
  CHECK(render_table(make_lis_instance(kExampleLis)) ==
        "ID Value\n1 797\n2 476\n3 335\n4 452\n5 606\n");
}

TEST_CASE("prompts match the golden files") {
  const Instance act = make_activity_instance(kExampleActivity);
  const Instance lis = make_lis_instance(kExampleLis);
  CHECK(render_prompt(act, {Task::activity, true}) ==
        oracle::read_file(oracle::data_path("golden/activity_hinted.txt")));
  CHECK(render_prompt(act, {Task::activity, false}) ==
        oracle::read_file(oracle::data_path("golden/activity_unhinted.txt")));
  CHECK(render_prompt(lis, {Task::lis, true}) ==
        oracle::read_file(oracle::data_path("golden/lis_hinted.txt")));
  CHECK(render_prompt(lis, {Task::lis, false}) ==
        oracle::read_file(oracle::data_path("golden/lis_unhinted.txt")));
}

TEST_CASE("hinted and unhinted prompts differ by exactly the hint line") {
  for (const Instance& inst : {Instance(make_activity_instance(kExampleActivity)),
                               Instance(make_lis_instance(kExampleLis))}) {
    const Task task = task_of(inst);
    const std::string hinted = render_prompt(inst, {task, true});
    const std::string plain = render_prompt(inst, {task, false});
    const auto at = hinted.find("Hint: ");
    REQUIRE(at != std::string::npos);
    const auto eol = hinted.find('\n', at);
    CHECK(hinted.substr(0, at) + hinted.substr(eol + 1) == plain);
    CHECK(plain.find("Hint") == std::string::npos);
    CHECK(ends_with(plain, "- No spaces inside \\ids{...}. Example: \\ids{3,9,12}\n"));
  }
}

TEST_CASE("prompt content") {
  const std::string p = render_prompt(make_activity_instance(kExampleActivity, 0, true));
  CHECK(p.find("1 06:09 07:24") != std::string::npos);
  CHECK(p.find("Hint: Sort the rows by increasing end time, then greedily pick compatible rows.") !=
        std::string::npos);
  CHECK(p.find("an activity ending at time T is compatible with one starting at T") !=
        std::string::npos);
  CHECK(p.find("  2. \\answer{<number of chosen rows>}") != std::string::npos);
  CHECK_THROWS_AS(render_prompt(make_lis_instance(kExampleLis), {Task::activity, false}), DomainError);
}

TEST_CASE("template expansion") {
  CHECK(expand_template("a {{x}} b", {{"x", "1"}}, {}) == "a 1 b");
  CHECK(expand_template("a\n{{#f}}\nyes\n{{/f}}\nz", {}, {{"f", true}}) == "a\nyes\nz");
  CHECK(expand_template("a\n{{#f}}\nyes\n{{/f}}\nz", {}, {{"f", false}}) == "a\nz");
  CHECK(expand_template("{{#f}}{{#g}}x{{/g}}y{{/f}}", {}, {{"f", false}, {"g", true}}) == "");
  CHECK(expand_template("{{#f}}{{#g}}x{{/g}}y{{/f}}", {}, {{"f", true}, {"g", false}}) == "y");
  CHECK_THROWS_AS(expand_template("{{missing}}", {}, {}), DomainError);
  CHECK_THROWS_AS(expand_template("{{open", {}, {}), DomainError);
}
