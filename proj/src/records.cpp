#include "rlvrseq/records.hpp"

#include <fstream>
#include <istream>

namespace rlvrseq {

json rows_to_json(const Instance& instance) {
  json rows = json::array();
  if (const auto* act = std::get_if<ActivityInstance>(&instance)) {
    for (const auto& a : act->activities) {
      rows.push_back({{"id", a.id}, {"start", a.start}, {"finish", a.finish}});
    }
  } else {
    for (const auto& r : std::get<LisInstance>(instance).rows) {
      rows.push_back({{"id", r.id}, {"value", r.value}});
    }
  }
  return rows;
}

Instance instance_from_json(Task task, const json& rows, std::uint64_t seed, bool hinted) {
  if (!rows.is_array()) throw DomainError("rows must be an array");
  if (task == Task::activity) {
    ActivityInstance inst;
    inst.seed = seed;
    inst.hinted = hinted;
    for (const auto& r : rows) {
      inst.activities.push_back(
          {r.at("id").get<RowId>(), r.at("start").get<int>(), r.at("finish").get<int>()});
    }
    check_invariants(inst);
    return inst;
  }
  LisInstance inst;
  inst.seed = seed;
  inst.hinted = hinted;
  for (const auto& r : rows) inst.rows.push_back({r.at("id").get<RowId>(), r.at("value").get<int>()});
  check_invariants(inst);
  return inst;
}

json to_json(const DatasetRecord& record) {
  // Key order is irrelevant to nlohmann::json (sorted map), so output is canonical.
  return json{{"instance_id", record.instance_id},
              {"task", std::string(to_string(task_of(record.instance)))},
              {"seed", seed_of(record.instance)},
              {"hinted", is_hinted(record.instance)},
              {"rows", rows_to_json(record.instance)},
              {"ground_truth_ids", record.truth.ids},
              {"ground_truth_answer", record.truth.answer},
              {"prompt", record.prompt}};
}

DatasetRecord dataset_record_from_json(const json& j) {
  try {
    DatasetRecord rec;
    rec.instance_id = j.at("instance_id").get<std::int64_t>();
    const Task task = parse_task(j.at("task").get<std::string>());
    rec.instance = instance_from_json(task, j.at("rows"), j.at("seed").get<std::uint64_t>(),
                                      j.at("hinted").get<bool>());
    rec.truth.ids = j.at("ground_truth_ids").get<IdSequence>();
    rec.truth.answer = j.at("ground_truth_answer").get<std::int64_t>();
    rec.prompt = j.at("prompt").get<std::string>();
    return rec;
  } catch (const json::exception& e) {
    throw DomainError(std::string("bad dataset record: ") + e.what());
  } catch (const ConfigError& e) {
    throw DomainError(std::string("bad dataset record: ") + e.what());
  }
}

std::string to_jsonl_line(const DatasetRecord& record) { return to_json(record).dump(); }

json to_json(const ResponseRecord& record) {
  return json{{"instance_id", record.instance_id},
              {"sample_idx", record.sample_idx},
              {"text", record.text}};
}

ResponseRecord response_record_from_json(const json& j) {
  try {
    ResponseRecord rec;
    rec.instance_id = j.at("instance_id").get<std::int64_t>();
    rec.sample_idx = j.value("sample_idx", std::int64_t{0});
    rec.text = j.at("text").get<std::string>();
    return rec;
  } catch (const json::exception& e) {
    throw DomainError(std::string("bad response record: ") + e.what());
  }
}

namespace {

template <class Record, class Decode>
std::vector<Record> read_jsonl(std::istream& in, Decode decode) {
  std::vector<Record> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(decode(json::parse(line)));
    } catch (const std::exception& e) {
      throw DomainError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

}  // namespace

std::vector<DatasetRecord> read_dataset(std::istream& in) {
  return read_jsonl<DatasetRecord>(in, dataset_record_from_json);
}

std::vector<DatasetRecord> read_dataset_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_dataset(in);
}

std::vector<ResponseRecord> read_responses(std::istream& in) {
  return read_jsonl<ResponseRecord>(in, response_record_from_json);
}

std::vector<ResponseRecord> read_responses_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_responses(in);
}

}  // namespace rlvrseq
