#pragma once

// JSONL record formats shared by the CLI, the scoring service and tests.
//
// Dataset record (one per line):
//   {"instance_id":7,"task":"activity","seed":123,"hinted":true,
//    "rows":[{"id":1,"start":369,"finish":444},...],
//    "ground_truth_ids":[5,2,4],"ground_truth_answer":3,"prompt":"..."}
// LIS rows are {"id":1,"value":797}. Times are integer minutes since midnight.
//
// Response record (one per line):
//   {"instance_id":7,"sample_idx":0,"text":"..."}

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlvrseq/domain.hpp"

namespace rlvrseq {

using json = nlohmann::json;

struct DatasetRecord {
  std::int64_t instance_id = 0;
  Instance instance;
  GroundTruth truth;
  std::string prompt;
};

struct ResponseRecord {
  std::int64_t instance_id = 0;
  std::int64_t sample_idx = 0;
  std::string text;
};

json rows_to_json(const Instance& instance);
Instance instance_from_json(Task task, const json& rows, std::uint64_t seed, bool hinted);

json to_json(const DatasetRecord& record);
DatasetRecord dataset_record_from_json(const json& j);

/// Single-line serialization (no trailing newline).
std::string to_jsonl_line(const DatasetRecord& record);

json to_json(const ResponseRecord& record);
ResponseRecord response_record_from_json(const json& j);

/// Reads a JSONL stream. Blank lines are skipped; a malformed line throws
/// DomainError naming the 1-based line number.
std::vector<DatasetRecord> read_dataset(std::istream& in);
std::vector<DatasetRecord> read_dataset_file(const std::string& path);
std::vector<ResponseRecord> read_responses(std::istream& in);
std::vector<ResponseRecord> read_responses_file(const std::string& path);

}  // namespace rlvrseq
