#pragma once

// Line-delimited JSON scoring service. Each request line is scored with the
// same score() used offline; the service adds only framing and error handling.
//
// Request:  {"request_id": ..., "task": "activity"|"lis",
//            "instance": {"rows": [...]},
//            "ground_truth": {"ids": [...], "answer": n},
//            "response_text": "...",
//            "reward_spec": {"components": [{"kind": "ids_prefix", "weight": 1}],
//                            "lambda": 0.1, "gamma": 0.1}}          (optional)
// Response: {"request_id": ..., "total": x,
//            "per_component": [{"kind": ..., "raw": x, "weight": w}],
//            "parse_status": "ok"|"no_answer"|"no_ids"|"no_both"}
//       or  {"request_id": ... or null, "error": "..."}

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rlvrseq/domain.hpp"
#include "rlvrseq/rewards.hpp"

namespace rlvrseq {

nlohmann::json to_json(const RewardSpec& spec);

/// Missing keys keep the values of `defaults`. Throws ConfigError.
RewardSpec reward_spec_from_json(const nlohmann::json& j, const RewardSpec& defaults);

/// Parses "ids_prefix" or "ans=0.5,ids_exact=0.5". Throws ConfigError.
RewardSpec parse_reward_spec_arg(std::string_view arg);

struct ServiceCounters {
  std::atomic<std::uint64_t> requests{0};
  std::atomic<std::uint64_t> errors{0};
};

struct ServiceOptions {
  RewardSpec default_spec = RewardSpec::single(RewardKind::ans);
};

nlohmann::json to_json(const RewardBreakdown& breakdown);

/// Scores one request line and returns the response line (no trailing newline).
/// Never throws for bad input; returns an error object instead.
std::string handle_request_line(std::string_view line, const ServiceOptions& options,
                                ServiceCounters* counters = nullptr);

/// Serves requests from `in` until EOF. Blank lines are ignored.
/// Returns false if the output stream fails.
bool serve_stream(std::istream& in, std::ostream& out, const ServiceOptions& options,
                  ServiceCounters* counters = nullptr);

/// Listens on host:port (port 0 picks a free one, reported through on_bound)
/// and serves each connection on its own thread until `stop` becomes true.
/// Throws std::system_error when the socket cannot be set up.
void serve_tcp(const std::string& host, std::uint16_t port, const ServiceOptions& options,
               const std::atomic<bool>& stop, ServiceCounters* counters = nullptr,
               const std::function<void(std::uint16_t)>& on_bound = {});

}  // namespace rlvrseq
