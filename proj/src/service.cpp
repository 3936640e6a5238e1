#include "rlvrseq/service.hpp"

#include <cerrno>
#include <cstring>
#include <istream>
#include <ostream>
#include <regex>
#include <system_error>
#include <thread>
#include <vector>

#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "rlvrseq/records.hpp"

namespace rlvrseq {

nlohmann::json to_json(const RewardSpec& spec) {
  nlohmann::json components = nlohmann::json::array();
  for (const auto& c : spec.components) {
    components.push_back({{"kind", std::string(to_string(c.kind))}, {"weight", c.weight}});
  }
  return {{"components", components}, {"lambda", spec.lambda}, {"gamma", spec.gamma}};
}

RewardSpec reward_spec_from_json(const nlohmann::json& j, const RewardSpec& defaults) {
  RewardSpec spec = defaults;
  try {
    if (!j.is_object()) throw ConfigError("reward_spec must be an object");
    if (j.contains("components")) {
      spec.components.clear();
      for (const auto& c : j.at("components")) {
        RewardComponent comp;
        comp.kind = parse_reward_kind(c.at("kind").get<std::string>());
        comp.weight = c.contains("weight") ? c.at("weight").get<double>() : 1.0;
        spec.components.push_back(comp);
      }
    }
    if (j.contains("lambda")) spec.lambda = j.at("lambda").get<double>();
    if (j.contains("gamma")) spec.gamma = j.at("gamma").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad reward_spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

RewardSpec parse_reward_spec_arg(std::string_view arg) {
  RewardSpec spec;
  std::size_t pos = 0;
  while (pos <= arg.size()) {
    const std::size_t comma = std::min(arg.find(',', pos), arg.size());
    const std::string_view item = arg.substr(pos, comma - pos);
    if (item.empty()) throw ConfigError("empty reward component in '" + std::string(arg) + "'");
    RewardComponent comp;
    const std::size_t eq = item.find('=');
    comp.kind = parse_reward_kind(item.substr(0, eq));
    if (eq != std::string_view::npos) {
      const std::string w(item.substr(eq + 1));
      std::size_t used = 0;
      try {
        comp.weight = std::stod(w, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (w.empty() || used != w.size()) throw ConfigError("bad reward weight '" + w + "'");
    }
    spec.components.push_back(comp);
    pos = comma + 1;
  }
  spec.validate();
  return spec;
}

nlohmann::json to_json(const RewardBreakdown& breakdown) {
  nlohmann::json components = nlohmann::json::array();
  for (const auto& c : breakdown.per_component) {
    components.push_back(
        {{"kind", std::string(to_string(c.kind))}, {"raw", c.raw}, {"weight", c.weight}});
  }
  return {{"total", breakdown.total},
          {"per_component", components},
          {"parse_status", std::string(to_string(breakdown.parse_status))}};
}

namespace {

nlohmann::json recover_request_id(std::string_view line) {
  static const std::regex pattern(R"re("request_id"\s*:\s*("(?:[^"\\]|\\.)*"|-?[0-9]+))re");
  std::match_results<std::string_view::const_iterator> m;
  if (std::regex_search(line.begin(), line.end(), m, pattern)) {
    auto id = nlohmann::json::parse(m[1].first, m[1].second, nullptr, false);
    if (!id.is_discarded()) return id;
  }
  return nullptr;
}

std::string error_line(const nlohmann::json& request_id, const std::string& message) {
  return nlohmann::json{{"request_id", request_id}, {"error", message}}.dump(
      -1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace

std::string handle_request_line(std::string_view line, const ServiceOptions& options,
                                ServiceCounters* counters) {
  if (counters) ++counters->requests;
  nlohmann::json request_id = nullptr;
  try {
    const auto req = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
    if (req.is_discarded()) {
      request_id = recover_request_id(line);
      throw DomainError("malformed JSON");
    }
    if (!req.is_object()) throw DomainError("request must be a JSON object");
    if (req.contains("request_id")) request_id = req.at("request_id");

    const Task task = parse_task(req.at("task").get<std::string>());
    const Instance instance = instance_from_json(task, req.at("instance").at("rows"), 0, false);
    GroundTruth truth;
    truth.ids = req.at("ground_truth").at("ids").get<IdSequence>();
    truth.answer = req.at("ground_truth").at("answer").get<std::int64_t>();
    const std::string text = req.at("response_text").get<std::string>();
    const RewardSpec spec = req.contains("reward_spec")
                                ? reward_spec_from_json(req.at("reward_spec"), options.default_spec)
                                : options.default_spec;

    nlohmann::json resp = to_json(score(text, instance, truth, spec));
    resp["request_id"] = request_id;
    return resp.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  } catch (const std::exception& e) {
    if (counters) ++counters->errors;
    return error_line(request_id, e.what());
  }
}

bool serve_stream(std::istream& in, std::ostream& out, const ServiceOptions& options,
                  ServiceCounters* counters) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out << handle_request_line(line, options, counters) << '\n';
    out.flush();
    if (!out) return false;
  }
  return true;
}

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  throw std::system_error(errno, std::generic_category(), what);
}

bool send_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

void serve_connection(int fd, const ServiceOptions& options, const std::atomic<bool>& stop,
                      ServiceCounters* counters) {
  std::string buffer;
  char chunk[8192];
  while (!stop.load()) {
    pollfd pfd{fd, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 100);
    if (ready < 0 && errno != EINTR) break;
    if (ready <= 0) continue;
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));

    std::string replies;
    std::size_t start = 0;
    for (std::size_t nl; (nl = buffer.find('\n', start)) != std::string::npos; start = nl + 1) {
      std::string_view line(buffer.data() + start, nl - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
      replies += handle_request_line(line, options, counters);
      replies += '\n';
    }
    buffer.erase(0, start);
    if (!replies.empty() && !send_all(fd, replies)) break;
  }
  ::close(fd);
}

}  // namespace

void serve_tcp(const std::string& host, std::uint16_t port, const ServiceOptions& options,
               const std::atomic<bool>& stop, ServiceCounters* counters,
               const std::function<void(std::uint16_t)>& on_bound) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res);
      rc != 0) {
    throw std::system_error(std::make_error_code(std::errc::address_not_available),
                            "resolve " + host + ": " + ::gai_strerror(rc));
  }
  int listener = -1;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    listener = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (listener < 0) continue;
    int one = 1;
    ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(listener, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(listener, 64) == 0) break;
    ::close(listener);
    listener = -1;
  }
  ::freeaddrinfo(res);
  if (listener < 0) throw_errno("bind " + host + ":" + service);

  sockaddr_storage bound{};
  socklen_t len = sizeof bound;
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&bound), &len);
  const std::uint16_t bound_port =
      ntohs(bound.ss_family == AF_INET6 ? reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port
                                        : reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
  if (on_bound) on_bound(bound_port);

  std::vector<std::thread> workers;
  while (!stop.load()) {
    pollfd pfd{listener, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 100);
    if (ready < 0) {
      if (errno == EINTR) continue;
      const int saved = errno;
      ::close(listener);
      for (auto& w : workers) w.join();
      throw std::system_error(saved, std::generic_category(), "poll");
    }
    if (ready == 0) continue;
    const int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) continue;
    workers.emplace_back(serve_connection, fd, std::cref(options), std::cref(stop), counters);
  }
  ::close(listener);
  for (auto& w : workers) w.join();
}

}  // namespace rlvrseq
