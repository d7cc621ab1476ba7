#ifndef CORAL_ALGA_CONFIG_HPP_
#define CORAL_ALGA_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "coral/errors.hpp"

namespace coral::alga {

struct BadConfig final : Error {
  using Error::Error;
};

enum class DropPolicy {
  kDropOldest,  // full queue evicts the oldest pending packet
  kBlock,       // full queue blocks the publisher until the writer drains
};

const char* to_string(DropPolicy policy);
DropPolicy drop_policy_from(const std::string& name);  // throws BadConfig

struct NodeConfig {
  std::string router_address = "127.0.0.1:7777";
  std::string node_name = "node";
  std::size_t outbound_queue_depth = 2;
  DropPolicy drop_policy = DropPolicy::kDropOldest;
  int connect_timeout_ms = 5000;
};

void validate(const NodeConfig& config);  // throws BadConfig

// Plain "key = value" lines; '#' starts a comment; blank lines ignored.
// Returns every key, so one file can feed several modules.
std::map<std::string, std::string> parse_key_values(std::istream& in);
std::map<std::string, std::string> load_key_values(const std::string& path);

// Node keys: router_address, node_name, queue_depth, drop_policy
// (drop_oldest | block). Keys meant for other modules are ignored.
NodeConfig node_config_from(const std::map<std::string, std::string>& kv,
                            NodeConfig defaults = {});
NodeConfig load_node_config(const std::string& path, NodeConfig defaults = {});

}  // namespace coral::alga

#endif  // CORAL_ALGA_CONFIG_HPP_
