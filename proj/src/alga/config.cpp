#include "coral/alga/config.hpp"

#include <fstream>
#include <sstream>

namespace coral::alga {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

const char* to_string(DropPolicy policy) {
  return policy == DropPolicy::kDropOldest ? "drop_oldest" : "block";
}

DropPolicy drop_policy_from(const std::string& name) {
  if (name == "drop_oldest") return DropPolicy::kDropOldest;
  if (name == "block") return DropPolicy::kBlock;
  throw BadConfig("drop_policy must be \"drop_oldest\" or \"block\", got \"" +
                  name + '"');
}

void validate(const NodeConfig& config) {
  if (config.outbound_queue_depth < 1) {
    throw BadConfig("queue_depth must be at least 1");
  }
  if (config.node_name.empty() || config.node_name.size() > 255) {
    throw BadConfig("node_name must be 1..255 bytes");
  }
  if (config.router_address.find(':') == std::string::npos) {
    throw BadConfig("router_address must be host:port");
  }
  if (config.connect_timeout_ms < 0) {
    throw BadConfig("connect timeout must not be negative");
  }
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw BadConfig("line " + std::to_string(line_no) +
                      ": expected key = value, got \"" + stripped + '"');
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw BadConfig("line " + std::to_string(line_no) + ": empty key");
    }
    kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadConfig("cannot open " + path);
  return parse_key_values(in);
}

NodeConfig node_config_from(const std::map<std::string, std::string>& kv,
                            NodeConfig defaults) {
  NodeConfig config = defaults;
  if (const auto it = kv.find("router_address"); it != kv.end()) {
    config.router_address = it->second;
  }
  if (const auto it = kv.find("node_name"); it != kv.end()) {
    config.node_name = it->second;
  }
  if (const auto it = kv.find("queue_depth"); it != kv.end()) {
    try {
      std::size_t used = 0;
      const long depth = std::stol(it->second, &used);
      if (used != it->second.size() || depth < 1) {
        throw BadConfig("queue_depth must be a positive integer, got \"" +
                        it->second + '"');
      }
      config.outbound_queue_depth = static_cast<std::size_t>(depth);
    } catch (const BadConfig&) {
      throw;
    } catch (const std::exception&) {
      throw BadConfig("queue_depth must be a positive integer, got \"" +
                      it->second + '"');
    }
  }
  if (const auto it = kv.find("drop_policy"); it != kv.end()) {
    config.drop_policy = drop_policy_from(it->second);
  }
  validate(config);
  return config;
}

NodeConfig load_node_config(const std::string& path, NodeConfig defaults) {
  return node_config_from(load_key_values(path), std::move(defaults));
}

}  // namespace coral::alga
