#pragma once

// Command-line front end: descriptor documents, commands, reports.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "puiseux/monoid.hpp"

namespace puiseux::cli {

enum class Verb {
  classify,
  generators,
  decompose,
  member,
  divides,
  factorize,
  lengths,
  zlength,
  atoms,
  chain
};

std::string to_string(Verb v);
std::optional<Verb> verb_from_string(std::string_view name);

enum class Status { ok, not_member, unknown, unsupported, error };

std::string to_string(Status s);
/// 0 ok, 2 not_member/unknown, 3 unsupported, 1 error.
int exit_code(Status s);

struct Bounds {
  unsigned long max_length = 20;
  Index max_index = 50;
  std::size_t max_steps = 16;
  Integer max_coeff = 1'000'000;
  std::size_t max_nodes = 2'000'000;
};

/// Parses a descriptor document. Throws std::invalid_argument naming the
/// offending field.
MonoidDescriptor parse_descriptor(std::string_view text);
MonoidDescriptor parse_descriptor(const nlohmann::json& doc);
nlohmann::json descriptor_to_json(const MonoidDescriptor& desc);

struct Command {
  Verb verb = Verb::classify;
  std::optional<MonoidDescriptor> descriptor;
  std::vector<std::string> values;  // rational literals, validated by run()
  std::optional<unsigned long> length;  // zlength
  std::optional<unsigned long> up_to;   // lengths
  std::size_t count = 10;               // generators, atoms
  std::optional<Index> index;           // atoms
  bool json = false;
  Bounds bounds;
};

struct Report {
  Verb verb = Verb::classify;
  Status status = Status::ok;
  nlohmann::json descriptor;
  nlohmann::json input = nlohmann::json::object();
  nlohmann::json result = nlohmann::json::object();
  std::vector<std::string> notes;
  Bounds bounds;
  std::string error;
};

Report run(const Command& cmd);

nlohmann::json to_json(const Report& report);
std::string render_table(const Report& report);
/// One document, pretty-printed with a trailing newline.
std::string render_json(const Report& report);

struct Invocation {
  int exit_code = 0;
  std::string out;
  std::string err;
};

/// Full pipeline on argv-style arguments (without the program name).
Invocation invoke(const std::vector<std::string>& args);

}  // namespace puiseux::cli
