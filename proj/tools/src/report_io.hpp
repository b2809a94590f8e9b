#pragma once

#include "newtonflux/boundary.hpp"
#include "newtonflux/flux.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace newtonflux::io {

inline constexpr const char* kSchema = "newtonflux/1";

using Json = nlohmann::ordered_json;

/// Non-finite values become null.
Json number(double v);

Json to_json(const FluxReport& rep);
Json to_json(const HrEstimate& est);
Json to_json(const VolumeBound& vb);
Json to_json(const TransversalityReport& tr);

/// Minimal RFC 4180 writer: fields containing separators or quotes are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void header(const std::vector<std::string>& columns);
  CsvWriter& field(const std::string& text);
  CsvWriter& field(double v);  // shortest round-trip decimal; empty when non-finite
  CsvWriter& field(int v);
  void end_row();

 private:
  std::ostream& out_;
  bool first_ = true;
};

std::string join_orders(const std::vector<int>& orders);

}  // namespace newtonflux::io
