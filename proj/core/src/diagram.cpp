#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "topcap/error.hpp"
#include "topcap/persistence.hpp"
#include "topcap/text_util.hpp"

namespace topcap {

void PersistenceDiagram::canonicalize() { std::sort(points.begin(), points.end()); }

std::optional<MaxPersistence> max_persistence(const PersistenceDiagram& diagram) {
  std::optional<PersistencePair> best;
  for (const auto& p : diagram.points) {
    if (std::isinf(p.death))
      throw InvalidArgument("max_persistence: diagram contains an infinite death");
    if (!best || p.lifetime() > best->lifetime() ||
        (p.lifetime() == best->lifetime() && p < *best))
      best = p;
  }
  if (!best) return std::nullopt;
  return MaxPersistence{best->birth, best->lifetime()};
}

namespace {

nlohmann::json to_json(const PersistenceDiagram& diagram) {
  PersistenceDiagram sorted = diagram;
  sorted.canonicalize();
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : sorted.points) {
    nlohmann::json death = std::isinf(p.death) ? nlohmann::json("inf") : nlohmann::json(p.death);
    points.push_back(nlohmann::json::array({p.birth, death}));
  }
  return nlohmann::json{{"dim", sorted.dim}, {"points", points}};
}

PersistenceDiagram from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("points"))
    throw InvalidArgument("diagram JSON needs 'dim' and 'points'");
  PersistenceDiagram d;
  d.dim = j.at("dim").get<int>();
  for (const auto& p : j.at("points")) {
    if (!p.is_array() || p.size() != 2) throw InvalidArgument("diagram point must be [birth, death]");
    auto value = [](const nlohmann::json& v) {
      if (v.is_string()) return parse_double(v.get<std::string>());
      return v.get<double>();
    };
    PersistencePair pair{value(p[0]), value(p[1])};
    if (!(pair.birth <= pair.death)) throw InvalidArgument("diagram point has death before birth");
    d.points.push_back(pair);
  }
  d.canonicalize();
  return d;
}

}  // namespace

std::string format_diagram_json(const PersistenceDiagram& diagram) {
  return to_json(diagram).dump() + "\n";
}

std::string format_diagrams_json(std::span<const PersistenceDiagram> diagrams) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : diagrams) arr.push_back(to_json(d));
  return arr.dump() + "\n";
}

std::vector<PersistenceDiagram> parse_diagrams_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("diagram JSON: ") + e.what());
  }
  std::vector<PersistenceDiagram> out;
  try {
    if (j.is_array()) {
      for (const auto& d : j) out.push_back(from_json(d));
    } else {
      out.push_back(from_json(j));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("diagram JSON: ") + e.what());
  }
  return out;
}

std::string format_diagrams_csv(std::span<const PersistenceDiagram> diagrams) {
  std::string out = "dim,birth,death\n";
  for (const auto& d : diagrams) {
    PersistenceDiagram sorted = d;
    sorted.canonicalize();
    for (const auto& p : sorted.points)
      out += std::to_string(d.dim) + "," + format_double(p.birth) + "," + format_double(p.death) + "\n";
  }
  return out;
}

std::vector<PersistenceDiagram> parse_diagrams_csv(const std::string& text) {
  std::vector<PersistenceDiagram> out;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || (line_no == 1 && line == "dim,birth,death")) continue;
    const auto f = split(line, ',');
    if (f.size() != 3) throw InvalidArgument("diagram CSV line " + std::to_string(line_no));
    const int dim = static_cast<int>(parse_int(f[0]));
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& d) { return d.dim == dim; });
    if (it == out.end()) {
      out.push_back({dim, {}});
      it = out.end() - 1;
    }
    it->points.push_back({parse_double(f[1]), parse_double(f[2])});
  }
  for (auto& d : out) d.canonicalize();
  return out;
}

}  // namespace topcap
