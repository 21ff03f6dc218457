#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "classc/errors.hpp"
#include "classc/graph.hpp"

namespace classc {

/// %.17g rendering: round-trips doubles exactly and satisfies the >= 15
/// significant digit requirement of the graph document format.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Graph document writer. Channel indices are 1-based in the document.
inline std::string serialize(const NetworkGraph& g) {
  std::string out;
  out += "{\n  \"nodes\": [\n";
  for (std::size_t k = 0; k < g.nodes().size(); ++k) {
    const Node& n = g.nodes()[k];
    out += "    {\"id\": " + std::to_string(n.id) + ", \"S\": [";
    for (int r = 0; r < n.scattering.rows(); ++r) {
      out += r ? ", [" : "[";
      for (int c = 0; c < n.scattering.cols(); ++c) {
        if (c) out += ", ";
        out += format_double(n.scattering(r, c));
      }
      out += "]";
    }
    out += "]}";
    if (k + 1 < g.nodes().size()) out += ",";
    out += "\n";
  }
  out += "  ],\n  \"edges\": [\n";
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    const Edge& e = g.edges()[k];
    out += "    {\"id\": " + std::to_string(e.id);
    if (e.source)
      out += ", \"from\": [" + std::to_string(e.source->node) + ", " +
             std::to_string(e.source->channel) + "]";
    if (e.target)
      out += ", \"to\": [" + std::to_string(e.target->node) + ", " +
             std::to_string(e.target->channel) + "]";
    out += "}";
    if (k + 1 < g.edges().size()) out += ",";
    out += "\n";
  }
  auto id_list = [](const std::vector<int>& ids) {
    std::string s = "[";
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (k) s += ", ";
      s += std::to_string(ids[k]);
    }
    return s + "]";
  };
  out += "  ],\n  \"leads_in\": " + id_list(g.leads_in()) +
         ",\n  \"leads_out\": " + id_list(g.leads_out()) + "\n}\n";
  return out;
}

namespace detail {

inline int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k)
    if (text[k] == '\n') ++line;
  return line;
}

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* key,
                                           const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError("missing field \"" + std::string(key) + "\"", -1, where);
  return *it;
}

}  // namespace detail

/// Graph document reader. Enforces the structural coherence of the document
/// (unique ids, square matrices, endpoints in range, lead lists consistent);
/// invariants such as orthogonality are validate()'s business.
inline NetworkGraph parse_graph(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON syntax: ") + e.what(),
                     detail::line_of_byte(text, e.byte), "");
  }
  if (!doc.is_object()) throw ParseError("top level must be an object");

  std::vector<Node> nodes;
  for (const auto& jn : detail::require_field(doc, "nodes", "nodes")) {
    const std::string where = "nodes[" + std::to_string(nodes.size()) + "]";
    Node n;
    const auto& jid = detail::require_field(jn, "id", where);
    if (!jid.is_number_integer()) throw ParseError("node id must be an integer", -1, where);
    n.id = jid.get<int>();
    const auto& js = detail::require_field(jn, "S", where);
    if (!js.is_array() || js.empty()) throw ParseError("matrix dim mismatch", -1, where + ".S");
    const std::size_t dim = js.size();
    n.scattering.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
      if (!js[r].is_array() || js[r].size() != dim)
        throw ParseError("matrix dim mismatch", -1, where + ".S");
      for (std::size_t c = 0; c < dim; ++c) {
        if (!js[r][c].is_number()) throw ParseError("matrix entry must be a number", -1, where + ".S");
        n.scattering(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            js[r][c].get<double>();
      }
    }
    nodes.push_back(std::move(n));
  }

  auto parse_endpoint = [](const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
      throw ParseError("endpoint must be [node, channel]", -1, where);
    return EdgeEndpoint{j[0].get<int>(), j[1].get<int>()};
  };

  std::vector<Edge> edges;
  for (const auto& je : detail::require_field(doc, "edges", "edges")) {
    const std::string where = "edges[" + std::to_string(edges.size()) + "]";
    Edge e;
    const auto& jid = detail::require_field(je, "id", where);
    if (!jid.is_number_integer()) throw ParseError("edge id must be an integer", -1, where);
    e.id = jid.get<int>();
    if (je.contains("from")) e.source = parse_endpoint(je["from"], where + ".from");
    if (je.contains("to")) e.target = parse_endpoint(je["to"], where + ".to");
    if (!e.source && !e.target) throw ParseError("edge needs at least one endpoint", -1, where);
    edges.push_back(e);
  }

  NetworkGraph g;
  try {
    g = NetworkGraph::build(std::move(nodes), std::move(edges));
  } catch (const ParamError& e) {
    throw ParseError(std::string("duplicate id: ") + e.what());
  }

  // endpoints must resolve inside the document
  for (const Edge& e : g.edges()) {
    const std::string where = "edge " + std::to_string(e.id);
    for (const bool incoming : {false, true}) {
      const auto& ep = incoming ? e.target : e.source;
      if (!ep) continue;
      if (!g.has_node(ep->node))
        throw ParseError("unknown node " + std::to_string(ep->node), -1, where);
      const int deg = g.node(ep->node).degree();
      if (ep->channel < 1 || ep->channel > deg)
        throw ParseError("matrix dim mismatch: channel " + std::to_string(ep->channel) +
                             " exceeds degree " + std::to_string(deg) + " of node " +
                             std::to_string(ep->node),
                         -1, where);
    }
  }

  auto check_leads = [&](const char* key, const std::vector<int>& derived) {
    const auto it = doc.find(key);
    if (it == doc.end()) return;  // lists are derivable; omission is accepted
    std::vector<int> declared;
    for (const auto& v : *it) {
      if (!v.is_number_integer()) throw ParseError("lead list entries must be edge ids", -1, key);
      declared.push_back(v.get<int>());
    }
    std::sort(declared.begin(), declared.end());
    if (declared != derived)
      throw ParseError("lead list mismatch with edge endpoints", -1, key);
  };
  check_leads("leads_in", g.leads_in());
  check_leads("leads_out", g.leads_out());
  return g;
}

}  // namespace classc
