#include "greenroute/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>

#include "greenroute/error.hpp"

namespace greenroute {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(Errc::invalid_instance, what); }

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return obj.at(key);
}

const json& require_array(const json& obj, const char* key) {
  const json& a = require(obj, key);
  if (!a.is_array()) fail(std::string("field \"") + key + "\" must be an array");
  return a;
}

double require_number(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number()) fail(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

std::string require_string(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_string()) fail(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

}  // namespace

StepCost step_cost_from_json(const json& doc) {
  std::vector<double> rates, costs;
  for (const json& r : require_array(doc, "rates")) {
    rates.push_back(require_number(r, "speed"));
    costs.push_back(require_number(r, "cost"));
  }
  StepCost cost(std::move(rates), std::move(costs));
  if (auto report = validate_step_cost(cost); !report.ok()) fail(report.summary());
  return cost;
}

Instance instance_from_json(const json& doc) {
  ValidationReport report;
  auto add = [&](std::string kind, std::string detail) {
    report.violations.push_back({std::move(kind), std::move(detail)});
  };

  std::vector<std::string> names;
  for (const json& n : require_array(doc, "nodes")) {
    if (!n.is_string()) fail("node identifiers must be strings");
    names.push_back(n.get<std::string>());
  }
  Network lookup(names, {});

  std::vector<Link> links;
  for (const json& e : require_array(doc, "edges")) {
    const json& id = require(e, "id");
    if (!id.is_number_integer() || id.get<std::int64_t>() < 0) fail("edge id must be a non-negative integer");
    std::string u = require_string(e, "u"), v = require_string(e, "v");
    auto ui = lookup.find(u), vi = lookup.find(v);
    if (!ui || !vi) {
      add("undeclared endpoint", "edge " + std::to_string(id.get<std::int64_t>()));
      continue;
    }
    links.push_back({static_cast<EdgeId>(id.get<std::int64_t>()), *ui, *vi});
  }
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) { return a.id < b.id; });

  std::vector<Demand> demands;
  for (const json& d : require_array(doc, "demands")) {
    std::string s = require_string(d, "src"), t = require_string(d, "dst");
    const json& amount = require(d, "amount");
    if (!amount.is_number_integer()) {
      add("non-integer amount", s + "->" + t);
      continue;
    }
    auto si = lookup.find(s), ti = lookup.find(t);
    if (!si || !ti) {
      add("unknown demand endpoint", s + "->" + t);
      continue;
    }
    demands.push_back({*si, *ti, amount.get<std::int64_t>()});
  }

  StepCost cost;
  {
    std::vector<double> rates, costs;
    for (const json& r : require_array(doc, "rates")) {
      rates.push_back(require_number(r, "speed"));
      costs.push_back(require_number(r, "cost"));
    }
    cost = StepCost(std::move(rates), std::move(costs));
  }

  Instance inst{Network(std::move(names), std::move(links)), std::move(demands), std::move(cost)};
  for (auto& v : validate_instance(inst.network, inst.demands, inst.cost).violations) {
    report.violations.push_back(std::move(v));
  }
  if (!report.ok()) fail(report.summary());
  return inst;
}

json to_json(const Instance& inst) {
  json doc;
  doc["nodes"] = json::array();
  for (const auto& n : inst.network.names()) doc["nodes"].push_back(n);
  doc["edges"] = json::array();
  for (const Link& l : inst.network.links()) {
    doc["edges"].push_back({{"id", l.id}, {"u", inst.network.name(l.u)}, {"v", inst.network.name(l.v)}});
  }
  doc["demands"] = json::array();
  for (const Demand& d : inst.demands) {
    doc["demands"].push_back({{"src", inst.network.name(d.source)},
                              {"dst", inst.network.name(d.sink)},
                              {"amount", d.amount}});
  }
  doc["rates"] = json::array();
  for (std::size_t i = 0; i < inst.cost.size(); ++i) {
    doc["rates"].push_back({{"speed", inst.cost.rate(i)}, {"cost", inst.cost.cost(i)}});
  }
  return doc;
}

json read_json_file(const std::string& path) {
  try {
    if (path == "-") return json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw Error(Errc::invalid_argument, "cannot open " + path);
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_instance, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace greenroute
