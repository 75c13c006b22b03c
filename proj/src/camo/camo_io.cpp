#include "bcamo/camo_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bcamo {

using nlohmann::json;

namespace {

NetId net_by_name(const Netlist& n, const std::string& name) {
  auto id = n.find_net(name);
  if (!id) throw std::runtime_error("camouflage sidecar references unknown net '" + name + "'");
  return *id;
}

GateId gate_by_name(const Netlist& n, const std::string& name) {
  auto id = n.find_gate(name);
  if (!id) throw std::runtime_error("camouflage sidecar references unknown gate '" + name + "'");
  return *id;
}

CandidateRole role_from_string(const std::string& s) {
  for (auto r : {CandidateRole::Real, CandidateRole::Dummy, CandidateRole::Const0, CandidateRole::Const1}) {
    if (to_string(r) == s) return r;
  }
  throw std::runtime_error("unknown candidate role '" + s + "'");
}

}  // namespace

std::string target_set_to_json(const TargetSet& t) {
  json j;
  j["benchmark"] = t.benchmark;
  j["scale"] = t.scale;
  j["seed"] = t.seed;
  j["gates"] = t.gates;
  return j.dump(2) + "\n";
}

TargetSet target_set_from_json(const std::string& text) {
  json j = json::parse(text);
  TargetSet t;
  t.benchmark = j.at("benchmark").get<std::string>();
  t.scale = j.at("scale").get<double>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.gates = j.at("gates").get<std::vector<std::string>>();
  return t;
}

void save_target_set(const std::filesystem::path& path, const TargetSet& t) {
  write_text_file(path, target_set_to_json(t));
}

TargetSet load_target_set(const std::filesystem::path& path) { return target_set_from_json(read_text_file(path)); }

std::string camo_public_json(const CamoNetlist& c) {
  const Netlist& n = c.base;
  json j;
  j["scheme"] = c.scheme.to_string();
  j["scale"] = c.scale;
  j["seed"] = c.seed;
  json pins = json::array();
  for (const PinChoice& pc : c.pin_choices) {
    json cands = json::array();
    for (const Candidate& cand : pc.candidates) cands.push_back(n.net(cand.net).name);
    pins.push_back({{"gate", std::string(n.gate_name(pc.gate))}, {"pin", pc.pin}, {"candidates", cands}});
  }
  j["pins"] = pins;
  json funcs = json::array();
  for (const FunctionChoice& fc : c.function_choices) {
    funcs.push_back({{"gate", std::string(n.gate_name(fc.gate))}, {"functions", fc.functions}});
  }
  j["functions"] = funcs;
  j["log"] = c.log;
  return j.dump(2) + "\n";
}

std::string camo_secret_json(const CamoNetlist& c) {
  json j;
  j["SECRET"] = true;
  j["scheme"] = c.scheme.to_string();
  j["seed"] = c.seed;
  json pins = json::array();
  for (const PinChoice& pc : c.pin_choices) {
    json roles = json::array();
    for (const Candidate& cand : pc.candidates) roles.push_back(std::string(to_string(cand.role)));
    pins.push_back({{"true_index", pc.true_index}, {"roles", roles}});
  }
  j["pins"] = pins;
  json funcs = json::array();
  for (const FunctionChoice& fc : c.function_choices) funcs.push_back({{"true_index", fc.true_index}});
  j["functions"] = funcs;
  return j.dump(2) + "\n";
}

CamoNetlist camo_from_json(const Netlist& base, const std::string& public_json, const std::string* secret_json) {
  json pub = json::parse(public_json);
  CamoNetlist c;
  c.base = base;
  c.scheme = SchemeId::parse(pub.at("scheme").get<std::string>());
  c.scale = pub.at("scale").get<double>();
  c.seed = pub.at("seed").get<std::uint64_t>();
  c.log = pub.value("log", std::vector<std::string>{});
  for (const json& p : pub.at("pins")) {
    PinChoice pc;
    pc.gate = gate_by_name(base, p.at("gate").get<std::string>());
    pc.pin = p.at("pin").get<unsigned>();
    for (const json& name : p.at("candidates")) pc.candidates.push_back({net_by_name(base, name.get<std::string>()), CandidateRole::Dummy});
    c.pin_choices.push_back(std::move(pc));
  }
  for (const json& f : pub.at("functions")) {
    FunctionChoice fc;
    fc.gate = gate_by_name(base, f.at("gate").get<std::string>());
    fc.functions = f.at("functions").get<std::vector<TruthTable2>>();
    c.function_choices.push_back(std::move(fc));
  }
  if (secret_json) {
    json sec = json::parse(*secret_json);
    const json& pins = sec.at("pins");
    const json& funcs = sec.at("functions");
    if (pins.size() != c.pin_choices.size() || funcs.size() != c.function_choices.size()) {
      throw std::runtime_error("secret sidecar does not match the public sidecar");
    }
    for (std::size_t i = 0; i < pins.size(); ++i) {
      PinChoice& pc = c.pin_choices[i];
      pc.true_index = pins[i].at("true_index").get<unsigned>();
      const json& roles = pins[i].at("roles");
      if (roles.size() != pc.candidates.size()) throw std::runtime_error("secret sidecar role count mismatch");
      for (std::size_t r = 0; r < roles.size(); ++r) pc.candidates[r].role = role_from_string(roles[r].get<std::string>());
    }
    for (std::size_t i = 0; i < funcs.size(); ++i) c.function_choices[i].true_index = funcs[i].at("true_index").get<unsigned>();
  }
  return c;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace bcamo
