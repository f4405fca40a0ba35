#include "qcmc/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qcmc {

json hamiltonian_to_json(const Hamiltonian& h) {
  json terms = json::array();
  for (const auto& t : h.terms()) terms.push_back({{"coeff", t.coeff}, {"pauli", t.pauli.to_string()}});
  return {{"n", h.n()}, {"terms", terms}};
}

Hamiltonian hamiltonian_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  std::vector<Term> terms;
  for (const auto& t : j.at("terms")) terms.push_back({t.at("coeff").get<double>(), PauliString::parse(t.at("pauli").get<std::string>())});
  return Hamiltonian(n, std::move(terms));
}

LatticeSpec lattice_from_json(const json& j) {
  LatticeSpec s;
  const auto type = j.at("type").get<std::string>();
  if (type == "fermi-hubbard" || type == "hubbard") s.model = Model::FermiHubbard;
  else if (type == "heisenberg") s.model = Model::Heisenberg;
  else throw std::invalid_argument("unknown model type '" + type + "'");
  s.sites = j.at("sites").get<int>();
  s.J = j.value("J", 1.0);
  s.U = j.value("U", 0.0);
  s.h = j.value("h", 0.0);
  if (j.contains("hopping")) s.hopping = j.at("hopping").get<std::vector<std::vector<double>>>();
  s.require_bipartite = j.value("require_bipartite", true);
  return s;
}

json lattice_to_json(const LatticeSpec& s) {
  json j{{"type", s.model == Model::FermiHubbard ? "fermi-hubbard" : "heisenberg"}, {"sites", s.sites}, {"J", s.J}};
  if (s.model == Model::FermiHubbard) j["U"] = s.U;
  else j["h"] = s.h;
  if (!s.hopping.empty()) j["hopping"] = s.hopping;
  return j;
}

json formula_to_json(const FormulaSpec& f) {
  json j{{"name", f.name()}, {"kind", f.kind == FormulaKind::Taylor ? "taylor" : "exact-lor"}, {"flavor", to_string(f.flavor)},
         {"order", f.order}, {"dt", f.dt}, {"h_tot", f.h_tot}, {"mode", to_string(f.mode)},
         {"C_L", f.c_l}, {"C_T", f.c_t}, {"C_A", f.c_a}, {"phi", f.phi}};
  json lead = json::array();
  if (f.kind == FormulaKind::Taylor) {
    for (const auto& t : f.leading.terms) lead.push_back({{"alpha", t.alpha}, {"pauli", t.tau.to_string()}});
  } else {
    for (const auto& t : f.custom.pauli_terms) lead.push_back({{"a", t.alpha}, {"pauli", t.tau.to_string()}});
    for (const auto& t : f.custom.rotations.terms) lead.push_back({{"beta", t.beta}, {"sign", t.sign}, {"pauli", t.tau.to_string()}});
  }
  j["leading"] = lead;
  return j;
}

namespace {

PauliChannel channel_from_json(const json& j, int qubits) {
  if (j.contains("rates")) return PauliChannel::from_rates(qubits, j.at("rates").get<std::map<std::string, double>>());
  const auto model = j.value("model", std::string("depolarizing"));
  if (model != "depolarizing") throw std::invalid_argument("unknown channel model '" + model + "'");
  return PauliChannel::depolarizing(qubits, j.at("p").get<double>());
}

json channel_to_json(const PauliChannel& c) {
  json rates = json::object();
  for (int i = 1; i < c.size(); ++i)
    if (c.p[i] != 0.0) rates[pauli_label(c.qubits, i)] = c.p[i];
  return {{"rates", rates}};
}

}  // namespace

NoiseModel noise_from_json(const json& j) {
  NoiseModel m;
  if (j.contains("default_two_qubit")) m.two_qubit = channel_from_json(j.at("default_two_qubit"), 2);
  if (j.contains("single_qubit")) m.one_qubit = channel_from_json(j.at("single_qubit"), 1);
  m.s1_noise_sites = j.value("s1_noise_sites", -1);
  if (j.contains("overrides"))
    for (const auto& o : j.at("overrides")) m.overrides[o.at("location").get<std::size_t>()] = channel_from_json(o, 2);
  m.validate();
  return m;
}

json noise_to_json(const NoiseModel& m) {
  json o = json::array();
  for (const auto& [loc, ch] : m.overrides) {
    json e = channel_to_json(ch);
    e["location"] = loc;
    o.push_back(e);
  }
  return {{"default_two_qubit", channel_to_json(m.two_qubit)}, {"single_qubit", channel_to_json(m.one_qubit)},
          {"s1_noise_sites", m.s1_noise_sites}, {"overrides", o}};
}

StateSpec state_from_json(const json& j, int n) {
  if (j.is_string()) {
    auto s = StateSpec::from_product(j.get<std::string>());
    if (s.n() != n) throw std::invalid_argument("state literal has the wrong length");
    return s;
  }
  std::string chars(n, '-');
  for (int q : j.at("occupied").get<std::vector<int>>()) {
    if (q < 1 || q > n) throw std::invalid_argument("occupied orbital out of range");
    chars[q - 1] = '+';
  }
  return StateSpec::from_product(chars);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace qcmc
