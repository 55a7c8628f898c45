#include "qcm/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qcm {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

std::string gate_name(Gate g) {
  switch (g) {
    case Gate::H: return "H";
    case Gate::Not: return "NOT";
    case Gate::Y: return "Y";
    case Gate::Z: return "Z";
  }
  return "?";
}

std::optional<Gate> gate_from_name(const std::string& name) {
  if (name == "H") return Gate::H;
  if (name == "NOT") return Gate::Not;
  if (name == "Y") return Gate::Y;
  if (name == "Z") return Gate::Z;
  return std::nullopt;
}

std::vector<std::pair<std::uint32_t, Amplitude>> apply_single_bit_gate(std::uint32_t value,
                                                                       std::uint32_t bit, Gate gate,
                                                                       bool adjoint) {
  const std::uint32_t mask = 1u << bit;
  const bool b = (value & mask) != 0;
  const std::uint32_t v0 = value & ~mask;
  const std::uint32_t v1 = value | mask;
  // 2x2 matrices column-indexed by the input bit; all four gates are Hermitian,
  // so the adjoint equals the matrix itself, but we conjugate-transpose anyway.
  Amplitude m00, m01, m10, m11;
  switch (gate) {
    case Gate::H:
      m00 = m01 = m10 = kInvSqrt2;
      m11 = -kInvSqrt2;
      break;
    case Gate::Not:
      m00 = m11 = 0.0;
      m01 = m10 = 1.0;
      break;
    case Gate::Y:
      m00 = m11 = 0.0;
      m01 = Amplitude(0.0, -1.0);
      m10 = Amplitude(0.0, 1.0);
      break;
    case Gate::Z:
      m00 = 1.0;
      m01 = m10 = 0.0;
      m11 = -1.0;
      break;
  }
  if (adjoint) {
    const Amplitude t = m01;
    m01 = std::conj(m10);
    m10 = std::conj(t);
    m00 = std::conj(m00);
    m11 = std::conj(m11);
  }
  const Amplitude out0 = b ? m01 : m00;
  const Amplitude out1 = b ? m11 : m10;
  std::vector<std::pair<std::uint32_t, Amplitude>> result;
  if (std::abs(out0) >= kPruneThreshold) result.emplace_back(v0, out0);
  if (std::abs(out1) >= kPruneThreshold) result.emplace_back(v1, out1);
  return result;
}

std::size_t QuantumState::register_index(const std::string& name) const {
  const auto it = std::find(register_names_.begin(), register_names_.end(), name);
  if (it == register_names_.end()) {
    throw UnknownRegister("unknown register '" + name + "'");
  }
  return static_cast<std::size_t>(it - register_names_.begin());
}

void QuantumState::accumulate(const BasisLabel& label, Amplitude amp) {
  auto [it, inserted] = terms_.try_emplace(label, amp);
  if (!inserted) it->second += amp;
}

void QuantumState::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < kPruneThreshold) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

double norm(const QuantumState& state) {
  double total = 0.0;
  for (const auto& [label, amp] : state.terms()) total += std::norm(amp);
  return total;
}

QuantumState apply_gate(const QuantumState& state, const std::string& register_name,
                        std::uint32_t bit_index, Gate gate, bool adjoint) {
  if (bit_index >= state.word_size()) {
    throw BitOutOfRange("bit index " + std::to_string(bit_index) + " out of range for " +
                        std::to_string(state.word_size()) + "-bit registers");
  }
  const std::size_t idx = state.register_index(register_name);
  QuantumState out(state.word_size(), state.register_names());
  for (const auto& [label, amp] : state.terms()) {
    for (const auto& [value, factor] : apply_single_bit_gate(label.regs[idx], bit_index, gate, adjoint)) {
      BasisLabel next = label;
      next.regs[idx] = value;
      out.accumulate(next, amp * factor);
    }
  }
  out.prune();
  return out;
}

std::map<std::vector<std::uint32_t>, double> measure_distribution(
    const QuantumState& state, const std::vector<std::string>& observed) {
  const double n = norm(state);
  if (std::abs(n - 1.0) > kNormTolerance) {
    throw UnnormalizedState("cannot measure a state with norm " + std::to_string(n));
  }
  std::vector<std::size_t> indices;
  indices.reserve(observed.size());
  for (const auto& name : observed) indices.push_back(state.register_index(name));
  std::map<std::vector<std::uint32_t>, double> dist;
  for (const auto& [label, amp] : state.terms()) {
    std::vector<std::uint32_t> key;
    key.reserve(indices.size());
    for (std::size_t i : indices) key.push_back(label.regs[i]);
    dist[key] += std::norm(amp);
  }
  return dist;
}

std::vector<std::vector<std::uint32_t>> sample(const QuantumState& state,
                                               const std::vector<std::string>& observed,
                                               std::size_t count, std::uint64_t seed) {
  const auto dist = measure_distribution(state, observed);
  std::vector<std::pair<std::vector<std::uint32_t>, double>> cdf;
  cdf.reserve(dist.size());
  double acc = 0.0;
  for (const auto& [key, p] : dist) {
    acc += p;
    cdf.emplace_back(key, acc);
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Portable uniform double in [0, 1): the top 53 bits of the generator output.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u,
                               [](const auto& entry, double v) { return entry.second <= v; });
    if (it == cdf.end()) it = std::prev(cdf.end());
    out.push_back(it->first);
  }
  return out;
}

namespace {

Projection project(const QuantumState& state, const BasisLabel& label, const ControlFields& fields,
                   bool control_side) {
  Projection p;
  if (fields.pc == control_side) p.pc = label.pc;
  if (fields.br == control_side) p.br = label.br;
  if (fields.in == control_side) p.in = label.in;
  if (fields.history == control_side) p.history = label.history;
  for (std::size_t i = 0; i < state.register_names().size(); ++i) {
    const std::string& name = state.register_names()[i];
    const bool selected =
        std::find(fields.registers.begin(), fields.registers.end(), name) != fields.registers.end();
    if (selected == control_side) p.registers.emplace_back(name, label.regs[i]);
  }
  return p;
}

// True iff a = lambda * b for unit-modulus lambda, over sparse projections.
bool proportional_projections(const std::map<Projection, Amplitude>& a,
                              const std::map<Projection, Amplitude>& b, double tol) {
  const Projection* best = nullptr;
  double best_mod = 0.0;
  for (const auto& [key, amp] : a) {
    if (std::abs(amp) > best_mod) {
      best_mod = std::abs(amp);
      best = &key;
    }
  }
  if (best == nullptr) return false;
  const auto it = b.find(*best);
  if (it == b.end() || std::abs(it->second) < tol) return false;
  const Amplitude lambda = a.at(*best) / it->second;
  if (std::abs(std::abs(lambda) - 1.0) > tol) return false;
  for (const auto& [key, amp] : a) {
    const auto bit = b.find(key);
    const Amplitude other = bit == b.end() ? Amplitude(0.0) : bit->second;
    if (std::abs(amp - lambda * other) > tol) return false;
  }
  for (const auto& [key, amp] : b) {
    if (!a.contains(key) && std::abs(amp) > tol) return false;
  }
  return true;
}

}  // namespace

SeparabilityReport separability_verdict(const QuantumState& state, const ControlFields& fields) {
  std::map<Projection, std::map<Projection, Amplitude>> groups;
  for (const auto& [label, amp] : state.terms()) {
    groups[project(state, label, fields, true)][project(state, label, fields, false)] += amp;
  }
  // Weightless groups can appear if amplitudes cancel exactly within a control value.
  for (auto it = groups.begin(); it != groups.end();) {
    double weight = 0.0;
    for (const auto& [key, amp] : it->second) weight += std::norm(amp);
    if (weight < kPruneThreshold) {
      it = groups.erase(it);
    } else {
      ++it;
    }
  }
  SeparabilityReport report;
  if (groups.size() == 1) {
    report.separable = true;
    report.control = groups.begin()->first;
    return report;
  }
  report.separable = false;
  // Pick the two heaviest control values for the witness.
  std::vector<std::pair<double, const Projection*>> weights;
  for (const auto& [control, data] : groups) {
    double w = 0.0;
    for (const auto& [key, amp] : data) w += std::norm(amp);
    weights.emplace_back(w, &control);
  }
  std::sort(weights.begin(), weights.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  report.control_a = *weights[0].second;
  report.control_b = *weights[1].second;
  auto normalized = [&](const Projection& control) {
    std::map<Projection, Amplitude> data = groups.at(control);
    double w = 0.0;
    for (const auto& [key, amp] : data) w += std::norm(amp);
    const double scale = 1.0 / std::sqrt(w);
    for (auto& [key, amp] : data) amp *= scale;
    return data;
  };
  report.conditional_a = normalized(report.control_a);
  report.conditional_b = normalized(report.control_b);
  report.proportional =
      proportional_projections(report.conditional_a, report.conditional_b, kNormTolerance);
  return report;
}

bool equal_up_to_global_phase(const QuantumState& a, const QuantumState& b, double tol) {
  if (norm(a) < tol || norm(b) < tol) {
    throw ZeroState("equal_up_to_global_phase is undefined for (near-)zero states");
  }
  const BasisLabel* best = nullptr;
  double best_mod = 0.0;
  for (const auto& [label, amp] : a.terms()) {
    if (std::abs(amp) > best_mod) {
      best_mod = std::abs(amp);
      best = &label;
    }
  }
  const auto it = b.terms().find(*best);
  if (it == b.terms().end() || std::abs(it->second) < tol) return false;
  const Amplitude lambda = a.terms().at(*best) / it->second;
  if (std::abs(std::abs(lambda) - 1.0) > tol) return false;
  for (const auto& [label, amp] : a.terms()) {
    const auto bit = b.terms().find(label);
    const Amplitude other = bit == b.terms().end() ? Amplitude(0.0) : bit->second;
    if (std::abs(amp - lambda * other) > tol) return false;
  }
  for (const auto& [label, amp] : b.terms()) {
    if (!a.terms().contains(label) && std::abs(amp) > tol) return false;
  }
  return true;
}

nlohmann::ordered_json state_to_json(const QuantumState& state) {
  nlohmann::ordered_json j;
  j["word_size"] = state.word_size();
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& [label, amp] : state.terms()) {
    nlohmann::ordered_json term;
    term["amp"] = {amp.real(), amp.imag()};
    term["pc"] = label.pc ? nlohmann::ordered_json(*label.pc) : nlohmann::ordered_json(nullptr);
    term["br"] = label.br ? nlohmann::ordered_json(*label.br) : nlohmann::ordered_json(nullptr);
    term["in"] = label.in ? nlohmann::ordered_json(*label.in) : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json regs = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < state.register_names().size(); ++i) {
      regs[state.register_names()[i]] = label.regs[i];
    }
    term["regs"] = regs;
    term["history"] =
        label.history ? nlohmann::ordered_json(*label.history) : nlohmann::ordered_json(nullptr);
    terms.push_back(std::move(term));
  }
  j["terms"] = std::move(terms);
  return j;
}

QuantumState state_from_json(const nlohmann::json& j) {
  const std::uint32_t k = j.at("word_size").get<std::uint32_t>();
  // Register order: first appearance across terms.
  std::vector<std::string> names;
  for (const auto& term : j.at("terms")) {
    for (const auto& [name, value] : term.at("regs").items()) {
      if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    }
  }
  QuantumState state(k, names);
  for (const auto& term : j.at("terms")) {
    BasisLabel label;
    label.regs.assign(names.size(), 0);
    for (const auto& [name, value] : term.at("regs").items()) {
      label.regs[state.register_index(name)] = value.get<std::uint32_t>();
    }
    if (term.contains("pc") && !term.at("pc").is_null()) label.pc = term.at("pc").get<std::uint32_t>();
    if (term.contains("br") && !term.at("br").is_null()) label.br = term.at("br").get<std::int64_t>();
    if (term.contains("in") && !term.at("in").is_null()) label.in = term.at("in").get<std::string>();
    if (term.contains("history") && !term.at("history").is_null()) {
      label.history = term.at("history").get<std::vector<std::uint32_t>>();
    }
    const auto& amp = term.at("amp");
    state.accumulate(label, Amplitude(amp.at(0).get<double>(), amp.at(1).get<double>()));
  }
  state.prune();
  return state;
}

}  // namespace qcm
